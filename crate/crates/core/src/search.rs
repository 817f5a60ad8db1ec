//! Meet-in-the-middle search for the smallest set of generators whose XOR is a
//! nontrivial logical operator.
//!
//! A vector `v` is a nontrivial logical of the searched type iff its syndrome
//! against the opposite checks vanishes and its pairing with the opposite
//! logical basis does not. Both are linear, so each generator gets a
//! signature `(syndrome | pairing)` and a subset is a hit iff the XOR of its
//! signatures is `(0 | μ)` with `μ ≠ 0`. Tables are keyed by a random linear
//! 64-bit hash of the signature; every hash hit is re-verified exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2la::{BinMatrix, BitVec};

/// Default cap on meet-in-the-middle table entries.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 23;

/// Pairing widths above this are searched on the syndrome hash alone.
const FULL_KEY_MAX_K: usize = 6;

pub(crate) struct SubsetSearch {
    n_checks: usize,
    k: usize,
    sigs: Vec<BitVec>,
    hashes: Vec<u64>,
    target_hashes: Vec<u64>,
    table_cap: u64,
}

struct Table {
    size: usize,
    entries: Vec<(u64, u64)>,
}

impl SubsetSearch {
    /// `residuals` are the generator vectors, `checks` the opposite parity
    /// checks and `logicals` the opposite logical basis.
    pub(crate) fn new(residuals: &[BitVec], checks: &BinMatrix, logicals: &BinMatrix, table_cap: u64) -> Self {
        let n_checks = checks.rows();
        let k = logicals.rows();
        let sigs: Vec<BitVec> = residuals.iter().map(|v| checks.mul_vec(v).concat(&logicals.mul_vec(v))).collect();
        let full_key = k <= FULL_KEY_MAX_K;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5157_5221);
        let coord: Vec<u64> = (0..n_checks + k).map(|_| rng.random()).collect();
        let key_len = if full_key { n_checks + k } else { n_checks };
        let hash = |s: &BitVec| s.iter_ones().filter(|&c| c < key_len).fold(0u64, |h, c| h ^ coord[c]);
        let hashes = sigs.iter().map(hash).collect();
        let target_hashes = if full_key {
            (1u64..1 << k)
                .map(|mu| (0..k).filter(|j| mu >> j & 1 == 1).fold(0u64, |h, j| h ^ coord[n_checks + j]))
                .collect()
        } else {
            vec![0]
        };
        Self { n_checks, k, sigs, hashes, target_hashes, table_cap }
    }

    /// Smallest subset (of size ≤ `max_t`) hitting a nontrivial logical, as
    /// sorted generator indices. `None` when no subset up to `max_t` works.
    pub(crate) fn min_subset(&self, max_t: usize) -> Result<Option<Vec<usize>>> {
        if self.k == 0 {
            return Ok(None);
        }
        let g = self.sigs.len();
        let mut table: Option<Table> = None;
        for t in 1..=max_t.min(g) {
            let a = t.div_ceil(2);
            let b = t / 2;
            if table.as_ref().map_or(true, |tb| tb.size != b) {
                table = Some(self.build_table(b)?);
            }
            let tb = table.as_ref().expect("table built above");
            if let Some(hit) = self.probe(a, tb) {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }

    fn build_table(&self, b: usize) -> Result<Table> {
        let g = self.sigs.len();
        let count = binom(g, b);
        if count > self.table_cap {
            return Err(Error::Cap(format!(
                "meet-in-the-middle table needs C({g},{b}) = {count} entries, cap is {}; lower the search bound",
                self.table_cap
            )));
        }
        let mut entries = Vec::with_capacity(count as usize);
        let mut combo = Vec::with_capacity(b);
        let mut rank = 0u64;
        self.enumerate(0, b, &mut combo, 0, &mut |_, h| {
            entries.push((h, rank));
            rank += 1;
            false
        });
        entries.par_sort_unstable();
        Ok(Table { size: b, entries })
    }

    fn probe(&self, a: usize, tb: &Table) -> Option<Vec<usize>> {
        let g = self.sigs.len();
        (0..g).into_par_iter().find_map_first(|first| {
            let mut combo = vec![first];
            let mut found = None;
            self.enumerate(first + 1, a - 1, &mut combo, self.hashes[first], &mut |c, h| {
                found = self.match_half(c, h, tb);
                found.is_some()
            });
            found
        })
    }

    fn match_half(&self, half: &[usize], h: u64, tb: &Table) -> Option<Vec<usize>> {
        for &th in &self.target_hashes {
            let want = h ^ th;
            let start = tb.entries.partition_point(|e| e.0 < want);
            for &(eh, rank) in &tb.entries[start..] {
                if eh != want {
                    break;
                }
                let other = unrank(rank, self.sigs.len(), tb.size);
                if other.iter().any(|o| half.contains(o)) {
                    continue;
                }
                let mut all: Vec<usize> = half.iter().chain(&other).copied().collect();
                all.sort_unstable();
                if self.is_hit(&all) {
                    return Some(all);
                }
            }
        }
        None
    }

    fn is_hit(&self, subset: &[usize]) -> bool {
        let mut s = BitVec::zeros(self.n_checks + self.k);
        for &i in subset {
            s.xor_assign(&self.sigs[i]);
        }
        let ones: Vec<usize> = s.iter_ones().collect();
        !ones.is_empty() && ones.iter().all(|&c| c >= self.n_checks)
    }

    /// Visits all extensions of `combo` by `left` indices ≥ `from` in
    /// lexicographic order; stops early when `visit` returns true.
    fn enumerate(
        &self,
        from: usize,
        left: usize,
        combo: &mut Vec<usize>,
        h: u64,
        visit: &mut dyn FnMut(&[usize], u64) -> bool,
    ) -> bool {
        if left == 0 {
            return visit(combo, h);
        }
        let g = self.sigs.len();
        if g < left {
            return false;
        }
        for i in from..=g - left {
            combo.push(i);
            let stop = self.enumerate(i + 1, left - 1, combo, h ^ self.hashes[i], visit);
            combo.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub(crate) fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank(mut rank: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut c = 0;
    for i in 0..k {
        let left = k - i;
        loop {
            let block = binom(n - c - 1, left - 1);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        c += 1;
    }
    out
}
