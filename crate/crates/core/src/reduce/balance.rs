use serde::Serialize;

use crate::codes::{css_from_matrices, repetition_code, ClassicalCode, CssCode};
use crate::error::{Error, Result};
use crate::f2la::{BinMatrix, BitVec, RowBasis};

/// Where a qubit of a balanced code lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Copy of original qubit `qubit` in classical column `col`.
    A { qubit: usize, col: usize },
    /// Original X row `row` paired with classical check `check`.
    B { row: usize, check: usize },
}

/// Provenance of [`balance_x`] / [`balance_z`].
///
/// All fields describe the X-oriented construction; for a dual map (built by
/// [`balance_z`]) "X" and "Z" are exchanged throughout.
///
/// Region A qubit `(i, c)` sits at `i·n_c + c`, region B qubit `(s, β)` at
/// `n·n_c + s·r_c + β`. X row `(s, c)` sits at `s·n_c + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceMap {
    pub dual: bool,
    pub n: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub n_c: usize,
    pub r_c: usize,
    #[serde(skip)]
    pub classical: BinMatrix,
    /// Current index of each top row `(z, c)`, indexed by `z·n_c + c`;
    /// `None` once pruned by height selection.
    pub top_rows: Vec<Option<usize>>,
    /// Index of the first bottom row; bottom row `(i, β)` follows at `+ i·r_c + β`.
    pub bottom_offset: usize,
}

impl BalanceMap {
    #[must_use]
    pub fn a_index(&self, qubit: usize, col: usize) -> usize {
        qubit * self.n_c + col
    }

    #[must_use]
    pub fn b_index(&self, row: usize, check: usize) -> usize {
        self.n * self.n_c + row * self.r_c + check
    }

    #[must_use]
    pub fn region(&self, idx: usize) -> Region {
        let a = self.n * self.n_c;
        if idx < a {
            Region::A { qubit: idx / self.n_c, col: idx % self.n_c }
        } else {
            let off = idx - a;
            Region::B { row: off / self.r_c, check: off % self.r_c }
        }
    }

    #[must_use]
    pub fn new_n(&self) -> usize {
        self.n * self.n_c + self.n_x * self.r_c
    }

    #[must_use]
    pub fn bottom_count(&self) -> usize {
        self.n * self.r_c
    }

    /// Whether top row `(z, c)` is still present.
    #[must_use]
    pub fn top_row(&self, z: usize, col: usize) -> Option<usize> {
        self.top_rows[z * self.n_c + col]
    }

    /// Kind of a current (X-oriented) Z row index.
    #[must_use]
    pub fn z_row_kind(&self, row: usize) -> ZRowKind {
        if row >= self.bottom_offset {
            let off = row - self.bottom_offset;
            ZRowKind::Bottom { qubit: off / self.r_c, check: off % self.r_c }
        } else {
            let pos = self.top_rows.iter().position(|&t| t == Some(row)).expect("row index in range");
            ZRowKind::Top { z: pos / self.n_c, col: pos % self.n_c }
        }
    }
}

/// Rows of the height-selectable family (`Z[T]`) versus the rows coupling
/// region A to region B (`Z[B]`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZRowKind {
    Top { z: usize, col: usize },
    Bottom { qubit: usize, check: usize },
}

/// Distance balancing in the X direction with classical code `c`:
/// `H′_X = (H_X⊗I | I⊗H_Cᵀ)`, `H′_Z = [[H_Z⊗I, 0], [I⊗H_C, H_Xᵀ⊗I]]`.
pub fn balance_x(q: &CssCode, c: &ClassicalCode) -> Result<(CssCode, BalanceMap)> {
    let hc = c.h();
    let (n_c, r_c) = (hc.cols(), hc.rows());
    let (n, n_x, n_z) = (q.n(), q.n_x(), q.n_z());
    let id_c = BinMatrix::identity(n_c);
    let h_x = q.h_x().kron(&id_c).hstack(&BinMatrix::identity(n_x).kron(&hc.transpose()))?;
    let top = q.h_z().kron(&id_c).hstack(&BinMatrix::zeros(n_z * n_c, n_x * r_c))?;
    let bottom = BinMatrix::identity(n).kron(hc).hstack(&q.h_x().transpose().kron(&BinMatrix::identity(r_c)))?;
    let h_z = top.vstack(&bottom)?;
    let code = css_from_matrices(h_x, h_z)?;
    let map = BalanceMap {
        dual: false,
        n,
        n_x,
        n_z,
        n_c,
        r_c,
        classical: hc.clone(),
        top_rows: (0..n_z * n_c).map(Some).collect(),
        bottom_offset: n_z * n_c,
    };
    Ok((code, map))
}

/// Dual balancing: [`balance_x`] on the swapped code, swapped back.
pub fn balance_z(q: &CssCode, c: &ClassicalCode) -> Result<(CssCode, BalanceMap)> {
    let (code, mut map) = balance_x(&q.swapped(), c)?;
    map.dual = true;
    Ok((code.swapped(), map))
}

/// Thickening: [`balance_x`] with the length-`len` repetition code.
pub fn thicken(q: &CssCode, len: usize) -> Result<(CssCode, BalanceMap)> {
    balance_x(q, &repetition_code(len)?)
}

/// Orients a balanced code so that the map reads X-first.
fn oriented(q: &CssCode, m: &BalanceMap) -> CssCode {
    if m.dual {
        q.swapped()
    } else {
        q.clone()
    }
}

fn check_map(q: &CssCode, m: &BalanceMap) -> Result<()> {
    let q = oriented(q, m);
    let tops = m.top_rows.iter().flatten().count();
    if q.n() != m.new_n() || q.n_z() != tops + m.bottom_count() || q.n_x() != m.n_x * m.n_c {
        return Err(Error::MapMismatch("balanced code and map disagree in size".into()));
    }
    Ok(())
}

/// Keeps only top row `(z, heights[z] − 1)` for every original row `z`
/// (heights are 1-based). Bottom rows are untouched.
pub fn choose_heights(q_thick: &CssCode, m: &BalanceMap, heights: &[usize]) -> Result<(CssCode, BalanceMap)> {
    check_map(q_thick, m)?;
    if heights.len() != m.n_z {
        return Err(Error::Invalid(format!("{} heights given for {} rows", heights.len(), m.n_z)));
    }
    if let Some(&h) = heights.iter().find(|&&h| h == 0 || h > m.n_c) {
        return Err(Error::Invalid(format!("height {h} outside 1..={}", m.n_c)));
    }
    let span = RowBasis::new(&m.classical);
    for j in 1..m.n_c {
        if !span.contains(&BitVec::from_support(m.n_c, &[0, j])) {
            return Err(Error::MapMismatch(
                "height selection needs a classical code whose checks connect all bits".into(),
            ));
        }
    }
    let q = oriented(q_thick, m);
    let mut keep = Vec::new();
    let mut top_rows = vec![None; m.n_z * m.n_c];
    for (z, &h) in heights.iter().enumerate() {
        let Some(row) = m.top_row(z, h - 1) else {
            return Err(Error::MapMismatch(format!("top row ({z}, {h}) was already pruned")));
        };
        top_rows[z * m.n_c + h - 1] = Some(keep.len());
        keep.push(row);
    }
    let bottom_offset = keep.len();
    keep.extend(m.bottom_offset..m.bottom_offset + m.bottom_count());
    let code = css_from_matrices(q.h_x().clone(), q.h_z().select_rows(&keep))?;
    let map = BalanceMap { top_rows, bottom_offset, ..m.clone() };
    let code = if m.dual { code.swapped() } else { code };
    Ok((code, map))
}

/// Result of [`greedy_heights`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightChoice {
    /// 1-based height per original row.
    pub heights: Vec<usize>,
    /// Largest number of retained top rows on one region-A qubit.
    pub achieved_max: usize,
    /// False when `achieved_max` exceeds the target.
    pub met_target: bool,
}

/// Picks, row by row, the lowest height keeping every touched region-A qubit
/// at or below `target_w` retained top rows; if none does, the height with the
/// smallest resulting load (lowest on ties).
pub fn greedy_heights(q_thick: &CssCode, m: &BalanceMap, target_w: usize) -> Result<HeightChoice> {
    check_map(q_thick, m)?;
    if target_w == 0 {
        return Err(Error::Invalid("target weight must be at least 1".into()));
    }
    if m.top_rows.iter().any(Option::is_none) {
        return Err(Error::MapMismatch("greedy height selection needs the unpruned code".into()));
    }
    let q = oriented(q_thick, m);
    let mut load = vec![0usize; m.n * m.n_c];
    let mut heights = Vec::with_capacity(m.n_z);
    for z in 0..m.n_z {
        let row = m.top_row(z, 0).expect("unpruned");
        let support: Vec<usize> = q.h_z().row(row).iter_ones().map(|a| a / m.n_c).collect();
        let peak = |c: usize| support.iter().map(|&i| load[i * m.n_c + c] + 1).max().unwrap_or(0);
        let col = (0..m.n_c)
            .find(|&c| peak(c) <= target_w)
            .unwrap_or_else(|| (0..m.n_c).min_by_key(|&c| (peak(c), c)).expect("n_c ≥ 1"));
        for &i in &support {
            load[i * m.n_c + col] += 1;
        }
        heights.push(col + 1);
    }
    let achieved_max = load.into_iter().max().unwrap_or(0);
    Ok(HeightChoice { heights, achieved_max, met_target: achieved_max <= target_w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{complex_to_css, css_to_complex, hamming_7_4, ChainComplex};
    use crate::hgp::tensor_complex;

    fn rep_complex(len: usize) -> ChainComplex {
        ChainComplex::from_boundaries(vec![repetition_code(len).unwrap().h().transpose()]).unwrap()
    }

    fn surface() -> CssCode {
        crate::hgp::hgp(&repetition_code(3).unwrap(), &repetition_code(3).unwrap()).unwrap()
    }

    #[test]
    fn thicken_matches_tensor_product() {
        let q = surface();
        for len in 1..=3 {
            let (t, m) = thicken(&q, len).unwrap();
            let viac = complex_to_css(&tensor_complex(&css_to_complex(&q), &rep_complex(len)), 1);
            if len > 1 {
                assert_eq!(t, viac.unwrap());
            }
            assert_eq!(t.n(), len * q.n() + q.n_x() * (len - 1));
            assert_eq!(t.n_z(), q.n_z() * len + q.n() * (len - 1));
            assert_eq!(m.new_n(), t.n());
        }
    }

    #[test]
    fn thicken_one_is_identity() {
        let q = surface();
        let (t, _) = thicken(&q, 1).unwrap();
        assert_eq!(t, q);
    }

    #[test]
    fn balance_with_hamming_multiplies_k() {
        let q = surface();
        let (b, m) = balance_x(&q, &hamming_7_4()).unwrap();
        assert_eq!(b.k(), 4 * q.k());
        assert_eq!(m.r_c, 3);
        let (bz, mz) = balance_z(&q, &hamming_7_4()).unwrap();
        assert_eq!(bz.k(), 4);
        assert!(mz.dual);
        assert_eq!(bz.swapped(), balance_x(&q.swapped(), &hamming_7_4()).unwrap().0);
    }

    #[test]
    fn regions_round_trip() {
        let q = surface();
        let (_, m) = thicken(&q, 3).unwrap();
        for i in 0..q.n() {
            for c in 0..3 {
                assert_eq!(m.region(m.a_index(i, c)), Region::A { qubit: i, col: c });
            }
        }
        for s in 0..q.n_x() {
            for b in 0..2 {
                assert_eq!(m.region(m.b_index(s, b)), Region::B { row: s, check: b });
            }
        }
    }

    #[test]
    fn heights_keep_k() {
        let q = surface();
        let (t, m) = thicken(&q, 3).unwrap();
        let hc = greedy_heights(&t, &m, 1).unwrap();
        let (p, pm) = choose_heights(&t, &m, &hc.heights).unwrap();
        assert_eq!(p.k(), q.k());
        assert_eq!(p.n_z(), q.n_z() + 2 * q.n());
        assert!(choose_heights(&p, &pm, &hc.heights).is_ok());
        assert!(choose_heights(&t, &m, &[0; 6]).is_err());
        assert!(choose_heights(&t, &m, &[1; 5]).is_err());
        assert!(hc.achieved_max <= q.q_z());
    }

    #[test]
    fn staircase_heights_spread_load() {
        let q = surface();
        let (t, m) = thicken(&q, q.n_z()).unwrap();
        let stairs: Vec<usize> = (1..=q.n_z()).collect();
        let (p, pm) = choose_heights(&t, &m, &stairs).unwrap();
        for a in 0..q.n() * m.n_c {
            let tops = (0..pm.bottom_offset).filter(|&r| p.h_z().get(r, a)).count();
            assert!(tops <= 1);
        }
    }

    #[test]
    fn single_row_height_is_one() {
        let q = css_from_matrices(BinMatrix::zeros(0, 2), BinMatrix::from_dense(&[[1, 1]])).unwrap();
        let (t, m) = thicken(&q, 3).unwrap();
        assert_eq!(greedy_heights(&t, &m, 5).unwrap().heights, vec![1]);
    }
}
