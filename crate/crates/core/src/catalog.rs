//! Small named codes used by tests, benches and the acceptance suite.

use crate::codes::{css_from_matrices, hamming_7_4, repetition_code, CssCode};
use crate::error::{Error, Result};
use crate::hgp::hgp;

/// [[7,1,3]] from the Hamming checks in both bases.
#[must_use]
pub fn steane() -> CssCode {
    let h = hamming_7_4().h().clone();
    css_from_matrices(h.clone(), h).expect("Hamming code is self-orthogonal")
}

/// Unrotated surface patch `hgp(rep(l), rep(l))`: `[[l² + (l−1)², 1, l]]`.
pub fn surface(l: usize) -> Result<CssCode> {
    hgp(&repetition_code(l)?, &repetition_code(l)?)
}

/// Replaces Z row `rows[0]` by the sum of all `rows`; the others stay.
pub fn merge_z(q: &CssCode, rows: &[usize]) -> Result<CssCode> {
    let Some((&first, rest)) = rows.split_first() else {
        return Err(Error::Invalid("no rows to merge".into()));
    };
    if let Some(&r) = rows.iter().find(|&&r| r >= q.n_z()) {
        return Err(Error::Invalid(format!("Z row {r} out of range")));
    }
    let mut hz = q.h_z().clone();
    for &r in rest.iter().filter(|&&r| r != first) {
        hz.add_row(first, r);
    }
    css_from_matrices(q.h_x().clone(), hz)
}

/// First pair of Z rows (lexicographic) whose sum has weight `w`, merged.
#[must_use]
pub fn heavy_face(q: &CssCode, w: usize) -> Option<CssCode> {
    for a in 0..q.n_z() {
        for b in a + 1..q.n_z() {
            let mut s = q.h_z().row(a);
            s.xor_assign(&q.h_z().row(b));
            if s.weight() == w {
                return merge_z(q, &[a, b]).ok();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{css_distance, Basis, Distance};

    #[test]
    fn named_params() {
        let s = steane();
        assert_eq!((s.n(), s.k(), s.w_x(), s.q_x()), (7, 1, 4, 3));
        for (l, n) in [(2, 5), (3, 13), (4, 25)] {
            let q = surface(l).unwrap();
            assert_eq!((q.n(), q.k()), (n, 1));
        }
    }

    #[test]
    fn heavy_faces() {
        let q = surface(3).unwrap();
        let h = heavy_face(&q, 6).unwrap();
        assert_eq!(h.w_z(), 6);
        assert_eq!(h.k(), q.k());
        assert_eq!(css_distance(&h, Basis::X).unwrap(), Distance::Finite(3));
        assert!(heavy_face(&q, 40).is_none());
        assert!(merge_z(&q, &[]).is_err());
    }
}
