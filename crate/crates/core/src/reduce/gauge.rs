use serde::Serialize;

use crate::codes::{css_from_matrices, CssCode};
use crate::error::Result;
use crate::f2la::BinMatrix;

/// Provenance of [`gauge_code`].
///
/// A split X row keeps its index for its first piece; the other pieces and
/// all new qubits are appended in generation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeMap {
    pub n: usize,
    pub n_x: usize,
    /// Per original X row, the new X rows in chain order (length 1 if unsplit).
    pub split_rows: Vec<Vec<usize>>,
    /// Per original X row, the new qubits in chain order (empty if unsplit).
    pub new_qubits: Vec<Vec<usize>>,
    /// Per Z row, the new qubits added by the commutation repair, ascending.
    pub z_patch: Vec<Vec<usize>>,
}

/// Splits every X row of weight `w > 3` into a chain of `w` rows joined by
/// `w − 1` new qubits, then repairs the Z rows.
pub fn gauge_code(q: &CssCode) -> Result<(CssCode, GaugeMap)> {
    let (n, n_x) = (q.n(), q.n_x());
    let mut x_rows: Vec<Vec<usize>> = (0..n_x).map(|r| q.h_x().row_support(r)).collect();
    let mut split_rows = Vec::with_capacity(n_x);
    let mut new_qubits = Vec::with_capacity(n_x);
    let mut z_rows: Vec<Vec<usize>> = (0..q.n_z()).map(|r| q.h_z().row_support(r)).collect();
    let mut z_patch = vec![Vec::new(); q.n_z()];
    let mut next_qubit = n;
    for r in 0..n_x {
        let support = x_rows[r].clone();
        let w = support.len();
        if w <= 3 {
            split_rows.push(vec![r]);
            new_qubits.push(Vec::new());
            continue;
        }
        let fresh: Vec<usize> = (next_qubit..next_qubit + w - 1).collect();
        next_qubit += w - 1;
        let mut pieces = Vec::with_capacity(w);
        for (i, &qb) in support.iter().enumerate() {
            let mut piece = Vec::with_capacity(3);
            if i > 0 {
                piece.push(fresh[i - 1]);
            }
            piece.push(qb);
            if i + 1 < w {
                piece.push(fresh[i]);
            }
            piece.sort_unstable();
            pieces.push(piece);
        }
        let mut ids = vec![r];
        x_rows[r] = pieces[0].clone();
        for piece in pieces.into_iter().skip(1) {
            ids.push(x_rows.len());
            x_rows.push(piece);
        }
        split_rows.push(ids);
        for (z, zrow) in z_rows.iter_mut().enumerate() {
            let mut odd = false;
            for (i, qb) in support.iter().take(w - 1).enumerate() {
                odd ^= zrow.binary_search(qb).is_ok();
                if odd {
                    z_patch[z].push(fresh[i]);
                }
            }
            zrow.extend(z_patch[z].iter().filter(|&&f| f >= fresh[0]));
        }
        new_qubits.push(fresh);
    }
    let h_x = BinMatrix::from_supports(next_qubit, &x_rows);
    let h_z = BinMatrix::from_supports(next_qubit, &z_rows);
    let code = css_from_matrices(h_x, h_z)?;
    Ok((code, GaugeMap { n, n_x, split_rows, new_qubits, z_patch }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hamming_7_4;
    use crate::reduce::copy_code;

    #[test]
    fn weight_four_row_matches_chain_pattern() {
        // single row on 4 qubits, no Z checks
        let q = css_from_matrices(BinMatrix::from_dense(&[[1, 1, 1, 1]]), BinMatrix::zeros(0, 4)).unwrap();
        let (g, m) = gauge_code(&q).unwrap();
        assert_eq!(g.n(), 7);
        let expect = BinMatrix::from_supports(7, &[vec![0, 4], vec![1, 4, 5], vec![2, 5, 6], vec![3, 6]]);
        assert_eq!(g.h_x(), &expect);
        assert_eq!(m.split_rows, vec![vec![0, 1, 2, 3]]);
        assert_eq!(m.new_qubits, vec![vec![4, 5, 6]]);
    }

    #[test]
    fn weight_three_rows_untouched() {
        let hx = BinMatrix::from_supports(4, &[vec![0, 1, 2]]);
        let hz = BinMatrix::from_supports(4, &[vec![0, 1]]);
        let q = css_from_matrices(hx, hz).unwrap();
        let (g, m) = gauge_code(&q).unwrap();
        assert_eq!(g, q);
        assert!(m.new_qubits[0].is_empty());
    }

    #[test]
    fn copied_steane_gauged() {
        let h = hamming_7_4().h().clone();
        let q = css_from_matrices(h.clone(), h).unwrap();
        let (c, _) = copy_code(&q).unwrap();
        let (g, m) = gauge_code(&c).unwrap();
        assert!(g.w_x() <= 3);
        assert!(g.q_x() <= 3);
        assert_eq!(g.k(), 1);
        for (r, ids) in m.split_rows.iter().enumerate() {
            let mut acc = crate::f2la::BitVec::zeros(c.n());
            for &id in ids {
                for qb in g.h_x().row(id).iter_ones().filter(|&qb| qb < c.n()) {
                    acc.toggle(qb);
                }
            }
            assert_eq!(acc, c.h_x().row(r));
        }
    }
}
