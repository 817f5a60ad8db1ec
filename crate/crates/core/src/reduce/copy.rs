use serde::Serialize;

use crate::codes::{css_from_matrices, CssCode};
use crate::error::{Error, Result};
use crate::f2la::BinMatrix;

/// Provenance of [`copy_code`].
///
/// New qubit `(i, j)` (copy `j` of original qubit `i`, 0-based) sits at index
/// `i·copies + j`. Original X row `r` keeps index `r`; glue row `g` sits at
/// `n_x + g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyMap {
    pub n: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub copies: usize,
    /// Per original X row, `(qubit, copy)` pairs in ascending qubit order.
    pub assigned: Vec<Vec<(usize, usize)>>,
    /// Per glue row, `(qubit, j)`: the row links copies `j` and `j + 1`.
    pub glue_rows: Vec<(usize, usize)>,
}

impl CopyMap {
    #[must_use]
    pub fn index(&self, qubit: usize, copy: usize) -> usize {
        qubit * self.copies + copy
    }

    /// `(original qubit, copy)` of a new qubit.
    #[must_use]
    pub fn group_of(&self, new_qubit: usize) -> (usize, usize) {
        (new_qubit / self.copies, new_qubit % self.copies)
    }

    #[must_use]
    pub fn assigned_copy(&self, row: usize, qubit: usize) -> Option<usize> {
        self.assigned.get(row)?.iter().find(|&&(q, _)| q == qubit).map(|&(_, c)| c)
    }

    #[must_use]
    pub fn glue_row_index(&self, g: usize) -> usize {
        self.n_x + g
    }
}

/// Greedy copy assignment: rows top-down, each takes the lowest free copy.
#[must_use]
pub fn greedy_assignment(h_x: &BinMatrix) -> Vec<Vec<(usize, usize)>> {
    let mut next = vec![0usize; h_x.cols()];
    (0..h_x.rows())
        .map(|r| {
            h_x.row(r)
                .iter_ones()
                .map(|i| {
                    let c = next[i];
                    next[i] += 1;
                    (i, c)
                })
                .collect()
        })
        .collect()
}

/// Copies every qubit `q_X` times and glues the copies with weight-2 X checks.
pub fn copy_code(q: &CssCode) -> Result<(CssCode, CopyMap)> {
    copy_code_with(q, greedy_assignment(q.h_x()))
}

/// [`copy_code`] with an explicit collision-free assignment.
pub fn copy_code_with(q: &CssCode, assigned: Vec<Vec<(usize, usize)>>) -> Result<(CssCode, CopyMap)> {
    let copies = q.q_x();
    if copies == 0 {
        return Err(Error::Invalid("copying needs q_X ≥ 1".into()));
    }
    let (n, n_x) = (q.n(), q.n_x());
    if assigned.len() != n_x {
        return Err(Error::MapMismatch(format!("assignment has {} rows, code has {n_x}", assigned.len())));
    }
    let mut taken = vec![vec![false; copies]; n];
    for (r, row) in assigned.iter().enumerate() {
        let qubits: Vec<usize> = row.iter().map(|&(i, _)| i).collect();
        if qubits != q.h_x().row_support(r) {
            return Err(Error::MapMismatch(format!("assignment of row {r} does not cover its support")));
        }
        for &(i, c) in row {
            if c >= copies || std::mem::replace(&mut taken[i][c], true) {
                return Err(Error::MapMismatch(format!("copy {c} of qubit {i} assigned twice or out of range")));
            }
        }
    }
    let mut rows: Vec<Vec<usize>> =
        assigned.iter().map(|row| row.iter().map(|&(i, c)| i * copies + c).collect()).collect();
    let mut glue_rows = Vec::with_capacity(n * (copies - 1));
    for i in 0..n {
        for j in 0..copies - 1 {
            rows.push(vec![i * copies + j, i * copies + j + 1]);
            glue_rows.push((i, j));
        }
    }
    let h_x = BinMatrix::from_supports(n * copies, &rows);
    let h_z = q.h_z().kron(&BinMatrix::from_dense(&[vec![1u8; copies]]));
    let code = css_from_matrices(h_x, h_z)?;
    Ok((code, CopyMap { n, n_x, n_z: q.n_z(), copies, assigned, glue_rows }))
}
