//! Parameter checks for each transform. Every function returns the list of
//! violated relations; an empty list means the audit passed.

use crate::codes::CssCode;
use crate::f2la::{BinMatrix, RowBasis};

use super::{BalanceMap, CopyMap, GaugeMap};

macro_rules! expect {
    ($out:ident, $cond:expr, $($fmt:tt)+) => {
        if !$cond {
            $out.push(format!($($fmt)+));
        }
    };
}

/// Relations between a code and its copied version.
#[must_use]
pub fn copy_lemma(before: &CssCode, after: &CssCode, cm: &CopyMap) -> Vec<String> {
    let mut v = Vec::new();
    let (n, qx) = (before.n(), before.q_x());
    expect!(v, after.n() == qx * n, "n' = {} but q_X·n = {}", after.n(), qx * n);
    expect!(
        v,
        after.n_x() == before.n_x() + (qx - 1) * n,
        "n'_X = {} but n_X + (q_X−1)n = {}",
        after.n_x(),
        before.n_x() + (qx - 1) * n
    );
    expect!(v, after.n_z() == before.n_z(), "n'_Z changed");
    expect!(v, after.w_x() == before.w_x().max(if qx > 1 { 2 } else { 0 }), "w'_X = {}", after.w_x());
    expect!(v, after.q_x() == qx.min(3), "q'_X = {} but min(q_X, 3) = {}", after.q_x(), qx.min(3));
    expect!(v, after.w_z() == qx * before.w_z(), "w'_Z = {} but q_X·w_Z = {}", after.w_z(), qx * before.w_z());
    expect!(v, after.q_z() == before.q_z(), "q'_Z changed");
    expect!(v, after.k() == before.k(), "k' = {} but k = {}", after.k(), before.k());
    expect!(v, cm.glue_rows.len() == (qx - 1) * n, "glue row count");
    // stabilizer group: rows of H_X on first copies plus the repetition checks
    let mut reference = before.h_x().kron(&BinMatrix::from_supports(qx, &[vec![0]]));
    let glue = BinMatrix::identity(n).kron(crate::codes::repetition_code(qx).expect("q_X ≥ 1").h());
    reference = reference.vstack(&glue).expect("same width");
    expect!(v, same_rowspace(after.h_x(), &reference), "X stabilizer group differs from first-copy form");
    v
}

/// Relations between a code and its gauged version.
#[must_use]
pub fn gauge_lemma(before: &CssCode, after: &CssCode, gm: &GaugeMap) -> Vec<String> {
    let mut v = Vec::new();
    let extra: usize = gm.new_qubits.iter().map(Vec::len).sum();
    let split_extra: usize = gm.split_rows.iter().map(|s| s.len() - 1).sum();
    expect!(v, after.n() == before.n() + extra, "qubit count");
    expect!(v, after.n_x() == before.n_x() + split_extra, "X row count");
    expect!(v, after.w_x() <= 3, "w'_X = {} > 3", after.w_x());
    if before.w_x() >= 2 {
        expect!(
            v,
            after.w_x() == before.w_x().min(3),
            "w'_X = {} but min(w_X, 3) = {}",
            after.w_x(),
            before.w_x().min(3)
        );
    }
    expect!(v, after.q_x() <= before.q_x().max(2), "q'_X = {} grew past max(q_X, 2)", after.q_x());
    expect!(v, after.k() == before.k(), "k' = {} but k = {}", after.k(), before.k());
    for (r, rows) in gm.split_rows.iter().enumerate() {
        let mut acc = crate::f2la::BitVec::zeros(before.n());
        for &row in rows {
            for qb in after.h_x().row(row).iter_ones().filter(|&qb| qb < before.n()) {
                acc.toggle(qb);
            }
        }
        expect!(v, acc == before.h_x().row(r), "split rows of X row {r} do not restrict to it");
    }
    for (r, fresh) in gm.new_qubits.iter().enumerate() {
        for &f in fresh {
            let hits = gm.split_rows[r].iter().filter(|&&row| after.h_x().get(row, f)).count();
            expect!(v, hits == 2, "new qubit {f} lies in {hits} split rows");
        }
    }
    v
}

/// Relations for copying followed by gauging, against the original code.
#[must_use]
pub fn copy_gauge_lemma(original: &CssCode, after: &CssCode) -> Vec<String> {
    let mut v = Vec::new();
    let (n, nx, wx, qx, wz, qz) =
        (original.n(), original.n_x(), original.w_x(), original.q_x(), original.w_z(), original.q_z());
    let split: usize = (0..nx).map(|r| original.h_x().row_weight(r)).filter(|&w| w > 3).map(|w| w - 1).sum();
    expect!(v, after.n() == qx * n + split, "n' = {} but q_X·n + Σ(w−1) = {}", after.n(), qx * n + split);
    expect!(v, after.n() <= qx * n + nx * wx.saturating_sub(1), "n' exceeds q_X·n + n_X(w_X−1)");
    expect!(v, after.n_x() <= nx * wx.max(1) + (qx - 1) * n, "n'_X exceeds n_X·w_X + (q_X−1)n");
    if wx >= 2 {
        expect!(v, after.w_x() == wx.min(3), "w'_X = {} but min(w_X, 3) = {}", after.w_x(), wx.min(3));
    }
    expect!(v, after.q_x() <= qx.clamp(2, 3), "q'_X = {} above min(q_X, 3)", after.q_x());
    expect!(v, after.w_z() <= wz * qx * (wx + 1), "w'_Z = {} above w_Z·q_X·(w_X+1)", after.w_z());
    expect!(v, after.q_z() <= qz * wx.max(1), "q'_Z = {} above q_Z·w_X", after.q_z());
    expect!(v, after.k() == original.k(), "k changed");
    v
}

/// Relations for balancing with a classical code (thickening when it is a
/// repetition code of length `n_c`), before height selection.
#[must_use]
pub fn balance_lemma(
    before: &CssCode,
    after: &CssCode,
    bm: &BalanceMap,
    k_c: usize,
    is_repetition: bool,
) -> Vec<String> {
    let mut v = Vec::new();
    let (b, a) = if bm.dual { (before.swapped(), after.swapped()) } else { (before.clone(), after.clone()) };
    let (n, nx, nz, nc, rc) = (b.n(), b.n_x(), b.n_z(), bm.n_c, bm.r_c);
    expect!(v, a.n() == nc * n + nx * rc, "n' = {} but n_c·n + n_X·r_c = {}", a.n(), nc * n + nx * rc);
    expect!(v, a.n_x() == nc * nx, "n'_X = {}", a.n_x());
    expect!(v, a.n_z() == nz * nc + n * rc, "n'_Z = {}", a.n_z());
    expect!(v, a.k() == b.k() * k_c, "k' = {} but k·k_c = {}", a.k(), b.k() * k_c);
    if is_repetition && nx > 0 && n > 0 {
        let wx = match nc {
            1 => b.w_x(),
            2 => b.w_x() + 1,
            _ => b.w_x() + 2,
        };
        expect!(v, a.w_x() == wx, "w'_X = {} expected {wx}", a.w_x());
        if nc >= 2 {
            expect!(v, a.q_x() == b.q_x().max(2), "q'_X = {} but max(q_X, 2) = {}", a.q_x(), b.q_x().max(2));
            expect!(
                v,
                a.w_z() == b.w_z().max(b.q_x() + 2),
                "w'_Z = {} but max(w_Z, q_X+2) = {}",
                a.w_z(),
                b.w_z().max(b.q_x() + 2)
            );
        }
    }
    v
}

/// Row spaces of two matrices coincide.
#[must_use]
pub fn same_rowspace(a: &BinMatrix, b: &BinMatrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = RowBasis::new(a);
    let rb = RowBasis::new(b);
    ra.rank() == rb.rank() && (0..b.rows()).all(|r| ra.contains(&b.row(r)))
}
