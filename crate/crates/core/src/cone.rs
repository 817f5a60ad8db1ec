//! Coning of high-weight Z generators.
//!
//! Each coned Z row becomes a small 3-term complex whose 1-cells are the
//! row's qubits, whose 0-cells pair those qubits through shared X rows and
//! whose −1-cells fill a cycle basis of the resulting graph. The mapping cone
//! of the chain map into the original complex is the cone code.

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{css_from_matrices, repetition_code, CssCode};
use crate::error::{Error, Result};
use crate::f2la::{BinMatrix, BitVec, RowBasis};
use crate::reduce::{balance_z, choose_heights, greedy_heights, BalanceMap, HeightChoice};

pub const DEFAULT_CONE_THRESHOLD: usize = 5;
/// Largest 0-cycle space enumerated by [`soundness_lambda`].
pub const LAMBDA_DIM_CAP: usize = 18;
/// Largest −1-cell support left by [`cellulate`].
pub const CELL_WEIGHT: usize = 4;
/// Height target used by [`thicken_cone`].
pub const CONE_HEIGHT_TARGET: usize = 3;

/// How the qubits an X row shares with a coned Z row are paired into 0-cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `(q0, q1), (q2, q3), …` in ascending qubit order.
    #[default]
    Consecutive,
    /// `(q0, q_{m−1}), (q1, q_{m−2}), …`.
    Nested,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeOptions {
    /// Z rows heavier than this are coned.
    pub threshold: usize,
    pub pairing: Pairing,
}

impl Default for ConeOptions {
    fn default() -> Self {
        Self { threshold: DEFAULT_CONE_THRESHOLD, pairing: Pairing::Consecutive }
    }
}

/// A 0-cell: an edge between two 1-cells (original qubit indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZeroCell {
    /// Pairing tuple of an X row with two of its qubits.
    Pair { x_row: usize, a: usize, b: usize },
    /// Joins two connected components; maps to no X row.
    Bridge { a: usize, b: usize },
    /// Added by cellulation; maps to no X row.
    Chord { a: usize, b: usize },
}

impl ZeroCell {
    #[must_use]
    pub fn ends(&self) -> (usize, usize) {
        match *self {
            ZeroCell::Pair { a, b, .. } | ZeroCell::Bridge { a, b } | ZeroCell::Chord { a, b } => (a, b),
        }
    }

    #[must_use]
    pub fn x_row(&self) -> Option<usize> {
        match *self {
            ZeroCell::Pair { x_row, .. } => Some(x_row),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeComplexPart {
    pub parent_z_row: usize,
    /// Original qubits of the parent row, ascending.
    pub one_cells: Vec<usize>,
    pub zero_cells: Vec<ZeroCell>,
    /// Each −1-cell as its cycle of 0-cell indices in traversal order.
    pub minus_one_cells: Vec<Vec<usize>>,
    /// `|zero_cells| × |one_cells|`.
    #[serde(skip)]
    pub boundary_1: BinMatrix,
    /// `|minus_one_cells| × |zero_cells|`.
    #[serde(skip)]
    pub boundary_0: BinMatrix,
}

impl ConeComplexPart {
    fn new(
        parent_z_row: usize,
        one_cells: Vec<usize>,
        zero_cells: Vec<ZeroCell>,
        minus_one_cells: Vec<Vec<usize>>,
    ) -> Self {
        let mut p = Self {
            parent_z_row,
            one_cells,
            zero_cells,
            minus_one_cells,
            boundary_1: BinMatrix::zeros(0, 0),
            boundary_0: BinMatrix::zeros(0, 0),
        };
        p.rebuild();
        p
    }

    fn rebuild(&mut self) {
        let mut b1 = BinMatrix::zeros(self.zero_cells.len(), self.one_cells.len());
        for (e, cell) in self.zero_cells.iter().enumerate() {
            let (a, b) = cell.ends();
            b1.toggle(e, self.local(a));
            b1.toggle(e, self.local(b));
        }
        self.boundary_1 = b1;
        self.boundary_0 = BinMatrix::from_supports(self.zero_cells.len(), &self.minus_one_cells);
    }

    /// Position of an original qubit among the 1-cells.
    #[must_use]
    pub fn local(&self, qubit: usize) -> usize {
        self.one_cells.binary_search(&qubit).expect("qubit is a 1-cell of this part")
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.zero_cells.iter().map(|c| (self.local(c.ends().0), self.local(c.ends().1))).collect()
    }

    /// `dim H₀` without the −1-cells: 0-cells modulo boundaries of 1-cells.
    #[must_use]
    pub fn h0_without_fill(&self) -> usize {
        self.zero_cells.len() - self.boundary_1.rank()
    }

    /// `dim H₀` with the −1-cells.
    #[must_use]
    pub fn h0(&self) -> usize {
        let cycles = self.zero_cells.len() - self.boundary_0.rank();
        cycles - self.boundary_1.rank()
    }

    /// Invariant violations of the part.
    #[must_use]
    pub fn audit(&self) -> Vec<String> {
        let mut v = Vec::new();
        let comp = self.boundary_0.mat_mul(&self.boundary_1).map(|m| m.is_zero()).unwrap_or(false);
        if !comp {
            v.push(format!("part of Z row {}: ∂₀∂₁ ≠ 0", self.parent_z_row));
        }
        if self.h0() != 0 {
            v.push(format!("part of Z row {}: H₀ has dimension {}", self.parent_z_row, self.h0()));
        }
        for r in 0..self.boundary_1.rows() {
            if self.boundary_1.row_weight(r) != 2 {
                v.push(format!("part of Z row {}: 0-cell {r} does not join two 1-cells", self.parent_z_row));
            }
        }
        v
    }
}

/// The chain map from the cone parts into the code's complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMapF {
    pub parts: Vec<PartMap>,
}

/// Images of one part's cells; −1-cells map to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartMap {
    /// Original qubit per 1-cell.
    pub one_cells: Vec<usize>,
    /// Original X row per 0-cell, `None` for cells mapped to zero.
    pub zero_cells: Vec<Option<usize>>,
}

impl ChainMapF {
    #[must_use]
    pub fn from_parts(parts: &[ConeComplexPart]) -> Self {
        let parts = parts
            .iter()
            .map(|p| PartMap {
                one_cells: p.one_cells.clone(),
                zero_cells: p.zero_cells.iter().map(ZeroCell::x_row).collect(),
            })
            .collect();
        Self { parts }
    }

    /// Checks the map against the parts and `H_X · f₁ = f₀ · ∂₁` on every part.
    pub fn check(&self, q: &CssCode, parts: &[ConeComplexPart]) -> Result<()> {
        if self.parts.len() != parts.len() {
            return Err(Error::MapMismatch(format!("{} part maps for {} parts", self.parts.len(), parts.len())));
        }
        for (i, (m, p)) in self.parts.iter().zip(parts).enumerate() {
            if m.one_cells.len() != p.one_cells.len() || m.zero_cells.len() != p.zero_cells.len() {
                return Err(Error::MapMismatch(format!("part {i}: cell counts differ from the map")));
            }
            if m.one_cells.iter().any(|&c| c >= q.n()) || m.zero_cells.iter().flatten().any(|&r| r >= q.n_x()) {
                return Err(Error::MapMismatch(format!("part {i}: image outside the code")));
            }
            let mut f1 = BinMatrix::zeros(q.n(), p.one_cells.len());
            for (j, &c) in m.one_cells.iter().enumerate() {
                f1.set(c, j, true);
            }
            let mut f0 = BinMatrix::zeros(q.n_x(), p.zero_cells.len());
            for (e, r) in m.zero_cells.iter().enumerate() {
                if let Some(r) = *r {
                    f0.set(r, e, true);
                }
            }
            if q.h_x().mat_mul(&f1)? != f0.mat_mul(&p.boundary_1)? {
                return Err(Error::MapMismatch(format!("part {i}: chain-map condition violated")));
            }
        }
        Ok(())
    }
}

/// Builds one part per Z row heavier than the threshold, the chain map, and
/// the list of direct (uncone) Z rows.
pub fn build_cone_parts(q: &CssCode, opts: &ConeOptions) -> Result<(Vec<ConeComplexPart>, ChainMapF, Vec<usize>)> {
    if opts.threshold == 0 {
        return Err(Error::Invalid("cone threshold must be at least 1".into()));
    }
    let mut direct = Vec::new();
    let mut coned = Vec::new();
    for r in 0..q.n_z() {
        if q.h_z().row_weight(r) > opts.threshold {
            coned.push(r);
        } else {
            direct.push(r);
        }
    }
    let h_xt = q.h_x().transpose();
    let parts = coned
        .par_iter()
        .map(|&z| build_part(q.h_x(), &h_xt, z, q.h_z().row_support(z), opts.pairing))
        .collect::<Result<Vec<_>>>()?;
    let f = ChainMapF::from_parts(&parts);
    Ok((parts, f, direct))
}

fn build_part(
    h_x: &BinMatrix,
    h_xt: &BinMatrix,
    z: usize,
    one_cells: Vec<usize>,
    pairing: Pairing,
) -> Result<ConeComplexPart> {
    let mut x_rows: Vec<usize> = one_cells.iter().flat_map(|&i| h_xt.row(i).iter_ones().collect::<Vec<_>>()).collect();
    x_rows.sort_unstable();
    x_rows.dedup();
    let in_row = BitVec::from_support(h_x.cols(), &one_cells);
    let mut zero_cells = Vec::new();
    for x in x_rows {
        let shared: Vec<usize> = h_x.row(x).iter_ones().filter(|&i| in_row.get(i)).collect();
        if shared.len() % 2 == 1 {
            return Err(Error::OddIncidence { x_row: x, z_row: z });
        }
        let m = shared.len();
        for t in 0..m / 2 {
            let (a, b) = match pairing {
                Pairing::Consecutive => (shared[2 * t], shared[2 * t + 1]),
                Pairing::Nested => (shared[t], shared[m - 1 - t]),
            };
            zero_cells.push(ZeroCell::Pair { x_row: x, a, b });
        }
    }
    let mut part = ConeComplexPart::new(z, one_cells, zero_cells, Vec::new());
    connect(&mut part);
    part.minus_one_cells = cycle_basis(part.one_cells.len(), &part.edges());
    part.rebuild();
    Ok(part)
}

/// Adds bridge 0-cells between consecutive components (ordered by their
/// smallest 1-cell), joining the smallest 1-cells of each.
fn connect(part: &mut ConeComplexPart) {
    let comps = components(part.one_cells.len(), &part.edges());
    for w in comps.windows(2) {
        let (a, b) = (part.one_cells[w[0][0]], part.one_cells[w[1][0]]);
        part.zero_cells.push(ZeroCell::Bridge { a, b });
    }
}

/// Vertex sets of the connected components, each sorted, ordered by their
/// smallest vertex.
fn components(nv: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(nv, edges);
    let mut seen = vec![false; nv];
    let mut out = Vec::new();
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn adjacency(nv: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); nv];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        if a != b {
            adj[b].push((a, e));
        }
    }
    adj
}

/// Fundamental cycles of a BFS spanning forest, one per non-tree edge in
/// ascending edge order. Each cycle starts with its non-tree edge.
fn cycle_basis(nv: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(nv, edges);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut depth = vec![usize::MAX; nv];
    let mut tree = vec![false; edges.len()];
    for root in 0..nv {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some((v, e));
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if tree[e] {
            continue;
        }
        // path v → lca, then lca → u
        let (mut a, mut b) = (v, u);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, pe) = parent[a].expect("non-root");
                up.push(pe);
                a = p;
            } else {
                let (p, pe) = parent[b].expect("non-root");
                down.push(pe);
                b = p;
            }
        }
        let mut cyc = vec![e];
        cyc.extend(up);
        cyc.extend(down.into_iter().rev());
        cycles.push(cyc);
    }
    cycles
}

/// The cone code.
///
/// Qubits: original qubits, then the 0-cells part by part. X rows: original
/// rows (now also touching the 0-cells mapped onto them), then the −1-cells.
/// Z rows: the direct rows in ascending order, then one row per 1-cell part
/// by part.
pub fn cone_code(q: &CssCode, parts: &[ConeComplexPart], f: &ChainMapF) -> Result<CssCode> {
    f.check(q, parts)?;
    let mut coned = vec![false; q.n_z()];
    for p in parts {
        if std::mem::replace(&mut coned[p.parent_z_row], true) {
            return Err(Error::MapMismatch(format!("Z row {} coned twice", p.parent_z_row)));
        }
    }
    let n_new = q.n() + parts.iter().map(|p| p.zero_cells.len()).sum::<usize>();
    let mut x_rows: Vec<Vec<usize>> = (0..q.n_x()).map(|r| q.h_x().row_support(r)).collect();
    let mut z_rows: Vec<Vec<usize>> = (0..q.n_z()).filter(|&r| !coned[r]).map(|r| q.h_z().row_support(r)).collect();
    let mut extra_x = Vec::new();
    let mut off = q.n();
    for (p, m) in parts.iter().zip(&f.parts) {
        for (e, img) in m.zero_cells.iter().enumerate() {
            if let Some(r) = *img {
                x_rows[r].push(off + e);
            }
        }
        for cyc in &p.minus_one_cells {
            let mut s: Vec<usize> = cyc.iter().map(|&e| off + e).collect();
            s.sort_unstable();
            extra_x.push(s);
        }
        for (j, &qubit) in m.one_cells.iter().enumerate() {
            let mut s = vec![qubit];
            s.extend(p.boundary_1.col_support(j).into_iter().map(|e| off + e));
            z_rows.push(s);
        }
        off += p.zero_cells.len();
    }
    x_rows.extend(extra_x);
    css_from_matrices(BinMatrix::from_supports(n_new, &x_rows), BinMatrix::from_supports(n_new, &z_rows))
}

/// Splits every −1-cell longer than [`CELL_WEIGHT`] with ladder chords
/// `(v_i, v_{L−1−i})`, replacing it in place by its faces.
#[must_use]
pub fn cellulate(parts: &[ConeComplexPart]) -> Vec<ConeComplexPart> {
    parts.iter().map(cellulate_part).collect()
}

fn cellulate_part(p: &ConeComplexPart) -> ConeComplexPart {
    let mut zero_cells = p.zero_cells.clone();
    let mut cells = Vec::new();
    for cyc in &p.minus_one_cells {
        let l = cyc.len();
        if l <= CELL_WEIGHT {
            cells.push(cyc.clone());
            continue;
        }
        let ends = |e: usize| zero_cells[e].ends();
        // vertices v_0..v_{L−1} with cyc[j] joining v_j and v_{j+1}
        let (a0, b0) = ends(cyc[0]);
        let (a1, b1) = ends(cyc[1]);
        let v1 = if a0 == a1 || a0 == b1 { a0 } else { b0 };
        let mut vs = vec![if v1 == a0 { b0 } else { a0 }, v1];
        for &e in &cyc[1..l - 1] {
            let (a, b) = ends(e);
            let last = *vs.last().expect("nonempty");
            vs.push(if a == last { b } else { a });
        }
        let mut chords = Vec::new();
        let mut i = 1;
        while (l - 1 - i) - i >= 2 {
            chords.push(zero_cells.len());
            zero_cells.push(ZeroCell::Chord { a: vs[i], b: vs[l - 1 - i] });
            i += 1;
        }
        let m = chords.len();
        cells.push(vec![cyc[l - 1], cyc[0], chords[0], cyc[l - 2]]);
        for i in 1..m {
            cells.push(vec![chords[i - 1], cyc[i], chords[i], cyc[l - 2 - i]]);
        }
        let mut last = vec![chords[m - 1]];
        last.extend(&cyc[m..=l - 2 - m]);
        cells.push(last);
    }
    ConeComplexPart::new(p.parent_z_row, p.one_cells.clone(), zero_cells, cells)
}

/// `λ = min(1, min_i λ_i)` with `λ_i` the smallest ratio `|u| / min|v|` over
/// nonzero 0-cycles `u` of part `i` and their fillings `∂v = u`.
pub fn soundness_lambda(parts: &[ConeComplexPart]) -> Result<Ratio<usize>> {
    let per_part = parts.par_iter().map(part_lambda).collect::<Result<Vec<_>>>()?;
    Ok(per_part.into_iter().fold(Ratio::from_integer(1), |acc, l| acc.min(l)))
}

fn part_lambda(p: &ConeComplexPart) -> Result<Ratio<usize>> {
    let nv = p.one_cells.len();
    // 0-cycles are boundaries of 1-chains; a basis of them as boundaries of pivot vertices
    let cols = p.boundary_1.transpose();
    let mut basis = RowBasis::empty(p.zero_cells.len());
    let mut gens = Vec::new();
    for v in 0..nv {
        if basis.insert(&cols.row(v)) {
            gens.push(v);
        }
    }
    let kernel = p.boundary_1.kernel_basis();
    if gens.len() > LAMBDA_DIM_CAP || kernel.rows() > LAMBDA_DIM_CAP {
        return Err(Error::Cap(format!(
            "Z row {}: 0-cycle space of dimension {} exceeds {LAMBDA_DIM_CAP}; use a lower cone threshold or smaller parts",
            p.parent_z_row,
            gens.len()
        )));
    }
    let kernel_rows: Vec<BitVec> = (0..kernel.rows()).map(|r| kernel.row(r)).collect();
    let mut best: Option<Ratio<usize>> = None;
    let mut u = BitVec::zeros(p.zero_cells.len());
    let mut v = BitVec::zeros(nv);
    for step in 1u64..(1u64 << gens.len()) {
        let bit = step.trailing_zeros() as usize;
        u.xor_assign(&cols.row(gens[bit]));
        v.toggle(gens[bit]);
        let fill = min_in_coset(&v, &kernel_rows);
        let r = Ratio::new(u.weight(), fill);
        if best.map_or(true, |b| r < b) {
            best = Some(r);
        }
    }
    Ok(best.map_or(Ratio::from_integer(1), |b| b.min(Ratio::from_integer(1))))
}

/// Largest part, in 1-cells, accepted by [`soundness_lambda_by_chains`].
pub const CHAIN_ENUMERATION_CAP: usize = 24;

/// [`soundness_lambda`] by a second route: every nonzero 1-chain `v` is
/// enumerated, its boundary `u` recorded with the lightest `v` seen.
pub fn soundness_lambda_by_chains(parts: &[ConeComplexPart]) -> Result<Ratio<usize>> {
    let mut best = Ratio::from_integer(1);
    for p in parts {
        let nv = p.one_cells.len();
        if nv > CHAIN_ENUMERATION_CAP {
            return Err(Error::Cap(format!("Z row {}: {nv} 1-cells exceed {CHAIN_ENUMERATION_CAP}", p.parent_z_row)));
        }
        let edges: Vec<(usize, usize)> = p.edges();
        let mut fills: HashMap<Vec<usize>, u32> = HashMap::new();
        for mask in 1u32..(1u32 << nv) {
            let u: Vec<usize> =
                (0..edges.len()).filter(|&e| ((mask >> edges[e].0) ^ (mask >> edges[e].1)) & 1 == 1).collect();
            if u.is_empty() {
                continue;
            }
            let w = mask.count_ones();
            fills.entry(u).and_modify(|m| *m = (*m).min(w)).or_insert(w);
        }
        for (u, &v) in &fills {
            best = best.min(Ratio::new(u.len(), v as usize));
        }
    }
    Ok(best)
}

fn min_in_coset(v: &BitVec, kernel: &[BitVec]) -> usize {
    let mut w = v.clone();
    let mut best = w.weight();
    for step in 1u64..(1u64 << kernel.len()) {
        w.xor_assign(&kernel[step.trailing_zeros() as usize]);
        best = best.min(w.weight());
    }
    best
}

/// Output of [`thicken_cone`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickenedCone {
    pub code: CssCode,
    /// Map of the dual thickening, with pruned rows marked.
    pub map: BalanceMap,
    pub heights: HeightChoice,
}

/// Dual thickening with the length-`len` repetition code, then greedy
/// heights on the X rows.
pub fn thicken_cone(q_cone: &CssCode, len: usize) -> Result<ThickenedCone> {
    let (thick, map) = balance_z(q_cone, &repetition_code(len)?)?;
    let heights = greedy_heights(&thick, &map, CONE_HEIGHT_TARGET)?;
    let (code, map) = choose_heights(&thick, &map, &heights.heights)?;
    Ok(ThickenedCone { code, map, heights })
}

/// Every stage of the reduced cone of a code.
#[derive(Clone, Debug)]
pub struct ReducedCone {
    /// Parts after cellulation.
    pub parts: Vec<ConeComplexPart>,
    pub f: ChainMapF,
    pub direct_rows: Vec<usize>,
    pub cone: CssCode,
    pub thickened: ThickenedCone,
}

/// Parts, cellulation, cone code, then [`thicken_cone`].
pub fn reduced_cone(q: &CssCode, opts: &ConeOptions, len: usize) -> Result<ReducedCone> {
    let (parts, _, direct_rows) = build_cone_parts(q, opts)?;
    let parts = cellulate(&parts);
    let f = ChainMapF::from_parts(&parts);
    let cone = cone_code(q, &parts, &f)?;
    let thickened = thicken_cone(&cone, len)?;
    Ok(ReducedCone { parts, f, direct_rows, cone, thickened })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::codes::{css_distance, Basis, Distance};
    use crate::f2la::quotient_dim;
    use crate::hgp::hgp;
    use proptest::prelude::*;

    fn surface(l: usize) -> CssCode {
        hgp(&repetition_code(l).unwrap(), &repetition_code(l).unwrap()).unwrap()
    }

    pub(crate) fn merge_z(q: &CssCode, rows: &[usize]) -> CssCode {
        crate::catalog::merge_z(q, rows).unwrap()
    }

    pub(crate) fn heavy_face(q: &CssCode, w: usize) -> CssCode {
        crate::catalog::heavy_face(q, w).unwrap()
    }

    #[test]
    fn light_code_has_no_parts() {
        let q = surface(3);
        let (parts, f, direct) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        assert!(parts.is_empty());
        assert_eq!(direct, (0..q.n_z()).collect::<Vec<_>>());
        assert_eq!(cone_code(&q, &parts, &f).unwrap(), q);
        assert_eq!(soundness_lambda(&parts).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn weight_six_face() {
        let q = heavy_face(&surface(4), 6);
        let (parts, f, direct) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        assert_eq!(parts.len(), 1);
        let p = &parts[0];
        assert_eq!(p.one_cells.len(), 6);
        assert_eq!(direct.len(), q.n_z() - 1);
        assert!(p.audit().is_empty(), "{:?}", p.audit());
        let bare = ConeComplexPart::new(p.parent_z_row, p.one_cells.clone(), p.zero_cells.clone(), Vec::new());
        assert_eq!(p.minus_one_cells.len(), bare.h0_without_fill());
        let c = cone_code(&q, &parts, &f).unwrap();
        assert_eq!(c.k(), q.k());
        assert_eq!(c.n_z(), q.n_z() - 1 + 6);
        for r in q.n_z() - 1..c.n_z() {
            assert!(c.h_z().row_weight(r) <= q.q_x() + 2);
        }
    }

    #[test]
    fn odd_incidence_rejected() {
        let hz_row: Vec<usize> = (0..7).collect();
        let good = BinMatrix::from_supports(7, &[vec![0, 1]]);
        assert!(build_part(&good, &good.transpose(), 0, hz_row.clone(), Pairing::Consecutive).is_ok());
        let bad = BinMatrix::from_supports(7, &[vec![0, 1, 2]]);
        assert_eq!(
            build_part(&bad, &bad.transpose(), 0, hz_row, Pairing::Consecutive).unwrap_err(),
            Error::OddIncidence { x_row: 0, z_row: 0 }
        );
    }

    #[test]
    fn isolated_qubits_are_bridged() {
        let q = css_from_matrices(
            BinMatrix::from_supports(8, &[vec![0, 1], vec![2, 3]]),
            BinMatrix::from_supports(8, &[vec![0, 1, 2, 3, 4, 5, 6, 7]]),
        )
        .unwrap();
        let (parts, f, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        let p = &parts[0];
        let bridges = p.zero_cells.iter().filter(|c| matches!(c, ZeroCell::Bridge { .. })).count();
        assert_eq!(bridges, 5);
        assert!(p.audit().is_empty());
        let c = cone_code(&q, &parts, &f).unwrap();
        assert_eq!(c.k(), q.k());
    }

    #[test]
    fn chain_map_violation_detected() {
        let q = heavy_face(&surface(4), 6);
        let (parts, mut f, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        let first = f.parts[0].zero_cells.iter().position(Option::is_some).unwrap();
        let r = f.parts[0].zero_cells[first].unwrap();
        f.parts[0].zero_cells[first] = Some((r + 1) % q.n_x());
        assert!(matches!(cone_code(&q, &parts, &f), Err(Error::MapMismatch(_))));
    }

    #[test]
    fn ladder_cellulation() {
        // one 8-cycle through qubits 0..8 paired by X rows {i, i+1}
        let x: Vec<Vec<usize>> = (0..8).map(|i| vec![i, (i + 1) % 8]).collect();
        let q = css_from_matrices(
            BinMatrix::from_supports(8, &x),
            BinMatrix::from_supports(8, &[(0..8).collect::<Vec<_>>()]),
        )
        .unwrap();
        let (parts, _, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        assert_eq!(parts[0].minus_one_cells.len(), 1);
        assert_eq!(parts[0].minus_one_cells[0].len(), 8);
        let cel = cellulate(&parts);
        let p = &cel[0];
        assert_eq!(p.minus_one_cells.len(), 3);
        assert!(p.minus_one_cells.iter().all(|c| c.len() <= CELL_WEIGHT));
        assert_eq!(p.zero_cells.len(), 10);
        assert!(p.audit().is_empty());
        let f = ChainMapF::from_parts(&cel);
        let c = cone_code(&q, &cel, &f).unwrap();
        assert_eq!(c.k(), q.k());
        assert!(c.w_x() <= CELL_WEIGHT.max(q.w_x() + 2));
    }

    #[test]
    fn short_cycles_untouched() {
        let q = heavy_face(&surface(4), 6);
        let (parts, _, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        if parts[0].minus_one_cells.iter().all(|c| c.len() <= CELL_WEIGHT) {
            assert_eq!(cellulate(&parts), parts);
        }
    }

    #[test]
    fn lambda_matches_chain_enumeration() {
        for w in [6, 8] {
            for pairing in [Pairing::Consecutive, Pairing::Nested] {
                let q = heavy_face(&surface(5), w);
                let (parts, _, _) = build_cone_parts(&q, &ConeOptions { threshold: 5, pairing }).unwrap();
                for parts in [parts.clone(), cellulate(&parts)] {
                    let l = soundness_lambda(&parts).unwrap();
                    let oracle = soundness_lambda_by_chains(&parts).unwrap();
                    assert_eq!(l, oracle);
                    assert!(l > Ratio::from_integer(0));
                }
            }
        }
    }

    #[test]
    fn single_cycle_lambda() {
        // a 6-cycle: the best filling of a 2-edge cut is 1 vertex or a path
        let x: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        let q = css_from_matrices(
            BinMatrix::from_supports(6, &x),
            BinMatrix::from_supports(6, &[(0..6).collect::<Vec<_>>()]),
        )
        .unwrap();
        let (parts, _, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        // a path of 3 vertices has 2 cut edges and no smaller filling
        assert_eq!(soundness_lambda(&parts).unwrap(), Ratio::new(2, 3));
    }

    #[test]
    fn thicken_cone_one_is_noop() {
        let q = heavy_face(&surface(3), 6);
        let (parts, f, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        let c = cone_code(&q, &parts, &f).unwrap();
        let t = thicken_cone(&c, 1).unwrap();
        assert_eq!(t.code, c);
    }

    #[test]
    fn reduced_cone_distances() {
        let q = heavy_face(&surface(3), 6);
        let dx = css_distance(&q, Basis::X).unwrap();
        let dz = css_distance(&q, Basis::Z).unwrap();
        let r = reduced_cone(&q, &ConeOptions::default(), 2).unwrap();
        let t = &r.thickened.code;
        assert_eq!(t.k(), q.k());
        let lambda = soundness_lambda(&r.parts).unwrap();
        let dxp = css_distance(t, Basis::X).unwrap();
        let dzp = css_distance(t, Basis::Z).unwrap();
        assert!(dxp >= dx);
        let (Distance::Finite(dz), Distance::Finite(dzp)) = (dz, dzp) else { panic!("finite distances") };
        assert!(Ratio::from_integer(dzp) >= Ratio::from_integer(dz * 2) * lambda);
        let cw = t.h_x().col_weights();
        let region_a = (0..r.cone.n()).flat_map(|i| (0..2).map(move |c| (i, c)));
        let peak = region_a.map(|(i, c)| cw[r.thickened.map.a_index(i, c)]).max().unwrap();
        // kept top rows plus the repetition checks on each column
        assert!(peak <= r.thickened.heights.achieved_max + 2);
        assert!(peak <= r.cone.q_x().max(CONE_HEIGHT_TARGET + 2));
    }

    fn random_coneable() -> impl Strategy<Value = CssCode> {
        (3usize..5, 0usize..64).prop_map(|(l, pick)| {
            let q = surface(l);
            let pairs: Vec<(usize, usize)> = (0..q.n_z())
                .flat_map(|a| (a + 1..q.n_z()).map(move |b| (a, b)))
                .filter(|&(a, b)| {
                    let mut s = q.h_z().row(a);
                    s.xor_assign(&q.h_z().row(b));
                    s.weight() > 5
                })
                .collect();
            if pairs.is_empty() {
                return q;
            }
            let (a, b) = pairs[pick % pairs.len()];
            merge_z(&q, &[a, b])
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn cone_preserves_k(q in random_coneable(), nested in any::<bool>()) {
            let opts = ConeOptions { threshold: 5, pairing: if nested { Pairing::Nested } else { Pairing::Consecutive } };
            let (parts, f, _) = build_cone_parts(&q, &opts).unwrap();
            for p in &parts {
                prop_assert!(p.audit().is_empty());
            }
            let c = cone_code(&q, &parts, &f).unwrap();
            prop_assert_eq!(quotient_dim(c.h_x(), c.h_z()).unwrap(), q.k());
            let cel = cellulate(&parts);
            for (a, b) in parts.iter().zip(&cel) {
                prop_assert_eq!(a.boundary_1.rank(), b.boundary_1.rank());
                prop_assert_eq!(a.boundary_1.kernel_basis().rows(), b.boundary_1.kernel_basis().rows());
                prop_assert_eq!(b.h0(), 0);
                prop_assert!(b.minus_one_cells.iter().all(|c| c.len() <= CELL_WEIGHT));
            }
            let c2 = cone_code(&q, &cel, &ChainMapF::from_parts(&cel)).unwrap();
            prop_assert_eq!(c2.k(), q.k());
        }
    }
}
