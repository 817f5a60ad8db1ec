//! Classical codes, CSS codes and chain complexes.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2la::{first_one, BinMatrix, BitVec, RowBasis};
use crate::search::{SubsetSearch, DEFAULT_TABLE_CAP};

/// Pauli type of a stabilizer, logical or error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    #[must_use]
    pub fn opposite(self) -> Basis {
        match self {
            Basis::X => Basis::Z,
            Basis::Z => Basis::X,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Z => "Z",
        })
    }
}

/// A distance that may be infinite (no nontrivial codeword exists).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    #[must_use]
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    #[must_use]
    pub fn is_infinite(self) -> bool {
        self == Distance::Infinite
    }
}

impl Mul for Distance {
    type Output = Distance;

    fn mul(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a * b),
            _ => Distance::Infinite,
        }
    }
}

impl Mul<usize> for Distance {
    type Output = Distance;

    fn mul(self, rhs: usize) -> Distance {
        self * Distance::Finite(rhs)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Linear code given by its parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    h: BinMatrix,
    k: usize,
}

impl ClassicalCode {
    #[must_use]
    pub fn new(h: BinMatrix) -> Self {
        let k = h.cols() - h.rank();
        Self { h, k }
    }

    #[must_use]
    pub fn h(&self) -> &BinMatrix {
        &self.h
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }
}

/// `[len, 1, len]` repetition code with checks on neighbouring bits.
pub fn repetition_code(len: usize) -> Result<ClassicalCode> {
    if len == 0 {
        return Err(Error::Invalid("repetition code length must be at least 1".into()));
    }
    let rows: Vec<Vec<usize>> = (0..len - 1).map(|j| vec![j, j + 1]).collect();
    Ok(ClassicalCode::new(BinMatrix::from_supports(len, &rows)))
}

/// `[7,4,3]` Hamming code; column `j` holds the binary expansion of `j + 1`.
#[must_use]
pub fn hamming_7_4() -> ClassicalCode {
    let rows: Vec<Vec<usize>> = (0..3).map(|bit| (0..7).filter(|j| (j + 1) >> (2 - bit) & 1 == 1).collect()).collect();
    ClassicalCode::new(BinMatrix::from_supports(7, &rows))
}

pub const DEFAULT_CLASSICAL_K_CAP: usize = 24;

pub fn classical_distance(c: &ClassicalCode) -> Result<Distance> {
    classical_distance_capped(c, DEFAULT_CLASSICAL_K_CAP)
}

pub fn classical_distance_capped(c: &ClassicalCode, k_cap: usize) -> Result<Distance> {
    if c.k() == 0 {
        return Ok(Distance::Infinite);
    }
    if c.k() > k_cap {
        return Err(Error::Cap(format!("classical code has k = {} > {k_cap}", c.k())));
    }
    let basis = c.h().kernel_basis();
    Ok(Distance::Finite(min_gray_weight(&BitVec::zeros(c.n()), &basis, true)))
}

/// Minimum weight over `base + span(rows)`, walking the span in Gray-code
/// order. With `skip_base`, the bare `base` is excluded.
fn min_gray_weight(base: &BitVec, rows: &BinMatrix, skip_base: bool) -> usize {
    let mut cur = base.clone();
    let mut best = if skip_base { usize::MAX } else { cur.weight() };
    let vecs: Vec<BitVec> = (0..rows.rows()).map(|r| rows.row(r)).collect();
    for i in 1u64..(1u64 << vecs.len()) {
        cur.xor_assign(&vecs[i.trailing_zeros() as usize]);
        best = best.min(cur.weight());
    }
    best
}

/// Parameters of a CSS code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub w_x: usize,
    pub w_z: usize,
    pub q_x: usize,
    pub q_z: usize,
}

/// CSS code with validated commutation.
#[derive(Clone, PartialEq, Eq)]
pub struct CssCode {
    h_x: BinMatrix,
    h_z: BinMatrix,
    k: usize,
}

/// Validates `h_x · h_zᵀ = 0` and builds the code.
pub fn css_from_matrices(h_x: BinMatrix, h_z: BinMatrix) -> Result<CssCode> {
    if h_x.cols() != h_z.cols() {
        return Err(Error::Shape { op: "css_from_matrices", left: h_x.shape(), right: h_z.shape() });
    }
    let prod = h_x.mat_mul(&h_z.transpose())?;
    if let Some((row_x, row_z)) = first_one(&prod) {
        return Err(Error::Anticommuting { row_x, row_z });
    }
    let k = h_x.cols() - h_x.rank() - h_z.rank();
    Ok(CssCode { h_x, h_z, k })
}

impl CssCode {
    pub fn new(h_x: BinMatrix, h_z: BinMatrix) -> Result<Self> {
        css_from_matrices(h_x, h_z)
    }

    #[must_use]
    pub fn h_x(&self) -> &BinMatrix {
        &self.h_x
    }

    #[must_use]
    pub fn h_z(&self) -> &BinMatrix {
        &self.h_z
    }

    /// Checks of the given type.
    #[must_use]
    pub fn checks(&self, basis: Basis) -> &BinMatrix {
        match basis {
            Basis::X => &self.h_x,
            Basis::Z => &self.h_z,
        }
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.h_x.cols()
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn n_x(&self) -> usize {
        self.h_x.rows()
    }

    #[must_use]
    pub fn n_z(&self) -> usize {
        self.h_z.rows()
    }

    #[must_use]
    pub fn w_x(&self) -> usize {
        self.h_x.max_row_weight()
    }

    #[must_use]
    pub fn w_z(&self) -> usize {
        self.h_z.max_row_weight()
    }

    #[must_use]
    pub fn q_x(&self) -> usize {
        self.h_x.max_col_weight()
    }

    #[must_use]
    pub fn q_z(&self) -> usize {
        self.h_z.max_col_weight()
    }

    #[must_use]
    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n(),
            k: self.k,
            n_x: self.n_x(),
            n_z: self.n_z(),
            w_x: self.w_x(),
            w_z: self.w_z(),
            q_x: self.q_x(),
            q_z: self.q_z(),
        }
    }

    /// Exchanges the roles of X and Z.
    #[must_use]
    pub fn swapped(&self) -> CssCode {
        CssCode { h_x: self.h_z.clone(), h_z: self.h_x.clone(), k: self.k }
    }
}

impl fmt::Debug for CssCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CssCode[[{}, {}]] X:{:?} Z:{:?}", self.n(), self.k, self.h_x, self.h_z)
    }
}

/// Chain complex `A_top → … → A_1 → A_0` over F2.
///
/// Stored bottom-up: `boundary(i)` maps `A_i` to `A_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    maps: Vec<BinMatrix>,
}

impl ChainComplex {
    /// Builds from `[∂_1, ∂_2, …]`; checks dimensions and `∂_{i-1}∂_i = 0`.
    pub fn from_boundaries(maps: Vec<BinMatrix>) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::Invalid("use ChainComplex::point for a complex without maps".into()));
        };
        let mut dims = vec![first.rows()];
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i] {
                return Err(Error::Shape { op: "chain complex", left: maps[i - 1].shape(), right: m.shape() });
            }
            dims.push(m.cols());
        }
        for i in 1..maps.len() {
            if !maps[i - 1].mat_mul(&maps[i])?.is_zero() {
                return Err(Error::NotAComplex { degree: i + 1 });
            }
        }
        Ok(Self { dims, maps })
    }

    /// Single space of dimension `dim` in degree 0.
    #[must_use]
    pub fn point(dim: usize) -> Self {
        Self { dims: vec![dim], maps: Vec::new() }
    }

    /// Dimensions of `A_0, A_1, …`.
    #[must_use]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Highest degree.
    #[must_use]
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// Number of boundary maps.
    #[must_use]
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `∂_i : A_i → A_{i-1}`, or a zero map outside `1..=top`.
    #[must_use]
    pub fn boundary(&self, i: usize) -> BinMatrix {
        if i >= 1 && i <= self.maps.len() {
            self.maps[i - 1].clone()
        } else if i == 0 {
            BinMatrix::zeros(0, self.dims[0])
        } else {
            BinMatrix::zeros(self.dims.get(i - 1).copied().unwrap_or(0), 0)
        }
    }

    /// Same spaces, maps transposed, degrees reversed.
    #[must_use]
    pub fn dual(&self) -> ChainComplex {
        let maps: Vec<BinMatrix> = self.maps.iter().rev().map(BinMatrix::transpose).collect();
        let mut dims = self.dims.clone();
        dims.reverse();
        Self { dims, maps }
    }

    /// Dimension of the homology at degree `j`.
    #[must_use]
    pub fn homology_dim(&self, j: usize) -> usize {
        self.dims[j] - self.boundary(j).rank() - self.boundary(j + 1).rank()
    }

    /// The pair `(∂_j, ∂_{j+1}ᵀ)` read as a CSS code; its Z distance is the
    /// homological distance at `j` and its X distance the cohomological one.
    pub fn degree_code(&self, j: usize) -> Result<CssCode> {
        if j > self.top() {
            return Err(Error::Level { level: j, max: self.top() });
        }
        let hx = self.boundary(j);
        let hz = if j < self.top() { self.boundary(j + 1).transpose() } else { BinMatrix::zeros(0, self.dims[j]) };
        css_from_matrices(hx, hz)
    }
}

/// `A_2 = F^{n_Z} → A_1 = F^n → A_0 = F^{n_X}` with `∂_2 = h_zᵀ`, `∂_1 = h_x`.
#[must_use]
pub fn css_to_complex(q: &CssCode) -> ChainComplex {
    ChainComplex { dims: vec![q.n_x(), q.n(), q.n_z()], maps: vec![q.h_x().clone(), q.h_z().transpose()] }
}

/// Reads the code at degree `level`: `h_x = ∂_level`, `h_z = ∂_{level+1}ᵀ`.
pub fn complex_to_css(c: &ChainComplex, level: usize) -> Result<CssCode> {
    let max = c.len().saturating_sub(1);
    if level < 1 || level > max {
        return Err(Error::Level { level, max });
    }
    css_from_matrices(c.boundary(level), c.boundary(level + 1).transpose())
}

/// Representatives of the logical operators of the given type: rows lie in
/// `ker(opposite) \ rs(same)` and are independent modulo `rs(same)`.
#[must_use]
pub fn logical_basis(q: &CssCode, basis: Basis) -> BinMatrix {
    let same = q.checks(basis);
    let opposite = q.checks(basis.opposite());
    let mut span = RowBasis::new(same);
    let mut reps = Vec::new();
    let kernel = opposite.kernel_basis();
    for r in 0..kernel.rows() {
        let v = kernel.row(r);
        if span.insert(&v) {
            reps.push(v);
        }
    }
    let stabs: Vec<BitVec> = (0..same.rows()).map(|r| same.row(r)).collect();
    for rep in &mut reps {
        loop {
            let mut improved = false;
            for s in &stabs {
                let mut t = rep.clone();
                t.xor_assign(s);
                if t.weight() < rep.weight() {
                    *rep = t;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }
    BinMatrix::from_rows(q.n(), &reps)
}

/// How a distance was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMethod {
    Exhaustive,
    Mitm,
    Predictor,
}

/// Limits for [`css_distance_with`].
#[derive(Clone, Copy, Debug)]
pub struct DistanceConfig {
    /// Largest stabilizer rank enumerated exhaustively.
    pub rank_cap: usize,
    /// Largest `(2^k − 1)·2^rank` enumerated exhaustively.
    pub work_cap: u64,
    /// Largest meet-in-the-middle table.
    pub table_cap: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self { rank_cap: 26, work_cap: 1 << 26, table_cap: DEFAULT_TABLE_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceOutcome {
    pub value: Distance,
    pub method: DistanceMethod,
}

/// Minimum weight over `ker(opposite) \ rs(same)`.
pub fn css_distance(q: &CssCode, basis: Basis) -> Result<Distance> {
    css_distance_with(q, basis, &DistanceConfig::default()).map(|o| o.value)
}

pub fn css_distance_with(q: &CssCode, basis: Basis, cfg: &DistanceConfig) -> Result<DistanceOutcome> {
    if q.k() == 0 {
        return Ok(DistanceOutcome { value: Distance::Infinite, method: DistanceMethod::Exhaustive });
    }
    let logicals = logical_basis(q, basis);
    let stabs = RowBasis::new(q.checks(basis)).to_matrix();
    let r = stabs.rows();
    let work = ((1u64 << q.k().min(63)) - 1).saturating_mul(1u64 << r.min(63));
    if r <= cfg.rank_cap && q.k() < 63 && work <= cfg.work_cap {
        let mut best = usize::MAX;
        for mu in 1u64..(1u64 << q.k()) {
            let mut base = BitVec::zeros(q.n());
            for j in (0..q.k()).filter(|j| mu >> j & 1 == 1) {
                base.xor_assign(&logicals.row(j));
            }
            best = best.min(min_gray_weight(&base, &stabs, false));
        }
        return Ok(DistanceOutcome { value: Distance::Finite(best), method: DistanceMethod::Exhaustive });
    }
    let upper = (0..logicals.rows()).map(|j| logicals.row_weight(j)).min().unwrap_or(q.n());
    let units: Vec<BitVec> = (0..q.n()).map(|i| BitVec::from_support(q.n(), &[i])).collect();
    let opposite = logical_basis(q, basis.opposite());
    let search = SubsetSearch::new(&units, q.checks(basis.opposite()), &opposite, cfg.table_cap);
    match search.min_subset(upper) {
        Ok(Some(hit)) => Ok(DistanceOutcome { value: Distance::Finite(hit.len()), method: DistanceMethod::Mitm }),
        Ok(None) => Err(Error::Cap(format!("no logical of weight ≤ {upper} found; logical basis is inconsistent"))),
        Err(Error::Cap(msg)) => Err(Error::Cap(format!(
            "stabilizer rank {r} exceeds the exhaustive caps and {msg}; use the fault search with an explicit bound"
        ))),
        Err(e) => Err(e),
    }
}
