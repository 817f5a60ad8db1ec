//! Tensor products of chain complexes, hypergraph products and their
//! higher-dimensional iterates, plus the product distance predictor.

use serde::Serialize;

use crate::codes::{complex_to_css, css_distance, Basis, ChainComplex, ClassicalCode, CssCode, Distance};
use crate::error::{Error, Result};
use crate::f2la::BinMatrix;

/// Total complex of `a ⊗ b`.
///
/// Degree `m` is `⊕_{i+j=m} A_i⊗B_j` with blocks ordered by descending `i`;
/// inside a block, `(x, y)` sits at `x·dim B_j + y`.
#[must_use]
pub fn tensor_complex(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let (p, q) = (a.top(), b.top());
    let (da, db) = (a.dims(), b.dims());
    let blocks = |m: usize| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for i in (m.saturating_sub(q)..=m.min(p)).rev() {
            out.push((i, m - i, off));
            off += da[i] * db[m - i];
        }
        out
    };
    let dim = |m: usize| blocks(m).iter().map(|&(i, j, _)| da[i] * db[j]).sum::<usize>();
    if p + q == 0 {
        return ChainComplex::point(dim(0));
    }
    let mut maps = Vec::with_capacity(p + q);
    for m in 1..=p + q {
        let lower = blocks(m - 1);
        let offset_of = |i: usize, j: usize| lower.iter().find(|&&(li, lj, _)| li == i && lj == j).map(|b| b.2);
        let mut d = BinMatrix::zeros(dim(m - 1), dim(m));
        for (i, j, col_off) in blocks(m) {
            if i >= 1 {
                let blk = a.boundary(i).kron(&BinMatrix::identity(db[j]));
                place(&mut d, offset_of(i - 1, j).expect("lower block exists"), col_off, &blk);
            }
            if j >= 1 {
                let blk = BinMatrix::identity(da[i]).kron(&b.boundary(j));
                place(&mut d, offset_of(i, j - 1).expect("lower block exists"), col_off, &blk);
            }
        }
        maps.push(d);
    }
    ChainComplex::from_boundaries(maps).expect("tensor of complexes is a complex")
}

fn place(dst: &mut BinMatrix, r0: usize, c0: usize, blk: &BinMatrix) {
    for r in 0..blk.rows() {
        for c in blk.row(r).iter_ones() {
            dst.toggle(r0 + r, c0 + c);
        }
    }
}

/// 1-complex `F^n → F^r` with boundary `h`.
#[must_use]
pub fn classical_complex(c: &ClassicalCode) -> ChainComplex {
    one_complex(c.h().clone())
}

fn one_complex(h: BinMatrix) -> ChainComplex {
    ChainComplex::from_boundaries(vec![h]).expect("a single map is always a complex")
}

/// Hypergraph product: `complex(c1) ⊗ dual complex(c2)` read at degree 1.
pub fn hgp(c1: &ClassicalCode, c2: &ClassicalCode) -> Result<CssCode> {
    let t = tensor_complex(&classical_complex(c1), &classical_complex(c2).dual());
    complex_to_css(&t, 1)
}

/// Factors of a higher-dimensional product.
#[derive(Clone, Debug)]
pub struct ProductSpec {
    pub factors: Vec<ClassicalCode>,
    /// Per factor: use `Hᵀ` as the boundary map instead of `H`.
    pub dualized: Vec<bool>,
    /// Homology degree read as the code.
    pub level: usize,
}

impl ProductSpec {
    /// First `level` factors plain, the rest dualized.
    #[must_use]
    pub fn standard(factors: Vec<ClassicalCode>, level: usize) -> Self {
        let dualized = (0..factors.len()).map(|i| i >= level).collect();
        Self { factors, dualized, level }
    }

    fn validate(&self) -> Result<()> {
        if self.factors.len() != self.dualized.len() {
            return Err(Error::Invalid("one dualization flag per factor required".into()));
        }
        let max = self.factors.len().saturating_sub(1);
        if self.level < 1 || self.level > max {
            return Err(Error::Level { level: self.level, max });
        }
        Ok(())
    }

    fn factor_complex(&self, i: usize) -> ChainComplex {
        let h = self.factors[i].h();
        one_complex(if self.dualized[i] { h.transpose() } else { h.clone() })
    }
}

/// Output of [`higher_dim_hgp`].
#[derive(Clone, Debug)]
pub struct HigherDimProduct {
    pub code: CssCode,
    pub complex: ChainComplex,
    /// Factor indices folded before the last plain factor, and after it.
    pub left_factors: Vec<usize>,
    pub right_factors: Vec<usize>,
}

pub fn higher_dim_hgp(spec: &ProductSpec) -> Result<HigherDimProduct> {
    spec.validate()?;
    let mut acc = spec.factor_complex(0);
    for i in 1..spec.factors.len() {
        acc = tensor_complex(&acc, &spec.factor_complex(i));
    }
    let code = complex_to_css(&acc, spec.level)?;
    let a = spec.level;
    Ok(HigherDimProduct {
        code,
        complex: acc,
        left_factors: (0..a - 1).collect(),
        right_factors: (a..spec.factors.len()).collect(),
    })
}

/// Output of [`kunneth_distance_predictor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub d_x: Distance,
    pub d_z: Distance,
    /// True when every folded factor map has full row or column rank;
    /// otherwise the values are only upper bounds.
    pub exact: bool,
}

/// Homological and cohomological distances of a complex at every degree.
pub fn degree_distances(c: &ChainComplex) -> Result<(Vec<Distance>, Vec<Distance>)> {
    let mut hom = Vec::new();
    let mut cohom = Vec::new();
    for j in 0..=c.top() {
        let q = c.degree_code(j)?;
        hom.push(css_distance(&q, Basis::Z)?);
        cohom.push(css_distance(&q, Basis::X)?);
    }
    Ok((hom, cohom))
}

/// Folds the factors left to right with
/// `d′_j = min(d_{j−1}(A)·d_1(B), d_j(A)·d_0(B))` and its cohomological mirror.
pub fn kunneth_distance_predictor(spec: &ProductSpec) -> Result<Prediction> {
    spec.validate()?;
    let (mut hom, mut cohom) = degree_distances(&spec.factor_complex(0))?;
    let mut exact = true;
    for i in 1..spec.factors.len() {
        let b = spec.factor_complex(i);
        let m = b.boundary(1);
        let r = m.rank();
        exact &= r == m.rows() || r == m.cols();
        let (bh, bc) = degree_distances(&b)?;
        hom = fold(&hom, &bh);
        cohom = fold(&cohom, &bc);
    }
    Ok(Prediction { d_x: cohom[spec.level], d_z: hom[spec.level], exact })
}

fn fold(a: &[Distance], b: &[Distance]) -> Vec<Distance> {
    let at = |j: Option<usize>| j.and_then(|j| a.get(j).copied()).unwrap_or(Distance::Infinite);
    (0..=a.len()).map(|j| (at(j.checked_sub(1)) * b[1]).min(at(Some(j)) * b[0])).collect()
}
