//! Elementary faults of a single-ancilla schedule and the exact effective
//! distance: the fewest faults whose combined data error is a nontrivial
//! logical operator.

use std::collections::HashSet;

use serde::{Serialize, Serializer};

use crate::codes::{logical_basis, Basis, CssCode, Distance};
use crate::error::{Error, Result};
use crate::f2la::{BitVec, RowBasis};
use crate::reduce::{BalanceMap, Region, ZRowKind};
use crate::schedule::Schedule;
use crate::search::{binom, SubsetSearch, DEFAULT_TABLE_CAP};

pub const DEFAULT_MAX_D: usize = 6;
/// Largest number of subsets the plain oracle will visit.
pub const ORACLE_CAP: u64 = 100_000_000;

/// Where a fault happens. Data faults order before hooks, hooks by step then
/// cut position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Origin {
    Data {
        qubit: usize,
    },
    /// Ancilla fault after the first `cut` gates of step `step`.
    Hook {
        step: usize,
        cut: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaultGenerator {
    pub basis: Basis,
    pub origin: Origin,
    #[serde(serialize_with = "support_of")]
    pub residual: BitVec,
}

fn support_of<S: Serializer>(v: &BitVec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter_ones())
}

impl FaultGenerator {
    #[must_use]
    pub fn is_hook(&self) -> bool {
        matches!(self.origin, Origin::Hook { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaultSearchResult {
    pub basis: Basis,
    /// Infinite when nothing up to `exact_up_to` faults is logical.
    pub distance: Distance,
    pub witness: Vec<FaultGenerator>,
    pub exact_up_to: usize,
}

/// Every data fault and every hook of the `basis`-type steps, without
/// removing duplicate residuals.
#[must_use]
pub fn enumerate_faults_raw(q: &CssCode, m: &Schedule, basis: Basis) -> Vec<FaultGenerator> {
    let n = q.n();
    let mut out: Vec<FaultGenerator> = (0..n)
        .map(|i| FaultGenerator { basis, origin: Origin::Data { qubit: i }, residual: BitVec::from_support(n, &[i]) })
        .collect();
    for (step, s) in m.steps.iter().enumerate().filter(|(_, s)| s.basis == basis) {
        for cut in 1..s.order.len() {
            out.push(FaultGenerator {
                basis,
                origin: Origin::Hook { step, cut },
                residual: BitVec::from_support(n, &s.order[cut..]),
            });
        }
    }
    out
}

/// [`enumerate_faults_raw`] with exact duplicate residuals dropped, keeping
/// the lowest origin.
#[must_use]
pub fn enumerate_faults(q: &CssCode, m: &Schedule, basis: Basis) -> Vec<FaultGenerator> {
    let mut seen = HashSet::new();
    enumerate_faults_raw(q, m, basis).into_iter().filter(|g| seen.insert(g.residual.clone())).collect()
}

/// The combined residual of the faults is a nontrivial logical of its basis.
#[must_use]
pub fn witness_is_logical(q: &CssCode, basis: Basis, witness: &[FaultGenerator]) -> bool {
    let mut v = BitVec::zeros(q.n());
    for g in witness {
        v.xor_assign(&g.residual);
    }
    q.checks(basis.opposite()).mul_vec(&v).is_zero() && !RowBasis::new(q.checks(basis)).contains(&v)
}

fn infinite(basis: Basis, max_d: usize) -> FaultSearchResult {
    FaultSearchResult { basis, distance: Distance::Infinite, witness: Vec::new(), exact_up_to: max_d }
}

fn precheck(q: &CssCode, m: &Schedule, max_d: usize) -> Result<()> {
    if max_d == 0 {
        return Err(Error::Invalid("fault search bound must be at least 1".into()));
    }
    m.validate(q)
}

/// Exact effective distance up to `max_d` by meet-in-the-middle search over
/// the deduplicated generators.
pub fn effective_distance(q: &CssCode, m: &Schedule, basis: Basis, max_d: usize) -> Result<FaultSearchResult> {
    effective_distance_with(q, m, basis, max_d, DEFAULT_TABLE_CAP)
}

pub fn effective_distance_with(
    q: &CssCode,
    m: &Schedule,
    basis: Basis,
    max_d: usize,
    table_cap: u64,
) -> Result<FaultSearchResult> {
    precheck(q, m, max_d)?;
    if q.k() == 0 {
        return Ok(infinite(basis, max_d));
    }
    let gens = enumerate_faults(q, m, basis);
    let residuals: Vec<BitVec> = gens.iter().map(|g| g.residual.clone()).collect();
    let opposite = basis.opposite();
    let search = SubsetSearch::new(&residuals, q.checks(opposite), &logical_basis(q, opposite), table_cap);
    let hit = search.min_subset(max_d).map_err(|e| match e {
        Error::Cap(msg) => Error::Cap(format!("{msg} (max_d = {max_d})")),
        e => e,
    })?;
    Ok(match hit {
        Some(idx) => FaultSearchResult {
            basis,
            distance: Distance::Finite(idx.len()),
            witness: idx.into_iter().map(|i| gens[i].clone()).collect(),
            exact_up_to: max_d,
        },
        None => infinite(basis, max_d),
    })
}

/// Plain enumeration of all subsets of the undeduplicated generators, in
/// increasing size.
pub fn oracle_effective_distance(q: &CssCode, m: &Schedule, basis: Basis, max_d: usize) -> Result<FaultSearchResult> {
    precheck(q, m, max_d)?;
    let gens = enumerate_faults_raw(q, m, basis);
    let g = gens.len();
    let total: u64 = (1..=max_d).map(|t| binom(g, t)).fold(0, u64::saturating_add);
    if total > ORACLE_CAP {
        return Err(Error::Cap(format!("oracle would visit {total} subsets, cap is {ORACLE_CAP}")));
    }
    if q.k() == 0 {
        return Ok(infinite(basis, max_d));
    }
    let opp = q.checks(basis.opposite());
    let syndromes: Vec<BitVec> = gens.iter().map(|x| opp.mul_vec(&x.residual)).collect();
    let stabs = RowBasis::new(q.checks(basis));
    for t in 1..=max_d.min(g) {
        let mut combo = Vec::with_capacity(t);
        let mut v = BitVec::zeros(q.n());
        let mut s = BitVec::zeros(opp.rows());
        if let Some(hit) = oracle_dfs(&gens, &syndromes, &stabs, 0, t, &mut combo, &mut v, &mut s) {
            return Ok(FaultSearchResult {
                basis,
                distance: Distance::Finite(t),
                witness: hit.into_iter().map(|i| gens[i].clone()).collect(),
                exact_up_to: max_d,
            });
        }
    }
    Ok(infinite(basis, max_d))
}

#[allow(clippy::too_many_arguments)]
fn oracle_dfs(
    gens: &[FaultGenerator],
    syndromes: &[BitVec],
    stabs: &RowBasis,
    from: usize,
    left: usize,
    combo: &mut Vec<usize>,
    v: &mut BitVec,
    s: &mut BitVec,
) -> Option<Vec<usize>> {
    if left == 0 {
        return (s.is_zero() && !stabs.contains(v)).then(|| combo.clone());
    }
    for i in from..=gens.len() - left {
        combo.push(i);
        v.xor_assign(&gens[i].residual);
        s.xor_assign(&syndromes[i]);
        let found = oracle_dfs(gens, syndromes, stabs, i + 1, left - 1, combo, v, s);
        v.xor_assign(&gens[i].residual);
        s.xor_assign(&syndromes[i]);
        combo.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepHookAudit {
    pub step: usize,
    pub basis: Basis,
    pub row: usize,
    pub weight: usize,
    /// Largest hook weight after reduction by the step's own row.
    pub max_reduced: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HookAudit {
    pub steps: Vec<StepHookAudit>,
    pub violations: Vec<String>,
}

impl HookAudit {
    #[must_use]
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every hook, reduced by its own stabilizer, touches at most `⌊w/2⌋` qubits.
#[must_use]
pub fn hook_weight_audit(q: &CssCode, m: &Schedule) -> HookAudit {
    let mut steps = Vec::new();
    let mut violations = Vec::new();
    for basis in [Basis::X, Basis::Z] {
        for g in enumerate_faults_raw(q, m, basis) {
            let Origin::Hook { step, cut } = g.origin else { continue };
            let s = &m.steps[step];
            let w = s.order.len();
            let hook = g.residual.weight();
            let reduced = hook.min(w - hook);
            if reduced > w / 2 {
                violations.push(format!("step {step} cut {cut}: reduced hook weight {reduced} > {}", w / 2));
            }
            match steps.iter_mut().find(|a: &&mut StepHookAudit| a.step == step) {
                Some(a) => a.max_reduced = a.max_reduced.max(reduced),
                None => steps.push(StepHookAudit { step, basis: s.basis, row: s.row, weight: w, max_reduced: reduced }),
            }
        }
    }
    steps.sort_by_key(|a| a.step);
    HookAudit { steps, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentAudit {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl ComponentAudit {
    #[must_use]
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Region-A footprint of faults on a balanced code measured by `m`: data
/// faults and hooks of X steps and top Z steps stay in one classical column,
/// hooks of bottom Z steps in one original qubit. For a dual map X and Z are
/// exchanged.
pub fn component_weight_audit(
    q_balanced: &CssCode,
    bm: &BalanceMap,
    m: &Schedule,
    faults: &[FaultGenerator],
) -> Result<ComponentAudit> {
    if q_balanced.n() != bm.new_n() {
        return Err(Error::MapMismatch("balanced code and map disagree in size".into()));
    }
    let bx = if bm.dual { Basis::Z } else { Basis::X };
    let mut violations = Vec::new();
    for g in faults {
        let (mut cols, mut rows) = (Vec::new(), Vec::new());
        for i in g.residual.iter_ones() {
            if let Region::A { qubit, col } = bm.region(i) {
                cols.push(col);
                rows.push(qubit);
            }
        }
        cols.sort_unstable();
        cols.dedup();
        rows.sort_unstable();
        rows.dedup();
        let by_row = match g.origin {
            Origin::Data { .. } => false,
            Origin::Hook { step, .. } => {
                let s =
                    m.steps.get(step).ok_or_else(|| Error::MapMismatch(format!("fault from unknown step {step}")))?;
                s.basis != bx && matches!(bm.z_row_kind(s.row), ZRowKind::Bottom { .. })
            }
        };
        let (count, what) = if by_row { (rows.len(), "original qubits") } else { (cols.len(), "columns") };
        if count > 1 {
            violations.push(format!("{:?}: region-A residual spans {count} {what}", g.origin));
        }
    }
    Ok(ComponentAudit { checked: faults.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{css_distance, css_from_matrices, hamming_7_4, repetition_code};
    use crate::f2la::BinMatrix;
    use crate::hgp::hgp;
    use crate::reduce::{balance_x, thicken};
    use crate::schedule::{balanced_schedule, baseline_schedule, enumerate_random_schedules, StabMeasurement};
    use proptest::prelude::*;

    fn steane() -> CssCode {
        let h = hamming_7_4().h().clone();
        css_from_matrices(h.clone(), h).unwrap()
    }

    fn surface(l: usize) -> CssCode {
        hgp(&repetition_code(l).unwrap(), &repetition_code(l).unwrap()).unwrap()
    }

    #[test]
    fn hook_residual_is_suffix() {
        let q = css_from_matrices(BinMatrix::from_supports(5, &[vec![0, 1, 2, 3, 4]]), BinMatrix::zeros(0, 5)).unwrap();
        let m = baseline_schedule(&q, 0);
        let f = enumerate_faults_raw(&q, &m, Basis::X);
        let h = f.iter().find(|g| g.origin == Origin::Hook { step: 0, cut: 2 }).unwrap();
        assert_eq!(h.residual.support(), vec![2, 3, 4]);
        let mut other = h.residual.clone();
        other.xor_assign(&q.h_x().row(0));
        assert_eq!(other.support(), vec![0, 1]);
        let a = hook_weight_audit(&q, &m);
        assert!(a.passed());
        assert_eq!(a.steps[0].max_reduced, 2);
    }

    #[test]
    fn weight_two_step_has_single_hook() {
        let q = css_from_matrices(BinMatrix::from_supports(2, &[vec![0, 1]]), BinMatrix::zeros(0, 2)).unwrap();
        let m = baseline_schedule(&q, 0);
        let raw = enumerate_faults_raw(&q, &m, Basis::X);
        let hooks: Vec<_> = raw.iter().filter(|g| g.is_hook()).collect();
        assert_eq!(hooks.len(), 1);
        assert_eq!(hooks[0].residual.weight(), 1);
        assert_eq!(enumerate_faults(&q, &m, Basis::X).len(), 2);
        assert_eq!(hook_weight_audit(&q, &m).steps[0].max_reduced, 1);
    }

    #[test]
    fn weight_three_hooks_touch_one_qubit() {
        let q = css_from_matrices(BinMatrix::from_supports(3, &[vec![0, 1, 2]]), BinMatrix::zeros(0, 3)).unwrap();
        let m = baseline_schedule(&q, 5);
        assert_eq!(hook_weight_audit(&q, &m).steps[0].max_reduced, 1);
    }

    #[test]
    fn steane_generator_count() {
        let q = steane();
        let m = baseline_schedule(&q, 0);
        let raw = enumerate_faults_raw(&q, &m, Basis::X);
        assert_eq!(raw.len(), 7 + 3 * 3);
        let r = oracle_effective_distance(&q, &m, Basis::X, 1).unwrap();
        assert_eq!(r.distance, Distance::Infinite);
        assert_eq!(r.exact_up_to, 1);
    }

    #[test]
    fn bare_qubit_has_distance_one() {
        let q = css_from_matrices(BinMatrix::zeros(0, 1), BinMatrix::zeros(0, 1)).unwrap();
        let m = baseline_schedule(&q, 0);
        for b in [Basis::X, Basis::Z] {
            assert_eq!(oracle_effective_distance(&q, &m, b, 2).unwrap().distance, Distance::Finite(1));
            assert_eq!(effective_distance(&q, &m, b, 2).unwrap().distance, Distance::Finite(1));
        }
    }

    #[test]
    fn no_logicals_is_infinite() {
        let q =
            css_from_matrices(BinMatrix::from_supports(2, &[vec![0, 1]]), BinMatrix::from_supports(2, &[vec![0, 1]]));
        let q = q.unwrap();
        assert_eq!(q.k(), 0);
        let m = baseline_schedule(&q, 0);
        let r = effective_distance(&q, &m, Basis::X, 6).unwrap();
        assert_eq!(r.distance, Distance::Infinite);
        assert_eq!(r.exact_up_to, 6);
    }

    #[test]
    fn surface_effective_distance_is_three() {
        let q = surface(3);
        for m in enumerate_random_schedules(&q, 8, 1) {
            for b in [Basis::X, Basis::Z] {
                let r = effective_distance(&q, &m, b, 4).unwrap();
                assert_eq!(r.distance, Distance::Finite(3));
                assert!(witness_is_logical(&q, b, &r.witness));
                assert_eq!(oracle_effective_distance(&q, &m, b, 3).unwrap().distance, Distance::Finite(3));
            }
        }
    }

    #[test]
    fn schedule_checked_and_bound_positive() {
        let q = surface(2);
        let mut m = baseline_schedule(&q, 0);
        assert!(effective_distance(&q, &m, Basis::X, 0).is_err());
        m.steps.push(StabMeasurement { basis: Basis::X, row: 0, order: vec![0] });
        assert!(effective_distance(&q, &m, Basis::X, 2).is_err());
    }

    #[test]
    fn component_audit_on_thickened_surface() {
        let q = surface(3);
        for seed in 0..4 {
            let m = baseline_schedule(&q, seed);
            let (t, bm) = thicken(&q, 3).unwrap();
            let mt = balanced_schedule(&m, &bm).unwrap();
            for b in [Basis::X, Basis::Z] {
                let f = enumerate_faults_raw(&t, &mt, b);
                let a = component_weight_audit(&t, &bm, &mt, &f).unwrap();
                assert!(a.passed(), "{:?}", a.violations);
            }
            let (bz, bmz) = crate::reduce::balance_z(&q, &hamming_7_4()).unwrap();
            let mz = balanced_schedule(&m, &bmz).unwrap();
            let f = enumerate_faults_raw(&bz, &mz, Basis::Z);
            assert!(component_weight_audit(&bz, &bmz, &mz, &f).unwrap().passed());
            let _ = balance_x;
        }
    }

    #[test]
    fn witness_validates_independently() {
        let q = steane();
        let m = baseline_schedule(&q, 3);
        let r = effective_distance(&q, &m, Basis::Z, 4).unwrap();
        assert!(witness_is_logical(&q, Basis::Z, &r.witness));
        assert_eq!(r.witness.len(), r.distance.finite().unwrap());
        assert!(r.distance <= css_distance(&q, Basis::Z).unwrap());
    }

    fn small_code() -> impl Strategy<Value = CssCode> {
        (3usize..9, any::<u64>()).prop_map(|(n, seed)| crate::codes::tests::random_css(n, seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn search_matches_oracle(q in small_code(), seed in 1u64..1000, x in any::<bool>()) {
            let b = if x { Basis::X } else { Basis::Z };
            let m = baseline_schedule(&q, seed);
            let fast = effective_distance(&q, &m, b, 3).unwrap();
            let slow = oracle_effective_distance(&q, &m, b, 3).unwrap();
            prop_assert_eq!(fast.distance, slow.distance);
            if fast.distance.finite().is_some() {
                prop_assert!(witness_is_logical(&q, b, &fast.witness));
            }
            prop_assert!(fast.distance <= css_distance(&q, b).unwrap());
        }

        #[test]
        fn extra_generators_never_raise_distance(q in small_code(), seed in 1u64..1000) {
            let m = baseline_schedule(&q, seed);
            let dedup = effective_distance(&q, &m, Basis::X, 3).unwrap().distance;
            let raw = oracle_effective_distance(&q, &m, Basis::X, 3).unwrap().distance;
            prop_assert!(raw <= dedup);
        }
    }
}
