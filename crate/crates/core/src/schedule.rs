//! Single-ancilla syndrome-extraction schedules and their transport through
//! the code transforms.
//!
//! A schedule measures every stabilizer row once, each with an explicit
//! order of entangling gates over the row's support.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{Basis, CssCode};
use crate::cone::{ChainMapF, ConeComplexPart};
use crate::error::{Error, Result};
use crate::reduce::{BalanceMap, CopyMap, GaugeMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StabMeasurement {
    pub basis: Basis,
    pub row: usize,
    /// Support qubits in gate order.
    pub order: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Schedule {
    pub steps: Vec<StabMeasurement>,
}

impl Schedule {
    #[must_use]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every row of `q` measured exactly once, each order a permutation of
    /// its row's support.
    pub fn validate(&self, q: &CssCode) -> Result<()> {
        let mut seen = [vec![false; q.n_x()], vec![false; q.n_z()]];
        for (i, s) in self.steps.iter().enumerate() {
            let h = q.checks(s.basis);
            let slot = &mut seen[usize::from(s.basis == Basis::Z)];
            if s.row >= h.rows() {
                return Err(Error::Schedule(format!("step {i}: {} row {} out of range", s.basis, s.row)));
            }
            if std::mem::replace(&mut slot[s.row], true) {
                return Err(Error::Schedule(format!("step {i}: {} row {} measured twice", s.basis, s.row)));
            }
            let mut sorted = s.order.clone();
            sorted.sort_unstable();
            if sorted != h.row_support(s.row) {
                return Err(Error::Schedule(format!(
                    "step {i}: order is not the support of {} row {}",
                    s.basis, s.row
                )));
            }
        }
        for (b, slot) in [Basis::X, Basis::Z].into_iter().zip(&seen) {
            if let Some(r) = slot.iter().position(|&x| !x) {
                return Err(Error::Schedule(format!("{b} row {r} never measured")));
            }
        }
        Ok(())
    }

    /// One line per step, `X|Z <row> : q1 q2 …`, all indices 1-based.
    #[must_use]
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let _ = write!(out, "{} {} :", s.basis, s.row + 1);
            for q in &s.order {
                let _ = write!(out, " {}", q + 1);
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Schedule::to_text`]; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            if line.trim().is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Schedule(format!("line {ln}: {msg}"));
            let (head, tail) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let mut head = head.split_whitespace();
            let basis = match head.next() {
                Some("X") => Basis::X,
                Some("Z") => Basis::Z,
                _ => return Err(err("expected X or Z")),
            };
            let row = one_based(head.next().ok_or_else(|| err("missing row"))?).ok_or_else(|| err("bad row index"))?;
            if head.next().is_some() {
                return Err(err("unexpected token before ':'"));
            }
            let order = tail
                .split_whitespace()
                .map(|t| one_based(t).ok_or_else(|| err(&format!("bad qubit index '{t}'"))))
                .collect::<Result<Vec<_>>>()?;
            steps.push(StabMeasurement { basis, row, order });
        }
        Ok(Self { steps })
    }
}

fn one_based(t: &str) -> Option<usize> {
    t.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1)
}

fn canonical(q: &CssCode) -> Schedule {
    let mut steps = Vec::with_capacity(q.n_x() + q.n_z());
    for basis in [Basis::X, Basis::Z] {
        let h = q.checks(basis);
        steps.extend((0..h.rows()).map(|row| StabMeasurement { basis, row, order: h.row_support(row) }));
    }
    Schedule { steps }
}

fn shuffled<R: Rng>(q: &CssCode, rng: &mut R) -> Schedule {
    let mut s = canonical(q);
    s.steps.shuffle(rng);
    for step in &mut s.steps {
        step.order.shuffle(rng);
    }
    s
}

/// Seed 0: X rows then Z rows in matrix order, supports ascending. Any other
/// seed shuffles step order and every gate order.
#[must_use]
pub fn baseline_schedule(q: &CssCode, seed: u64) -> Schedule {
    if seed == 0 {
        canonical(q)
    } else {
        shuffled(q, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

/// `count` independently shuffled schedules from one seeded stream.
#[must_use]
pub fn enumerate_random_schedules(q: &CssCode, count: usize, seed: u64) -> Vec<Schedule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_5C4E_D01E);
    (0..count).map(|_| shuffled(q, &mut rng)).collect()
}

/// Keeps, in order, the first `len / 2` entries of each group, then the rest.
fn halves(groups: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for g in groups {
        let h = g.len() / 2;
        first.extend(&g[..h]);
        second.extend(&g[h..]);
    }
    (first, second)
}

/// Schedule for [`crate::reduce::copy_code`]'s output.
///
/// X steps act on their assigned copies in the same order; glue rows follow
/// in generation order. A Z step first entangles copies `1..⌊q_X/2⌋` of each
/// of its qubits, qubit by qubit in the original order, then the remaining
/// copies the same way.
pub fn copied_schedule(m: &Schedule, cm: &CopyMap) -> Result<Schedule> {
    let mut steps = Vec::with_capacity(m.len() + cm.glue_rows.len());
    for (i, s) in m.steps.iter().enumerate() {
        let order = match s.basis {
            Basis::X => {
                if s.row >= cm.n_x {
                    return Err(Error::MapMismatch(format!("step {i}: X row {} not in the copy map", s.row)));
                }
                s.order
                    .iter()
                    .map(|&qb| {
                        cm.assigned_copy(s.row, qb).map(|c| cm.index(qb, c)).ok_or_else(|| {
                            Error::MapMismatch(format!("step {i}: qubit {qb} not assigned in X row {}", s.row))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            Basis::Z => {
                if s.row >= cm.n_z || s.order.iter().any(|&qb| qb >= cm.n) {
                    return Err(Error::MapMismatch(format!("step {i}: Z step outside the copy map")));
                }
                let groups: Vec<Vec<usize>> =
                    s.order.iter().map(|&qb| (0..cm.copies).map(|c| cm.index(qb, c)).collect()).collect();
                let (mut first, second) = halves(&groups);
                first.extend(second);
                first
            }
        };
        steps.push(StabMeasurement { basis: s.basis, row: s.row, order });
    }
    for (g, &(qb, j)) in cm.glue_rows.iter().enumerate() {
        steps.push(StabMeasurement {
            basis: Basis::X,
            row: cm.glue_row_index(g),
            order: vec![cm.index(qb, j), cm.index(qb, j + 1)],
        });
    }
    Ok(Schedule { steps })
}

/// Schedule for [`crate::reduce::gauge_code`]'s output, from a schedule `m`
/// of the gauged input.
///
/// Each X step becomes its split rows in chain order, gates ascending;
/// unsplit rows keep their order. A Z step's qubits are grouped by original
/// qubit through `cm` (each qubit its own group without one); the first
/// halves of the groups come first, then `⌊b/2⌋` of the `b` repair qubits,
/// then the second halves and the remaining repair qubits.
pub fn gauged_schedule(m: &Schedule, gm: &GaugeMap, cm: Option<&CopyMap>) -> Result<Schedule> {
    let mut steps = Vec::with_capacity(m.len());
    for (i, s) in m.steps.iter().enumerate() {
        match s.basis {
            Basis::X => {
                let ids = gm
                    .split_rows
                    .get(s.row)
                    .ok_or_else(|| Error::MapMismatch(format!("step {i}: X row {} not in the gauge map", s.row)))?;
                if ids.len() == 1 {
                    steps.push(StabMeasurement { basis: Basis::X, row: ids[0], order: s.order.clone() });
                    continue;
                }
                let fresh = &gm.new_qubits[s.row];
                let mut support = s.order.clone();
                support.sort_unstable();
                if support.len() != ids.len() || fresh.len() + 1 != ids.len() {
                    return Err(Error::MapMismatch(format!(
                        "step {i}: split of X row {} does not match its support",
                        s.row
                    )));
                }
                for (p, (&id, &qb)) in ids.iter().zip(&support).enumerate() {
                    let mut order = vec![qb];
                    if p > 0 {
                        order.push(fresh[p - 1]);
                    }
                    if p + 1 < ids.len() {
                        order.push(fresh[p]);
                    }
                    order.sort_unstable();
                    steps.push(StabMeasurement { basis: Basis::X, row: id, order });
                }
            }
            Basis::Z => {
                let patch = gm
                    .z_patch
                    .get(s.row)
                    .ok_or_else(|| Error::MapMismatch(format!("step {i}: Z row {} not in the gauge map", s.row)))?;
                let groups = group_by_original(&s.order, cm)?;
                let (mut order, second) = halves(&groups);
                let b = patch.len() / 2;
                order.extend(&patch[..b]);
                order.extend(second);
                order.extend(&patch[b..]);
                steps.push(StabMeasurement { basis: Basis::Z, row: s.row, order });
            }
        }
    }
    Ok(Schedule { steps })
}

/// Groups qubits by their original qubit, groups in order of first
/// appearance, members in order of appearance.
fn group_by_original(order: &[usize], cm: Option<&CopyMap>) -> Result<Vec<Vec<usize>>> {
    let Some(cm) = cm else {
        return Ok(order.iter().map(|&q| vec![q]).collect());
    };
    let mut keys: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &q in order {
        if q >= cm.n * cm.copies {
            return Err(Error::MapMismatch(format!("qubit {q} is not a copied qubit")));
        }
        let key = cm.group_of(q).0;
        match keys.iter().position(|&k| k == key) {
            Some(g) => groups[g].push(q),
            None => {
                keys.push(key);
                groups.push(vec![q]);
            }
        }
    }
    Ok(groups)
}

/// Schedule for a balanced code (also after height selection).
///
/// For every step of `m` and every classical column the column copy is
/// measured in `m`'s order; region-B qubits of X steps are appended
/// ascending and pruned top rows are skipped. Bottom rows follow, ascending.
/// For a dual map the roles of X and Z are exchanged.
pub fn balanced_schedule(m: &Schedule, bm: &BalanceMap) -> Result<Schedule> {
    let (bx, bz) = if bm.dual { (Basis::Z, Basis::X) } else { (Basis::X, Basis::Z) };
    let hc = &bm.classical;
    let mut x_support: Vec<Option<Vec<usize>>> = vec![None; bm.n_x];
    let mut steps = Vec::new();
    for (i, s) in m.steps.iter().enumerate() {
        if s.order.iter().any(|&q| q >= bm.n) {
            return Err(Error::MapMismatch(format!("step {i}: qubit outside the balanced code's input")));
        }
        if s.basis == bx {
            if s.row >= bm.n_x {
                return Err(Error::MapMismatch(format!("step {i}: row {} outside the map", s.row)));
            }
            x_support[s.row] = Some(s.order.clone());
            for c in 0..bm.n_c {
                let mut order: Vec<usize> = s.order.iter().map(|&q| bm.a_index(q, c)).collect();
                order.extend((0..bm.r_c).filter(|&b| hc.get(b, c)).map(|b| bm.b_index(s.row, b)));
                steps.push(StabMeasurement { basis: bx, row: s.row * bm.n_c + c, order });
            }
        } else {
            if s.row >= bm.n_z {
                return Err(Error::MapMismatch(format!("step {i}: row {} outside the map", s.row)));
            }
            for c in 0..bm.n_c {
                if let Some(row) = bm.top_row(s.row, c) {
                    let order = s.order.iter().map(|&q| bm.a_index(q, c)).collect();
                    steps.push(StabMeasurement { basis: bz, row, order });
                }
            }
        }
    }
    // rows of the input's H_X containing each qubit, recovered from m
    let mut incident = vec![Vec::new(); bm.n];
    for (r, sup) in x_support.iter().enumerate() {
        let sup = sup.as_ref().ok_or_else(|| Error::MapMismatch(format!("row {r} missing from the schedule")))?;
        for &q in sup {
            incident[q].push(r);
        }
    }
    for (q, rows) in incident.iter().enumerate() {
        for b in 0..bm.r_c {
            let mut order: Vec<usize> = (0..bm.n_c).filter(|&c| hc.get(b, c)).map(|c| bm.a_index(q, c)).collect();
            order.extend(rows.iter().map(|&r| bm.b_index(r, b)));
            order.sort_unstable();
            steps.push(StabMeasurement { basis: bz, row: bm.bottom_offset + q * bm.r_c + b, order });
        }
    }
    Ok(Schedule { steps })
}

/// Schedule for [`crate::cone::cone_code`]'s output.
///
/// X steps keep `m`'s order with their 0-cell qubits appended ascending;
/// direct Z steps are relabeled; a coned Z step becomes the rows of its
/// 1-cells, ordered like the parent's qubits in `m`, gates ascending. The
/// −1-cell rows follow in index order.
pub fn cone_schedule(m: &Schedule, q: &CssCode, parts: &[ConeComplexPart], f: &ChainMapF) -> Result<Schedule> {
    f.check(q, parts)?;
    let mut z_new: Vec<Option<usize>> = vec![Some(0); q.n_z()];
    let mut part_of = vec![None; q.n_z()];
    for (i, p) in parts.iter().enumerate() {
        z_new[p.parent_z_row] = None;
        part_of[p.parent_z_row] = Some(i);
    }
    let mut next = 0;
    for slot in z_new.iter_mut().flatten() {
        *slot = next;
        next += 1;
    }
    let direct = next;
    let mut zero_off = Vec::with_capacity(parts.len());
    let mut one_off = Vec::with_capacity(parts.len());
    let mut attach: Vec<Vec<usize>> = vec![Vec::new(); q.n_x()];
    let (mut zo, mut oo) = (q.n(), direct);
    for (p, pm) in parts.iter().zip(&f.parts) {
        zero_off.push(zo);
        one_off.push(oo);
        for (e, img) in pm.zero_cells.iter().enumerate() {
            if let Some(r) = *img {
                attach[r].push(zo + e);
            }
        }
        zo += p.zero_cells.len();
        oo += p.one_cells.len();
    }
    let mut steps = Vec::new();
    for (i, s) in m.steps.iter().enumerate() {
        let bad = || Error::MapMismatch(format!("step {i}: row {} outside the code", s.row));
        match s.basis {
            Basis::X => {
                let extra = attach.get(s.row).ok_or_else(bad)?;
                let mut order = s.order.clone();
                order.extend(extra);
                steps.push(StabMeasurement { basis: Basis::X, row: s.row, order });
            }
            Basis::Z => {
                if s.row >= q.n_z() {
                    return Err(bad());
                }
                if let Some(row) = z_new[s.row] {
                    steps.push(StabMeasurement { basis: Basis::Z, row, order: s.order.clone() });
                    continue;
                }
                let pi = part_of[s.row].expect("coned row has a part");
                let p = &parts[pi];
                for &qb in &s.order {
                    let j = p.one_cells.binary_search(&qb).map_err(|_| bad())?;
                    let mut order = vec![qb];
                    order.extend(p.boundary_1.col_support(j).into_iter().map(|e| zero_off[pi] + e));
                    steps.push(StabMeasurement { basis: Basis::Z, row: one_off[pi] + j, order });
                }
            }
        }
    }
    let mut row = q.n_x();
    for (pi, p) in parts.iter().enumerate() {
        for cyc in &p.minus_one_cells {
            let mut order: Vec<usize> = cyc.iter().map(|&e| zero_off[pi] + e).collect();
            order.sort_unstable();
            steps.push(StabMeasurement { basis: Basis::X, row, order });
            row += 1;
        }
    }
    Ok(Schedule { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{css_from_matrices, hamming_7_4, repetition_code};
    use crate::cone::{build_cone_parts, cone_code, reduced_cone, ConeOptions};
    use crate::f2la::BinMatrix;
    use crate::hgp::hgp;
    use crate::reduce::{balance_x, choose_heights, copy_code, gauge_code, greedy_heights, thicken};
    use proptest::prelude::*;

    fn steane() -> CssCode {
        let h = hamming_7_4().h().clone();
        css_from_matrices(h.clone(), h).unwrap()
    }

    fn surface(l: usize) -> CssCode {
        hgp(&repetition_code(l).unwrap(), &repetition_code(l).unwrap()).unwrap()
    }

    #[test]
    fn canonical_steane() {
        let s = baseline_schedule(&steane(), 0);
        let labels: Vec<_> = s.steps.iter().map(|m| (m.basis, m.row)).collect();
        assert_eq!(
            labels,
            vec![(Basis::X, 0), (Basis::X, 1), (Basis::X, 2), (Basis::Z, 0), (Basis::Z, 1), (Basis::Z, 2)]
        );
        assert!(s.steps.iter().all(|m| m.order.windows(2).all(|w| w[0] < w[1])));
        s.validate(&steane()).unwrap();
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let q = surface(3);
        assert_eq!(baseline_schedule(&q, 7), baseline_schedule(&q, 7));
        let (a, b) = (baseline_schedule(&q, 11), baseline_schedule(&q, 12));
        a.validate(&q).unwrap();
        b.validate(&q).unwrap();
        assert_ne!(a, b);
        let r1 = enumerate_random_schedules(&q, 1, 5);
        let r2 = enumerate_random_schedules(&q, 1, 6);
        assert_ne!(r1, r2);
        assert!(enumerate_random_schedules(&q, 0, 1).is_empty());
        for s in enumerate_random_schedules(&q, 10, 3) {
            s.validate(&q).unwrap();
        }
    }

    #[test]
    fn text_round_trip() {
        let q = surface(3);
        let s = baseline_schedule(&q, 3);
        let t = s.to_text();
        assert_eq!(Schedule::parse(&t).unwrap(), s);
        assert_eq!(Schedule::parse(&t).unwrap().to_text(), t);
        assert!(t.lines().next().unwrap().contains(" : "));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = Schedule::parse("X 1 : 1 2\nY 2 : 3\n").unwrap_err();
        assert_eq!(e, Error::Schedule("line 2: expected X or Z".into()));
        assert!(Schedule::parse("X 0 : 1\n").is_err());
        assert!(Schedule::parse("Z 1 1 2\n").is_err());
    }

    #[test]
    fn validate_rejects_bad_schedules() {
        let q = steane();
        let mut s = baseline_schedule(&q, 0);
        s.steps[0].order.pop();
        assert!(s.validate(&q).is_err());
        let mut s = baseline_schedule(&q, 0);
        s.steps.pop();
        assert!(s.validate(&q).is_err());
        let mut s = baseline_schedule(&q, 0);
        s.steps[1] = s.steps[0].clone();
        assert!(s.validate(&q).is_err());
    }

    #[test]
    fn copied_order_example() {
        // qubits a = 0, b = 1 each in four X rows; one Z row {a, b}
        let hx = BinMatrix::from_supports(2, &vec![vec![0, 1]; 4]);
        let hz = BinMatrix::from_supports(2, &[vec![0, 1]]);
        let q = css_from_matrices(hx, hz).unwrap();
        let (c, cm) = copy_code(&q).unwrap();
        let s = copied_schedule(&baseline_schedule(&q, 0), &cm).unwrap();
        s.validate(&c).unwrap();
        let z = s.steps.iter().find(|m| m.basis == Basis::Z).unwrap();
        // (a1, a2, b1, b2, a3, a4, b3, b4)
        assert_eq!(z.order, vec![0, 1, 4, 5, 2, 3, 6, 7]);
    }

    #[test]
    fn copied_with_single_copy_is_identity() {
        let hx = BinMatrix::from_supports(4, &[vec![0, 1], vec![2, 3]]);
        let hz = BinMatrix::from_supports(4, &[vec![0, 1, 2, 3]]);
        let q = css_from_matrices(hx, hz).unwrap();
        let (_, cm) = copy_code(&q).unwrap();
        let m = baseline_schedule(&q, 9);
        assert_eq!(copied_schedule(&m, &cm).unwrap(), m);
    }

    #[test]
    fn gauged_order_example() {
        // one copy group of four, two repair qubits on the Z row
        let cm = CopyMap { n: 1, n_x: 0, n_z: 1, copies: 4, assigned: vec![], glue_rows: vec![] };
        let gm = GaugeMap { n: 4, n_x: 0, split_rows: vec![], new_qubits: vec![], z_patch: vec![vec![4, 5]] };
        let m = Schedule { steps: vec![StabMeasurement { basis: Basis::Z, row: 0, order: vec![0, 1, 2, 3] }] };
        let s = gauged_schedule(&m, &gm, Some(&cm)).unwrap();
        assert_eq!(s.steps[0].order, vec![0, 1, 4, 2, 3, 5]);
    }

    #[test]
    fn gauged_without_splits_relabels_copied() {
        let hx = BinMatrix::from_supports(4, &[vec![0, 1], vec![1, 2, 3]]);
        let q = css_from_matrices(hx, BinMatrix::from_supports(4, &[vec![2, 3]])).unwrap();
        let (c, cm) = copy_code(&q).unwrap();
        let (g, gm) = gauge_code(&c).unwrap();
        let m = copied_schedule(&baseline_schedule(&q, 4), &cm).unwrap();
        let s = gauged_schedule(&m, &gm, Some(&cm)).unwrap();
        s.validate(&g).unwrap();
        assert_eq!(s, m);
    }

    #[test]
    fn copied_gauged_steane_valid() {
        let q = steane();
        for seed in 0..10 {
            let (c, cm) = copy_code(&q).unwrap();
            let m = copied_schedule(&baseline_schedule(&q, seed), &cm).unwrap();
            m.validate(&c).unwrap();
            let (g, gm) = gauge_code(&c).unwrap();
            gauged_schedule(&m, &gm, Some(&cm)).unwrap().validate(&g).unwrap();
            let (g2, gm2) = gauge_code(&q).unwrap();
            gauged_schedule(&baseline_schedule(&q, seed), &gm2, None).unwrap().validate(&g2).unwrap();
        }
    }

    #[test]
    fn balanced_counts() {
        let q = surface(3);
        for seed in 0..5 {
            let m = baseline_schedule(&q, seed);
            let (t, bm) = thicken(&q, 2).unwrap();
            let s = balanced_schedule(&m, &bm).unwrap();
            s.validate(&t).unwrap();
            assert_eq!(s.len(), 2 * m.len() + q.n() * bm.r_c);
            let hc = hamming_7_4();
            let (b, bm) = balance_x(&q, &hc).unwrap();
            balanced_schedule(&m, &bm).unwrap().validate(&b).unwrap();
            let (bz, bmz) = crate::reduce::balance_z(&q, &hc).unwrap();
            balanced_schedule(&m, &bmz).unwrap().validate(&bz).unwrap();
            let (_, tm) = thicken(&q, 2).unwrap();
            let hch = greedy_heights(&t, &tm, 3).unwrap();
            let (h, hm) = choose_heights(&t, &tm, &hch.heights).unwrap();
            balanced_schedule(&m, &hm).unwrap().validate(&h).unwrap();
        }
    }

    #[test]
    fn trivial_classical_code_keeps_schedule() {
        let q = surface(3);
        let c = crate::codes::ClassicalCode::new(BinMatrix::zeros(0, 1));
        let (b, bm) = balance_x(&q, &c).unwrap();
        let m = baseline_schedule(&q, 2);
        let s = balanced_schedule(&m, &bm).unwrap();
        assert_eq!(b, q);
        assert_eq!(s, m);
    }

    #[test]
    fn cone_order_follows_parent() {
        let q = crate::cone::tests::heavy_face(&surface(4), 6);
        let (parts, f, _) = build_cone_parts(&q, &ConeOptions::default()).unwrap();
        let c = cone_code(&q, &parts, &f).unwrap();
        let mut m = baseline_schedule(&q, 0);
        let parent = parts[0].parent_z_row;
        let step = m.steps.iter_mut().find(|s| s.basis == Basis::Z && s.row == parent).unwrap();
        step.order.reverse();
        let expected: Vec<usize> = step.order.clone();
        let s = cone_schedule(&m, &q, &parts, &f).unwrap();
        s.validate(&c).unwrap();
        let new_z: Vec<usize> =
            s.steps.iter().filter(|s| s.basis == Basis::Z && s.row >= q.n_z() - 1).map(|s| s.order[0]).collect();
        assert_eq!(new_z, expected);
        let empty =
            cone_schedule(&baseline_schedule(&surface(3), 1), &surface(3), &[], &ChainMapF { parts: vec![] }).unwrap();
        assert_eq!(empty, baseline_schedule(&surface(3), 1));
    }

    #[test]
    fn reduced_cone_schedule_valid() {
        let q = crate::cone::tests::heavy_face(&surface(4), 8);
        let r = reduced_cone(&q, &ConeOptions::default(), 3).unwrap();
        for seed in 0..5 {
            let mc = cone_schedule(&baseline_schedule(&q, seed), &q, &r.parts, &r.f).unwrap();
            mc.validate(&r.cone).unwrap();
            let mt = balanced_schedule(&mc, &r.thickened.map).unwrap();
            mt.validate(&r.thickened.code).unwrap();
        }
    }

    proptest! {
        #[test]
        fn random_schedules_valid(l in 2usize..4, seed in any::<u64>()) {
            let q = surface(l);
            let s = baseline_schedule(&q, seed);
            prop_assert!(s.validate(&q).is_ok());
            prop_assert_eq!(Schedule::parse(&s.to_text()).unwrap(), s);
        }
    }
}
