//! Transform sequence, schedule construction and distance computation
//! behind every subcommand.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use qwr_core::codes::{css_distance_with, DistanceConfig, DistanceMethod};
use qwr_core::cone::{
    build_cone_parts, cellulate, cone_code, reduced_cone, soundness_lambda, ChainMapF, ConeComplexPart, ConeOptions,
    DEFAULT_CONE_THRESHOLD,
};
use qwr_core::faultdist::{
    component_weight_audit, effective_distance, enumerate_faults, enumerate_faults_raw, hook_weight_audit,
    witness_is_logical,
};
use qwr_core::reduce::audit::{balance_lemma, copy_gauge_lemma, copy_lemma, gauge_lemma};
use qwr_core::reduce::{
    balance_x, balance_z, choose_heights, copy_code, gauge_code, greedy_heights, thicken, BalanceMap, CopyMap,
};
use qwr_core::schedule::{
    balanced_schedule, baseline_schedule, cone_schedule, copied_schedule, gauged_schedule, Schedule,
};
use qwr_core::{css_from_matrices, Basis, BinMatrix, ClassicalCode, CssCode, Distance};

use crate::error::CliError;
use crate::mtxf2::{parse_matrix, read_text, write_matrix};
use crate::report::{
    sha256_hex, AuditSummary, Bound, CodeReport, DistanceEntry, EffectiveReport, InputDigest, Report, ScheduleReport,
    Settings, StageReport, Tool, SCHEMA,
};

pub const DEFAULT_ELL: usize = 2;
pub const DEFAULT_MAX_D: usize = qwr_core::faultdist::DEFAULT_MAX_D;
pub const DEFAULT_HEIGHT_TARGET: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformStep {
    Copy,
    Gauge,
    Thicken,
    /// Height selection on the output of the preceding thicken or balance.
    Heights,
    BalanceX,
    BalanceZ,
    Cone,
    /// Cone, cellulation, dual thickening and heights in one step.
    ReducedCone,
}

impl TransformStep {
    pub const ALL: [TransformStep; 8] = [
        TransformStep::Copy,
        TransformStep::Gauge,
        TransformStep::Thicken,
        TransformStep::Heights,
        TransformStep::BalanceX,
        TransformStep::BalanceZ,
        TransformStep::Cone,
        TransformStep::ReducedCone,
    ];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            TransformStep::Copy => "copy",
            TransformStep::Gauge => "gauge",
            TransformStep::Thicken => "thicken",
            TransformStep::Heights => "heights",
            TransformStep::BalanceX => "balance-x",
            TransformStep::BalanceZ => "balance-z",
            TransformStep::Cone => "cone",
            TransformStep::ReducedCone => "reduced-cone",
        }
    }
}

impl FromStr for TransformStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|t| t.name()).collect();
            format!("unknown transform {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightSpec {
    /// Greedy selection with this target load per qubit.
    Greedy(usize),
    /// 1-based height per original Z row.
    Explicit(Vec<usize>),
}

impl Default for HeightSpec {
    fn default() -> Self {
        HeightSpec::Greedy(DEFAULT_HEIGHT_TARGET)
    }
}

impl fmt::Display for HeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightSpec::Greedy(w) => write!(f, "greedy:{w}"),
            HeightSpec::Explicit(h) => {
                let parts: Vec<String> = h.iter().map(ToString::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for HeightSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad heights {s:?}; expected greedy:<w> or explicit:<h1,h2,...>");
        match s.split_once(':') {
            Some(("greedy", w)) => w.parse().map(HeightSpec::Greedy).map_err(|_| bad()),
            Some(("explicit", list)) => list
                .split(',')
                .map(|h| h.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map(HeightSpec::Explicit)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisSel {
    X,
    Z,
    #[default]
    Both,
}

impl BasisSel {
    #[must_use]
    pub fn bases(self) -> Vec<Basis> {
        match self {
            BasisSel::X => vec![Basis::X],
            BasisSel::Z => vec![Basis::Z],
            BasisSel::Both => vec![Basis::X, Basis::Z],
        }
    }
}

impl fmt::Display for BasisSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisSel::X => "X",
            BasisSel::Z => "Z",
            BasisSel::Both => "both",
        })
    }
}

impl FromStr for BasisSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "X" | "x" => Ok(BasisSel::X),
            "Z" | "z" => Ok(BasisSel::Z),
            "both" => Ok(BasisSel::Both),
            _ => Err(format!("bad basis {s:?}; expected X, Z or both")),
        }
    }
}

/// A value read from a file, with its path and digest.
#[derive(Clone, Debug)]
pub struct Input<T> {
    pub value: T,
    pub path: String,
    pub sha256: String,
}

impl Input<BinMatrix> {
    pub fn load_matrix(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let name = path.display().to_string();
        Ok(Input { value: parse_matrix(&text, &name)?, sha256: sha256_hex(text.as_bytes()), path: name })
    }
}

impl Input<Schedule> {
    pub fn load_schedule(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let name = path.display().to_string();
        let value = Schedule::parse(&text).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
        Ok(Input { value, sha256: sha256_hex(text.as_bytes()), path: name })
    }
}

#[derive(Clone, Debug)]
pub enum ScheduleSpec {
    /// Baseline schedule of the final code with this seed.
    Seed(u64),
    File(Input<Schedule>),
    /// Baseline schedule of the input code, carried through every transform.
    Derived,
}

impl ScheduleSpec {
    /// Parses `seed:<n>`, `file:<path>` (loading the file) or `derived`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.split_once(':') {
            _ if s == "derived" => Ok(ScheduleSpec::Derived),
            Some(("seed", n)) => {
                n.parse().map(ScheduleSpec::Seed).map_err(|_| CliError::Usage(format!("bad schedule seed {n:?}")))
            }
            Some(("file", p)) => Input::load_schedule(Path::new(p)).map(ScheduleSpec::File),
            _ => Err(CliError::Usage(format!("bad schedule {s:?}; expected seed:<n>, file:<path> or derived"))),
        }
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleSpec::Seed(n) => write!(f, "seed:{n}"),
            ScheduleSpec::File(i) => write!(f, "file:{}", i.path),
            ScheduleSpec::Derived => f.write_str("derived"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub hx: Input<BinMatrix>,
    pub hz: Input<BinMatrix>,
    pub transforms: Vec<TransformStep>,
    pub ell: usize,
    pub heights: HeightSpec,
    /// Classical code for the balancing steps.
    pub classical: Option<Input<ClassicalCode>>,
    pub cone_threshold: usize,
    pub schedule: Option<ScheduleSpec>,
    pub seed: u64,
    pub basis: BasisSel,
    pub max_d: usize,
    /// Compute code distances of the final code.
    pub distances: bool,
    /// Compute effective distances under the schedule.
    pub fault_distances: bool,
}

impl Config {
    /// Defaults: no transforms, no schedule, nothing computed.
    #[must_use]
    pub fn new(hx: Input<BinMatrix>, hz: Input<BinMatrix>) -> Self {
        Self {
            hx,
            hz,
            transforms: Vec::new(),
            ell: DEFAULT_ELL,
            heights: HeightSpec::default(),
            classical: None,
            cone_threshold: DEFAULT_CONE_THRESHOLD,
            schedule: None,
            seed: 0,
            basis: BasisSel::Both,
            max_d: DEFAULT_MAX_D,
            distances: false,
            fault_distances: false,
        }
    }

    /// In-memory inputs, digested from their canonical text.
    #[must_use]
    pub fn from_code(q: &CssCode) -> Self {
        let wrap = |m: &BinMatrix, role: &str| Input {
            value: m.clone(),
            path: format!("<{role}>"),
            sha256: sha256_hex(write_matrix(m).as_bytes()),
        };
        Self::new(wrap(q.h_x(), "hx"), wrap(q.h_z(), "hz"))
    }
}

/// Result of [`run_pipeline`].
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: CssCode,
    pub schedule: Option<Schedule>,
}

struct PendingBalance {
    before_schedule: Option<Schedule>,
    thick: CssCode,
    map: BalanceMap,
}

struct Stage {
    code: CssCode,
    k_expected: usize,
    provenance: serde_json::Value,
    violations: Vec<String>,
    schedule: Option<Schedule>,
}

fn css_violations(q: &CssCode) -> Vec<String> {
    match q.h_x().mat_mul(&q.h_z().transpose()) {
        Ok(p) if p.is_zero() => Vec::new(),
        _ => vec!["H_X·H_Zᵀ ≠ 0".to_owned()],
    }
}

fn cone_audit(q: &CssCode, parts: &[ConeComplexPart], f: &ChainMapF) -> Vec<String> {
    let mut v: Vec<String> = parts.iter().flat_map(ConeComplexPart::audit).collect();
    if let Err(e) = f.check(q, parts) {
        v.push(e.to_string());
    }
    v
}

fn cone_provenance(parts: &[ConeComplexPart], direct: usize, threshold: usize) -> serde_json::Value {
    let lambda = match soundness_lambda(parts) {
        Ok(r) => json!(format!("{}/{}", r.numer(), r.denom())),
        Err(e) => json!({ "unknown": e.to_string() }),
    };
    json!({
        "threshold": threshold,
        "parts": parts.len(),
        "parent_z_rows": parts.iter().map(|p| p.parent_z_row).collect::<Vec<_>>(),
        "zero_cells": parts.iter().map(|p| p.zero_cells.len()).sum::<usize>(),
        "minus_one_cells": parts.iter().map(|p| p.minus_one_cells.len()).sum::<usize>(),
        "direct_z_rows": direct,
        "lambda": lambda,
    })
}

fn classical_of(cfg: &Config, step: TransformStep) -> Result<&ClassicalCode, CliError> {
    cfg.classical
        .as_ref()
        .map(|c| &c.value)
        .ok_or_else(|| CliError::Usage(format!("{} needs --classical", step.name())))
}

fn map_schedule<F>(s: &Option<Schedule>, f: F) -> Result<Option<Schedule>, CliError>
where
    F: FnOnce(&Schedule) -> qwr_core::Result<Schedule>,
{
    Ok(s.as_ref().map(f).transpose()?)
}

fn entry(
    basis: Basis,
    value: Option<Distance>,
    method: DistanceMethod,
    bound: Bound,
    note: Option<String>,
) -> DistanceEntry {
    DistanceEntry { basis, value, method, bound, note }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Applies the transforms, builds the schedule, computes the requested
/// distances and audits every step.
pub fn run_pipeline(cfg: &Config, command: &str) -> Result<Outcome, CliError> {
    if cfg.max_d == 0 {
        return Err(CliError::Usage("--max-d must be at least 1".into()));
    }
    let mut timing = BTreeMap::new();
    let input = css_from_matrices(cfg.hx.value.clone(), cfg.hz.value.clone())?;
    let derived = matches!(cfg.schedule, Some(ScheduleSpec::Derived));
    let mut code = input.clone();
    let mut schedule = derived.then(|| baseline_schedule(&input, cfg.seed));
    let mut last_copy: Option<(CssCode, CopyMap)> = None;
    let mut pending: Option<PendingBalance> = None;
    let mut last_map: Option<BalanceMap> = None;
    let mut stages = Vec::new();

    let t = Instant::now();
    for &step in &cfg.transforms {
        let before = code.clone();
        let mut next_copy = None;
        let mut next_pending = None;
        let mut next_map = None;
        let stage = match step {
            TransformStep::Copy => {
                let (c, cm) = copy_code(&before)?;
                let s = map_schedule(&schedule, |m| copied_schedule(m, &cm))?;
                let st = Stage {
                    k_expected: before.k(),
                    provenance: json!({ "copies": cm.copies, "glue_rows": cm.glue_rows.len() }),
                    violations: copy_lemma(&before, &c, &cm),
                    schedule: s,
                    code: c,
                };
                next_copy = Some((before.clone(), cm));
                st
            }
            TransformStep::Gauge => {
                let (g, gm) = gauge_code(&before)?;
                let cm = last_copy.as_ref().map(|(_, cm)| cm);
                let s = map_schedule(&schedule, |m| gauged_schedule(m, &gm, cm))?;
                let mut violations = gauge_lemma(&before, &g, &gm);
                if let Some((original, _)) = &last_copy {
                    violations.extend(copy_gauge_lemma(original, &g));
                }
                Stage {
                    k_expected: before.k(),
                    provenance: json!({
                        "split_rows": gm.split_rows.iter().filter(|r| r.len() > 1).count(),
                        "new_qubits": gm.new_qubits.iter().map(Vec::len).sum::<usize>(),
                        "after_copy": last_copy.is_some(),
                    }),
                    violations,
                    schedule: s,
                    code: g,
                }
            }
            TransformStep::Thicken | TransformStep::BalanceX | TransformStep::BalanceZ => {
                let (b, bm, k_c, rep) = match step {
                    TransformStep::Thicken => {
                        let (b, bm) = thicken(&before, cfg.ell)?;
                        (b, bm, 1, true)
                    }
                    TransformStep::BalanceX => {
                        let c = classical_of(cfg, step)?;
                        let (b, bm) = balance_x(&before, c)?;
                        (b, bm, c.k(), false)
                    }
                    _ => {
                        let c = classical_of(cfg, step)?;
                        let (b, bm) = balance_z(&before, c)?;
                        (b, bm, c.k(), false)
                    }
                };
                let s = map_schedule(&schedule, |m| balanced_schedule(m, &bm))?;
                next_pending =
                    Some(PendingBalance { before_schedule: schedule.clone(), thick: b.clone(), map: bm.clone() });
                let st = Stage {
                    k_expected: before.k() * k_c,
                    provenance: json!({ "n_c": bm.n_c, "r_c": bm.r_c, "k_c": k_c, "dual": bm.dual }),
                    violations: balance_lemma(&before, &b, &bm, k_c, rep),
                    schedule: s,
                    code: b,
                };
                next_map = Some(bm);
                st
            }
            TransformStep::Heights => {
                let p =
                    pending.take().ok_or_else(|| CliError::Usage("heights must follow thicken or balance".into()))?;
                let (heights, greedy) = match &cfg.heights {
                    HeightSpec::Greedy(w) => {
                        let h = greedy_heights(&p.thick, &p.map, *w)?;
                        (h.heights.clone(), Some(h))
                    }
                    HeightSpec::Explicit(h) => (h.clone(), None),
                };
                let (h, hm) = choose_heights(&p.thick, &p.map, &heights)?;
                let s = map_schedule(&p.before_schedule, |m| balanced_schedule(m, &hm))?;
                let mut violations = Vec::new();
                if h.q_z() > before.q_z() && !hm.dual || h.q_x() > before.q_x() && hm.dual {
                    violations.push("height selection raised the pruned column weight".to_owned());
                }
                let st = Stage {
                    k_expected: before.k(),
                    provenance: json!({
                        "heights": heights,
                        "achieved_max": greedy.as_ref().map(|g| g.achieved_max),
                        "met_target": greedy.as_ref().map(|g| g.met_target),
                    }),
                    violations,
                    schedule: s,
                    code: h,
                };
                next_map = Some(hm);
                st
            }
            TransformStep::Cone => {
                let opts = ConeOptions { threshold: cfg.cone_threshold, ..ConeOptions::default() };
                let (parts, _, direct) = build_cone_parts(&before, &opts)?;
                let parts = cellulate(&parts);
                let f = ChainMapF::from_parts(&parts);
                let c = cone_code(&before, &parts, &f)?;
                let s = map_schedule(&schedule, |m| cone_schedule(m, &before, &parts, &f))?;
                Stage {
                    k_expected: before.k(),
                    provenance: cone_provenance(&parts, direct.len(), cfg.cone_threshold),
                    violations: cone_audit(&before, &parts, &f),
                    schedule: s,
                    code: c,
                }
            }
            TransformStep::ReducedCone => {
                let opts = ConeOptions { threshold: cfg.cone_threshold, ..ConeOptions::default() };
                let rc = reduced_cone(&before, &opts, cfg.ell)?;
                let s = map_schedule(&schedule, |m| {
                    cone_schedule(m, &before, &rc.parts, &rc.f).and_then(|mc| balanced_schedule(&mc, &rc.thickened.map))
                })?;
                let out = rc.thickened.code.clone();
                let mut provenance = cone_provenance(&rc.parts, rc.direct_rows.len(), cfg.cone_threshold);
                provenance["ell"] = json!(cfg.ell);
                provenance["heights"] = json!(rc.thickened.heights.heights);
                provenance["achieved_max"] = json!(rc.thickened.heights.achieved_max);
                provenance["cone_q_x"] = json!(rc.cone.q_x());
                provenance["w_z_over_q_x"] = json!(out.w_z() as i64 - before.q_x() as i64);
                let st = Stage {
                    k_expected: before.k(),
                    provenance,
                    violations: cone_audit(&before, &rc.parts, &rc.f),
                    schedule: s,
                    code: out,
                };
                next_map = Some(rc.thickened.map);
                st
            }
        };
        let mut violations = stage.violations;
        violations.extend(css_violations(&stage.code));
        if stage.code.k() != stage.k_expected {
            violations.push(format!("k' = {} but expected {}", stage.code.k(), stage.k_expected));
        }
        stages.push(StageReport {
            transform: step.name().to_owned(),
            params: stage.code.params(),
            k_expected: stage.k_expected,
            provenance: stage.provenance,
            violations,
        });
        code = stage.code;
        schedule = stage.schedule;
        last_copy = next_copy;
        pending = next_pending;
        last_map = next_map;
    }
    timing.insert("transforms".to_owned(), ms(t));

    let mut violations: Vec<String> = stages
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.violations.iter().map(move |v| format!("stage {} ({}): {v}", i + 1, s.transform)))
        .collect();

    let t = Instant::now();
    let mut inputs = vec![
        InputDigest { role: "hx".into(), path: cfg.hx.path.clone(), sha256: cfg.hx.sha256.clone() },
        InputDigest { role: "hz".into(), path: cfg.hz.path.clone(), sha256: cfg.hz.sha256.clone() },
    ];
    if let Some(c) = &cfg.classical {
        inputs.push(InputDigest { role: "classical".into(), path: c.path.clone(), sha256: c.sha256.clone() });
    }
    let schedule = match &cfg.schedule {
        None => None,
        Some(ScheduleSpec::Derived) => schedule,
        Some(ScheduleSpec::Seed(n)) => Some(baseline_schedule(&code, *n)),
        Some(ScheduleSpec::File(f)) => {
            f.value.validate(&code).map_err(|e| CliError::Usage(format!("{}: {e}", f.path)))?;
            inputs.push(InputDigest { role: "schedule".into(), path: f.path.clone(), sha256: f.sha256.clone() });
            Some(f.value.clone())
        }
    };
    let schedule_report = match &schedule {
        None => None,
        Some(s) => {
            if let Err(e) = s.validate(&code) {
                violations.push(format!("derived schedule: {e}"));
            }
            let hook_audit = hook_weight_audit(&code, s);
            violations.extend(hook_audit.violations.iter().map(|v| format!("hook audit: {v}")));
            let component_audit = match (&last_map, derived) {
                (Some(bm), true) => {
                    let faults: Vec<_> =
                        [Basis::X, Basis::Z].into_iter().flat_map(|b| enumerate_faults_raw(&code, s, b)).collect();
                    let a = component_weight_audit(&code, bm, s, &faults)?;
                    violations.extend(a.violations.iter().map(|v| format!("component audit: {v}")));
                    Some(a)
                }
                _ => None,
            };
            let text = s.to_text();
            Some(ScheduleReport {
                source: cfg.schedule.as_ref().map(ToString::to_string).unwrap_or_default(),
                steps: s.len(),
                sha256: sha256_hex(text.as_bytes()),
                hook_audit,
                component_audit,
            })
        }
    };
    timing.insert("schedule".to_owned(), ms(t));

    let bases = cfg.basis.bases();
    let t = Instant::now();
    let distances = if cfg.distances {
        bases
            .par_iter()
            .map(|&b| match css_distance_with(&code, b, &DistanceConfig::default()) {
                Ok(o) => entry(b, Some(o.value), o.method, Bound::Exact, None),
                Err(e) => entry(b, None, DistanceMethod::Mitm, Bound::Unknown, Some(e.to_string())),
            })
            .collect()
    } else {
        Vec::new()
    };
    timing.insert("distances".to_owned(), ms(t));

    let t = Instant::now();
    let effective_distances: Vec<EffectiveReport> = match (&schedule, cfg.fault_distances) {
        (Some(s), true) => bases
            .par_iter()
            .map(|&b| {
                let generators = enumerate_faults(&code, s, b).len();
                let (distance, witness) = match effective_distance(&code, s, b, cfg.max_d) {
                    Ok(r) => {
                        let (value, bound) = match r.distance {
                            Distance::Infinite if code.k() > 0 => (Distance::Finite(cfg.max_d + 1), Bound::Lower),
                            d => (d, Bound::Exact),
                        };
                        (entry(b, Some(value), DistanceMethod::Mitm, bound, None), r.witness)
                    }
                    Err(e) => (entry(b, None, DistanceMethod::Mitm, Bound::Unknown, Some(e.to_string())), Vec::new()),
                };
                let witness_valid = witness.is_empty() || witness_is_logical(&code, b, &witness);
                EffectiveReport { distance, max_d: cfg.max_d, generators, witness, witness_valid }
            })
            .collect(),
        _ => Vec::new(),
    };
    timing.insert("effective_distances".to_owned(), ms(t));
    for e in effective_distances.iter().filter(|e| !e.witness_valid) {
        violations.push(format!("effective distance {}: witness is not a nontrivial logical", e.distance.basis));
    }

    let report = Report {
        schema: SCHEMA,
        tool: Tool::default(),
        command: command.to_owned(),
        inputs,
        settings: Settings {
            transforms: cfg.transforms.iter().map(|t| t.name().to_owned()).collect(),
            ell: cfg.ell,
            heights: cfg.heights.to_string(),
            cone_threshold: cfg.cone_threshold,
            schedule: cfg.schedule.as_ref().map(ToString::to_string),
            seed: cfg.seed,
            basis: cfg.basis.to_string(),
            max_d: cfg.max_d,
        },
        input_code: input.params(),
        stages,
        code: CodeReport {
            params: code.params(),
            hx_sha256: sha256_hex(write_matrix(code.h_x()).as_bytes()),
            hz_sha256: sha256_hex(write_matrix(code.h_z()).as_bytes()),
        },
        distances,
        schedule: schedule_report,
        effective_distances,
        audit: AuditSummary { passed: violations.is_empty(), violations },
        timing,
    };
    Ok(Outcome { report, code, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qwr_core::catalog::{steane, surface};

    #[test]
    fn spec_parsing() {
        assert_eq!("greedy:3".parse::<HeightSpec>().unwrap(), HeightSpec::Greedy(3));
        assert_eq!("explicit:1,2".parse::<HeightSpec>().unwrap(), HeightSpec::Explicit(vec![1, 2]));
        assert!("tall".parse::<HeightSpec>().is_err());
        assert_eq!("reduced-cone".parse::<TransformStep>().unwrap(), TransformStep::ReducedCone);
        assert!("fold".parse::<TransformStep>().is_err());
        assert!(matches!(ScheduleSpec::parse("seed:4").unwrap(), ScheduleSpec::Seed(4)));
        assert!(ScheduleSpec::parse("seed:x").is_err());
        assert!(ScheduleSpec::parse("file:/nonexistent/schedule.txt").is_err());
        assert_eq!("both".parse::<BasisSel>().unwrap().bases(), vec![Basis::X, Basis::Z]);
    }

    #[test]
    fn steane_info() {
        let out = run_pipeline(&Config::from_code(&steane()), "info").unwrap();
        let p = out.report.code.params;
        assert_eq!((p.n, p.k, p.w_x, p.q_x), (7, 1, 4, 3));
        assert!(out.report.audit.passed);
    }

    #[test]
    fn copy_gauge_derived() {
        let mut cfg = Config::from_code(&steane());
        cfg.transforms = vec![TransformStep::Copy, TransformStep::Gauge];
        cfg.schedule = Some(ScheduleSpec::Derived);
        cfg.fault_distances = true;
        cfg.max_d = 4;
        let out = run_pipeline(&cfg, "run").unwrap();
        assert!(out.report.audit.passed, "{:?}", out.report.audit.violations);
        assert!(out.code.w_x() <= 3 && out.code.q_x() <= 3);
        assert_eq!(out.code.k(), 1);
        let [x, z] = &out.report.effective_distances[..] else { panic!("two bases") };
        assert!(x.witness_valid);
        let d_x = qwr_core::css_distance(&out.code, Basis::X).unwrap();
        assert_eq!((x.distance.value, x.distance.bound), (Some(d_x), Bound::Exact));
        // copying multiplies d_Z by q_X = 3
        assert_eq!((z.distance.value, z.distance.bound), (Some(Distance::Finite(5)), Bound::Lower));
    }

    #[test]
    fn thicken_heights_derived() {
        let mut cfg = Config::from_code(&surface(2).unwrap());
        cfg.transforms = vec![TransformStep::Thicken, TransformStep::Heights];
        cfg.ell = 3;
        cfg.schedule = Some(ScheduleSpec::Derived);
        let out = run_pipeline(&cfg, "run").unwrap();
        assert!(out.report.audit.passed, "{:?}", out.report.audit.violations);
        assert!(out.report.schedule.unwrap().component_audit.is_some());
    }

    #[test]
    fn heights_need_a_balance() {
        let mut cfg = Config::from_code(&steane());
        cfg.transforms = vec![TransformStep::Heights];
        assert!(matches!(run_pipeline(&cfg, "run"), Err(CliError::Usage(_))));
        cfg.transforms = vec![TransformStep::BalanceX];
        assert!(matches!(run_pipeline(&cfg, "run"), Err(CliError::Usage(_))));
    }

    #[test]
    fn lower_bound_when_search_stops() {
        let mut cfg = Config::from_code(&surface(3).unwrap());
        cfg.schedule = Some(ScheduleSpec::Seed(0));
        cfg.fault_distances = true;
        cfg.max_d = 2;
        let out = run_pipeline(&cfg, "faultdist").unwrap();
        for e in &out.report.effective_distances {
            assert_eq!(e.distance.value, Some(Distance::Finite(3)));
            assert_eq!(e.distance.bound, Bound::Lower);
        }
    }
}
