//! JSON report. Everything except the `timing` object is a pure function of
//! the inputs and flags.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use qwr_core::codes::{CodeParams, DistanceMethod};
use qwr_core::faultdist::{ComponentAudit, FaultGenerator, HookAudit};
use qwr_core::{Basis, Distance};

pub const SCHEMA: u32 = 1;

#[must_use]
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: Tool,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub settings: Settings,
    pub input_code: CodeParams,
    pub stages: Vec<StageReport>,
    pub code: CodeReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub distances: Vec<DistanceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub effective_distances: Vec<EffectiveReport>,
    pub audit: AuditSummary,
    pub timing: BTreeMap<String, f64>,
}

impl Report {
    /// Pretty JSON with a trailing newline.
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self { name: "qwr", version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub transforms: Vec<String>,
    pub ell: usize,
    pub heights: String,
    pub cone_threshold: usize,
    pub schedule: Option<String>,
    pub seed: u64,
    pub basis: String,
    pub max_d: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub transform: String,
    pub params: CodeParams,
    pub k_expected: usize,
    pub provenance: serde_json::Value,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub params: CodeParams,
    pub hx_sha256: String,
    pub hz_sha256: String,
}

/// How far a reported value can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    /// The true value is at least `value`.
    Lower,
    /// No value: a search cap was hit.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceEntry {
    pub basis: Basis,
    /// A count or `"inf"`; null when unknown.
    pub value: Option<Distance>,
    pub method: DistanceMethod,
    pub bound: Bound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScheduleReport {
    pub source: String,
    pub steps: usize,
    pub sha256: String,
    pub hook_audit: HookAudit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_audit: Option<ComponentAudit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EffectiveReport {
    #[serde(flatten)]
    pub distance: DistanceEntry,
    pub max_d: usize,
    pub generators: usize,
    pub witness: Vec<FaultGenerator>,
    pub witness_valid: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AuditSummary {
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Drops the `timing` object so two reports can be compared.
#[must_use]
pub fn without_timing(json: &str) -> Option<serde_json::Value> {
    let mut v: serde_json::Value = serde_json::from_str(json).ok()?;
    v.as_object_mut()?.remove("timing");
    Some(v)
}
