//! Machine-readable report documents and their JSON/CSV renderings.
//!
//! Every invocation emits exactly one document. JSON documents carry the
//! schema version, the command, its parameters and a structured results
//! payload; CSV tables carry the schema version as their first column so
//! the file stays self-describing. Floats are rendered in shortest
//! round-trip form in both formats, so the numeric values are identical.

use serde::Serialize;
use serde_json::{Map, Value};
use wfuse::strategy::{CostResult, McStats};
use wfuse::{FusionReport, InputCase, Rational64};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// The envelope of every JSON report.
#[derive(Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub results: T,
}

impl<T: Serialize> Document<T> {
    pub fn new(command: &'static str, parameters: Map<String, Value>, results: T) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            command,
            parameters,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }
}

pub fn render_csv<R: Serialize>(rows: &[R]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("row serializes");
    }
    let bytes = writer.into_inner().expect("csv flush");
    String::from_utf8(bytes).expect("csv is utf-8")
}

fn ratio_text(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize)]
pub struct FuseSummaryRow {
    pub schema_version: &'static str,
    pub gate: String,
    pub n: usize,
    pub m: usize,
    pub fused_size: usize,
    pub p_success: f64,
    pub p_recycle: f64,
    pub p_failure: f64,
    pub p_success_exact: String,
    pub p_recycle_exact: String,
    pub p_failure_exact: String,
    pub success_fidelity: f64,
}

impl FuseSummaryRow {
    pub fn from_report(report: &FusionReport) -> Self {
        FuseSummaryRow {
            schema_version: SCHEMA_VERSION,
            gate: report.gate.to_string(),
            n: report.n,
            m: report.m,
            fused_size: report.fused_size,
            p_success: report.p_success,
            p_recycle: report.p_recycle,
            p_failure: report.p_failure,
            p_success_exact: ratio_text(report.p_success_exact),
            p_recycle_exact: ratio_text(report.p_recycle_exact),
            p_failure_exact: ratio_text(report.p_failure_exact),
            success_fidelity: report.success_fidelity,
        }
    }
}

#[derive(Serialize)]
pub struct BranchRow {
    pub schema_version: &'static str,
    pub gate: String,
    pub n: usize,
    pub m: usize,
    pub d1: u8,
    pub d2: u8,
    pub outcome_mode1: String,
    pub outcome_mode2: String,
    pub class: String,
    pub probability: f64,
    pub probability_exact: String,
    pub needs_correction: bool,
    pub target_fidelity: Option<f64>,
}

impl BranchRow {
    pub fn from_report(report: &FusionReport) -> Vec<Self> {
        report
            .branches
            .iter()
            .map(|branch| BranchRow {
                schema_version: SCHEMA_VERSION,
                gate: report.gate.to_string(),
                n: report.n,
                m: report.m,
                d1: branch.occupancy.d1,
                d2: branch.occupancy.d2,
                outcome_mode1: branch.diag_results[0].outcome.to_string(),
                outcome_mode2: branch.diag_results[1].outcome.to_string(),
                class: branch.class.to_string(),
                probability: branch.probability,
                probability_exact: ratio_text(branch.probability_exact),
                needs_correction: branch.needs_correction,
                target_fidelity: branch.target_fidelity,
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct TableRow {
    pub schema_version: &'static str,
    pub gate: String,
    pub n: usize,
    pub m: usize,
    pub input_mode1: String,
    pub input_mode2: String,
    pub probability: f64,
    pub probability_exact: String,
    pub class: String,
}

impl TableRow {
    pub fn from_cases(
        gate: wfuse::GateKind,
        n: usize,
        m: usize,
        cases: &[InputCase],
    ) -> Vec<Self> {
        cases
            .iter()
            .map(|case| TableRow {
                schema_version: SCHEMA_VERSION,
                gate: gate.to_string(),
                n,
                m,
                input_mode1: case.pattern.0.to_string(),
                input_mode2: case.pattern.1.to_string(),
                probability: case.probability,
                probability_exact: ratio_text(case.probability_exact),
                class: case.class.to_string(),
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct SweepRow {
    pub schema_version: &'static str,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_success_sim: Option<f64>,
    pub p_success_closed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_success_fidelity: Option<f64>,
}

/// CSV needs uniform columns, so sweeps always render every field and use
/// empty cells for the closed-form-only mode.
#[derive(Serialize)]
pub struct SweepCsvRow {
    pub schema_version: &'static str,
    pub n: usize,
    pub m: usize,
    pub p_success_sim: Option<f64>,
    pub p_success_closed: f64,
    pub abs_difference: Option<f64>,
    pub min_success_fidelity: Option<f64>,
}

impl From<&SweepRow> for SweepCsvRow {
    fn from(row: &SweepRow) -> Self {
        SweepCsvRow {
            schema_version: row.schema_version,
            n: row.n,
            m: row.m,
            p_success_sim: row.p_success_sim,
            p_success_closed: row.p_success_closed,
            abs_difference: row.abs_difference,
            min_success_fidelity: row.min_success_fidelity,
        }
    }
}

/// Monte Carlo block of a cost report: the sampled statistics plus the
/// analytic-versus-empirical discrepancies in standard errors.
#[derive(Serialize)]
pub struct McReport {
    pub trials: u64,
    pub seed: u64,
    pub stats: McStats,
    pub z_bell_pairs: Option<f64>,
    pub z_ancillas: Option<f64>,
    pub z_attempts: Option<f64>,
    pub z_cost_units: Option<f64>,
}

/// Discrepancy between the sampled mean and the analytic expectation in
/// standard errors of the mean.
pub fn z_score(mean: f64, var: f64, trials: u64, expected: f64) -> Option<f64> {
    if !expected.is_finite() {
        return None;
    }
    let se = (var / trials as f64).sqrt();
    if se == 0.0 {
        return (mean == expected).then_some(0.0);
    }
    Some((mean - expected) / se)
}

#[derive(Serialize)]
pub struct CostResults {
    pub cost: CostResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<McReport>,
}

#[derive(Serialize)]
pub struct CostRow {
    pub schema_version: &'static str,
    pub target: usize,
    pub gate: String,
    pub policy: String,
    pub strategy: String,
    pub bell_pair_cost: f64,
    pub ancilla_cost: f64,
    pub expected_bell_pairs: f64,
    pub expected_ancillas: f64,
    pub expected_attempts: f64,
    pub expected_cost_units: f64,
    pub reachable: bool,
    pub mc_trials: Option<u64>,
    pub mc_seed: Option<u64>,
    pub mc_success_rate: Option<f64>,
    pub mc_mean_bell_pairs: Option<f64>,
    pub mc_mean_ancillas: Option<f64>,
    pub mc_mean_attempts: Option<f64>,
    pub mc_mean_cost_units: Option<f64>,
    pub mc_halfwidth_95: Option<f64>,
    pub z_cost_units: Option<f64>,
}

impl CostRow {
    pub fn new(
        cost: &CostResult,
        bell_pair_cost: f64,
        ancilla_cost: f64,
        mc: Option<&McReport>,
    ) -> Self {
        CostRow {
            schema_version: SCHEMA_VERSION,
            target: cost.target_size,
            gate: cost.gate.to_string(),
            policy: cost.recycle_policy.to_string(),
            strategy: cost.strategy_name.clone(),
            bell_pair_cost,
            ancilla_cost,
            expected_bell_pairs: cost.expected_bell_pairs,
            expected_ancillas: cost.expected_ancillas,
            expected_attempts: cost.expected_attempts,
            expected_cost_units: cost.expected_cost_units,
            reachable: cost.reachable,
            mc_trials: mc.map(|m| m.trials),
            mc_seed: mc.map(|m| m.seed),
            mc_success_rate: mc.map(|m| m.stats.success_rate),
            mc_mean_bell_pairs: mc.map(|m| m.stats.mean_bell_pairs),
            mc_mean_ancillas: mc.map(|m| m.stats.mean_ancillas),
            mc_mean_attempts: mc.map(|m| m.stats.mean_attempts),
            mc_mean_cost_units: mc.map(|m| m.stats.mean_cost_units),
            mc_halfwidth_95: mc.map(|m| m.stats.confidence_halfwidth_95),
            z_cost_units: mc.and_then(|m| m.z_cost_units),
        }
    }
}
