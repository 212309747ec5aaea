//! Command-line front end for the W-state fusion simulator: single
//! fusions, the four-case input tables, (n, m) sweeps and cost analyses,
//! emitted as machine-readable JSON or CSV.

mod report;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map};

use report::{
    render_csv, z_score, BranchRow, CostResults, CostRow, Document, FuseSummaryRow, McReport,
    OutputFormat, SweepCsvRow, SweepRow, TableRow,
};
use wfuse::strategy::{
    expected_cost, monte_carlo_growth, p_fg, p_fgf, CostModel, PairingPolicy, RecyclePolicy,
};
use wfuse::{enumerate_input_cases, fuse, GateKind};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

/// Largest W-state size the exact branch enumeration accepts.
const MAX_EXACT_SIZE: usize = 12;
/// Largest size in closed-form-only sweeps.
const MAX_CLOSED_FORM_SIZE: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "wfuse",
    version = VERSION,
    about = "Exact simulator and cost analyzer for W-state fusion gates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GateArg {
    Fg,
    Fgf,
}

impl From<GateArg> for GateKind {
    fn from(arg: GateArg) -> Self {
        match arg {
            GateArg::Fg => GateKind::Fg,
            GateArg::Fgf => GateKind::Fgf,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Discard,
    Reuse,
}

impl From<PolicyArg> for RecyclePolicy {
    fn from(arg: PolicyArg) -> Self {
        match arg {
            PolicyArg::Discard => RecyclePolicy::Discard,
            PolicyArg::Reuse => RecyclePolicy::Reuse,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    BalancedTree,
    Incremental,
}

impl From<StrategyArg> for PairingPolicy {
    fn from(arg: StrategyArg) -> Self {
        match arg {
            StrategyArg::BalancedTree => PairingPolicy::BalancedTree,
            StrategyArg::Incremental => PairingPolicy::Incremental,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Inclusive size range written as `start..end`.
#[derive(Debug, Clone, Copy)]
struct SizeRange {
    start: usize,
    end: usize,
}

impl SizeRange {
    fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (start, end) = s
            .split_once("..")
            .ok_or_else(|| format!("expected an inclusive range like 2..8, got '{s}'"))?;
        let start = start
            .parse()
            .map_err(|_| format!("bad range start '{start}'"))?;
        let end = end.parse().map_err(|_| format!("bad range end '{end}'"))?;
        if start > end {
            return Err(format!("range start {start} exceeds end {end}"));
        }
        Ok(SizeRange { start, end })
    }
}

impl fmt::Display for SizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one fusion and report class probabilities and fidelities
    Fuse {
        /// Size of Alice's W state
        #[arg(long)]
        n: usize,
        /// Size of Bob's W state
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        gate: GateArg,
        /// Emit a JSON document (the default)
        #[arg(long)]
        json: bool,
        /// Emit a CSV table instead of JSON
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Include every detection branch in the output
        #[arg(long)]
        branches: bool,
    },
    /// Print the four-case input table for one gate and input sizes
    Table {
        #[arg(long, value_enum)]
        gate: GateArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Write simulated-versus-closed-form success probabilities over a grid
    Sweep {
        #[arg(long, value_enum)]
        gate: GateArg,
        /// Inclusive range of Alice sizes, e.g. 2..8
        #[arg(long, value_name = "A..B")]
        n_range: SizeRange,
        /// Inclusive range of Bob sizes, e.g. 2..8
        #[arg(long, value_name = "A..B")]
        m_range: SizeRange,
        /// Output file path
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Skip the simulation and emit closed forms only (larger ranges)
        #[arg(long)]
        closed_form_only: bool,
    },
    /// Expected resources to grow a target W state, optionally cross-checked
    /// by Monte Carlo sampling
    Cost {
        /// Target W-state size
        #[arg(long)]
        target: usize,
        #[arg(long, value_enum)]
        gate: GateArg,
        /// Recycle policy
        #[arg(long, value_enum, default_value = "discard")]
        policy: PolicyArg,
        /// Pairing strategy
        #[arg(long, value_enum, default_value = "balanced-tree")]
        strategy: StrategyArg,
        /// Cost of one ancilla photon in Bell-pair units
        #[arg(long, default_value_t = 0.1)]
        ancilla_cost: f64,
        /// Cross-check with this many sampled growth runs
        #[arg(long, value_name = "TRIALS")]
        mc: Option<u64>,
        /// Seed for the sampled runs (fixed default keeps runs reproducible)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] wfuse::Error),
    #[error("{0}")]
    Validation(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn format_of(json: bool, csv: bool) -> OutputFormat {
    let _ = json; // JSON is the default; the flag exists for symmetry.
    if csv {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    }
}

fn check_exact_size(what: &str, value: usize) -> Result<(), CliError> {
    if value > MAX_EXACT_SIZE {
        return Err(CliError::Validation(format!(
            "{what} {value} exceeds the exact-simulation maximum {MAX_EXACT_SIZE}"
        )));
    }
    Ok(())
}

fn run_fuse(
    n: usize,
    m: usize,
    gate: GateKind,
    format: OutputFormat,
    branches: bool,
) -> Result<String, CliError> {
    check_exact_size("input size", n)?;
    check_exact_size("input size", m)?;
    let report = fuse(n, m, gate)?;
    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(n));
    parameters.insert("m".into(), json!(m));
    parameters.insert("gate".into(), json!(gate.to_string()));
    parameters.insert("branches".into(), json!(branches));
    match format {
        OutputFormat::Json => {
            let results = if branches {
                serde_json::to_value(&report).expect("report serializes")
            } else {
                let mut value = serde_json::to_value(&report).expect("report serializes");
                value.as_object_mut().expect("object").remove("branches");
                value
            };
            Ok(Document::new("fuse", parameters, results).to_json())
        }
        OutputFormat::Csv => {
            if branches {
                Ok(render_csv(&BranchRow::from_report(&report)))
            } else {
                Ok(render_csv(&[FuseSummaryRow::from_report(&report)]))
            }
        }
    }
}

fn run_table(n: usize, m: usize, gate: GateKind, format: OutputFormat) -> Result<String, CliError> {
    check_exact_size("input size", n)?;
    check_exact_size("input size", m)?;
    let cases = enumerate_input_cases(n, m, gate)?;
    let rows = TableRow::from_cases(gate, n, m, &cases);
    match format {
        OutputFormat::Json => {
            let mut parameters = Map::new();
            parameters.insert("n".into(), json!(n));
            parameters.insert("m".into(), json!(m));
            parameters.insert("gate".into(), json!(gate.to_string()));
            Ok(Document::new("table", parameters, json!({ "rows": rows })).to_json())
        }
        OutputFormat::Csv => Ok(render_csv(&rows)),
    }
}

fn closed_form(n: usize, m: usize, gate: GateKind) -> Result<f64, CliError> {
    let exact = match gate {
        GateKind::Fg => p_fg(n, m)?,
        GateKind::Fgf => p_fgf(n, m)?,
    };
    Ok(*exact.numer() as f64 / *exact.denom() as f64)
}

fn run_sweep(
    gate: GateKind,
    n_range: SizeRange,
    m_range: SizeRange,
    out: PathBuf,
    format: FormatArg,
    closed_form_only: bool,
) -> Result<String, CliError> {
    let max = if closed_form_only {
        MAX_CLOSED_FORM_SIZE
    } else {
        MAX_EXACT_SIZE
    };
    for range in [n_range, m_range] {
        if range.start < 2 {
            return Err(CliError::Validation(format!(
                "sweep sizes start at 2 (got {})",
                range.start
            )));
        }
        if range.end > max {
            return Err(CliError::Validation(format!(
                "sweep size {} exceeds the maximum {max} for this mode",
                range.end
            )));
        }
    }

    let mut rows = Vec::new();
    for n in n_range.iter() {
        for m in m_range.iter() {
            let p_closed = closed_form(n, m, gate)?;
            let row = if closed_form_only {
                SweepRow {
                    schema_version: report::SCHEMA_VERSION,
                    n,
                    m,
                    p_success_sim: None,
                    p_success_closed: p_closed,
                    abs_difference: None,
                    min_success_fidelity: None,
                }
            } else {
                let report = fuse(n, m, gate)?;
                SweepRow {
                    schema_version: report::SCHEMA_VERSION,
                    n,
                    m,
                    p_success_sim: Some(report.p_success),
                    p_success_closed: p_closed,
                    abs_difference: Some((report.p_success - p_closed).abs()),
                    min_success_fidelity: Some(report.success_fidelity),
                }
            };
            rows.push(row);
        }
    }

    let mut parameters = Map::new();
    parameters.insert("gate".into(), json!(gate.to_string()));
    parameters.insert("n_range".into(), json!(n_range.to_string()));
    parameters.insert("m_range".into(), json!(m_range.to_string()));
    parameters.insert("closed_form_only".into(), json!(closed_form_only));
    parameters.insert("output".into(), json!(out.display().to_string()));

    let file_contents = match format {
        FormatArg::Csv => {
            let csv_rows: Vec<SweepCsvRow> = rows.iter().map(SweepCsvRow::from).collect();
            render_csv(&csv_rows)
        }
        FormatArg::Json => Document::new("sweep", parameters.clone(), json!({ "rows": rows }))
            .to_json(),
    };
    std::fs::write(&out, file_contents).map_err(|source| CliError::Write {
        path: out.clone(),
        source,
    })?;

    let summary = json!({ "rows_written": rows.len(), "output": out.display().to_string() });
    Ok(Document::new("sweep", parameters, summary).to_json())
}

#[allow(clippy::too_many_arguments)]
fn run_cost(
    target: usize,
    gate: GateKind,
    policy: RecyclePolicy,
    strategy: PairingPolicy,
    ancilla_cost: f64,
    mc: Option<u64>,
    seed: u64,
    format: OutputFormat,
) -> Result<String, CliError> {
    let model = CostModel::new(policy, 1.0, ancilla_cost)?;
    let cost = expected_cost(target, gate, &model, strategy)?;

    let monte_carlo = match mc {
        None => None,
        Some(trials) => {
            let stats = monte_carlo_growth(target, gate, &model, strategy, trials, seed)?;
            let t = stats.trials;
            Some(McReport {
                trials,
                seed,
                z_bell_pairs: z_score(
                    stats.mean_bell_pairs,
                    stats.var_bell_pairs,
                    t,
                    cost.expected_bell_pairs,
                ),
                z_ancillas: z_score(
                    stats.mean_ancillas,
                    stats.var_ancillas,
                    t,
                    cost.expected_ancillas,
                ),
                z_attempts: z_score(
                    stats.mean_attempts,
                    stats.var_attempts,
                    t,
                    cost.expected_attempts,
                ),
                z_cost_units: z_score(
                    stats.mean_cost_units,
                    stats.var_cost_units,
                    t,
                    cost.expected_cost_units,
                ),
                stats,
            })
        }
    };

    let mut parameters = Map::new();
    parameters.insert("target".into(), json!(target));
    parameters.insert("gate".into(), json!(gate.to_string()));
    parameters.insert("policy".into(), json!(policy.to_string()));
    parameters.insert("strategy".into(), json!(strategy.to_string()));
    parameters.insert("bell_pair_cost".into(), json!(1.0));
    parameters.insert("ancilla_cost".into(), json!(ancilla_cost));
    if let Some(trials) = mc {
        parameters.insert("mc_trials".into(), json!(trials));
        parameters.insert("seed".into(), json!(seed));
    }

    match format {
        OutputFormat::Json => {
            let results = CostResults { cost, monte_carlo };
            Ok(Document::new("cost", parameters, results).to_json())
        }
        OutputFormat::Csv => Ok(render_csv(&[CostRow::new(
            &cost,
            1.0,
            ancilla_cost,
            monte_carlo.as_ref(),
        )])),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Fuse {
            n,
            m,
            gate,
            json,
            csv,
            branches,
        } => run_fuse(n, m, gate.into(), format_of(json, csv), branches),
        Command::Table { gate, n, m, json, csv } => {
            run_table(n, m, gate.into(), format_of(json, csv))
        }
        Command::Sweep {
            gate,
            n_range,
            m_range,
            out,
            format,
            closed_form_only,
        } => run_sweep(gate.into(), n_range, m_range, out, format, closed_form_only),
        Command::Cost {
            target,
            gate,
            policy,
            strategy,
            ancilla_cost,
            mc,
            seed,
            json,
            csv,
        } => run_cost(
            target,
            gate.into(),
            policy.into(),
            strategy.into(),
            ancilla_cost,
            mc,
            seed,
            format_of(json, csv),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
