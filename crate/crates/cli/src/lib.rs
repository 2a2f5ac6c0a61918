//! Library side of the `ree` binary: argument model, state loading and the
//! five commands. `main` only parses arguments and maps errors to exit codes.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use ree_core::io::{load_state_file, StateFile};
use ree_core::rng::{derive_seed, random_mixed_state, rng_from_seed};
use ree_core::{
    haar_random_pure, mregs_decompose, named_state, nparty_bounds, relative_entropy_of_entanglement,
    verify_inequality_bi, verify_inequality_tri, BoundsReport, NamedState, OptimizerConfig, PartyStructure,
    SeparableEnsemble,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INEQUALITY: u8 = 2;

/// Slack allowed on top of the optimizer's gap estimate when checking bounds.
pub const BOUND_TOLERANCE: f64 = 5e-3;
/// The chain inequalities must hold to this precision.
pub const INEQUALITY_TOLERANCE: f64 = 1e-8;
/// Restart multiplier used to re-check a scan sample that looks like a violation.
pub const RERUN_RESTART_FACTOR: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "ree", version, about = "Relative entropy of entanglement over fully separable states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// epr, ghz:<alpha>, w, psieff:<e>,<f> or file:<path>
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Number of random samples (scan, verify)
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long = "ensemble-size", global = true)]
    pub ensemble_size: Option<usize>,
    /// Value tolerance of the optimizer, in bits
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// REE of one state
    Compute,
    /// Entropic bounds and the REE estimate for a pure state on three or more parties
    Bounds,
    /// Bounds on Haar-random three-qubit states, with a summary
    Scan,
    /// Chain inequalities on random (state, separable state) pairs
    Verify,
    /// GHZ/singlet decomposition of a tripartite pure state
    Mregs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<ree_core::Error> for InputError {
    fn from(e: ree_core::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        Self(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Named(NamedState),
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("file:") {
            Some("") => Err(InputError("file: needs a path".into())),
            Some(path) => Ok(Self::File(PathBuf::from(path))),
            None => Ok(Self::Named(s.parse()?)),
        }
    }
}

impl StateSpec {
    pub fn load(&self) -> Result<StateFile> {
        match self {
            Self::Named(n) => Ok(StateFile::Pure(named_state(n)?)),
            Self::File(p) => Ok(load_state_file(p)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<StateSpec>,
    /// The state argument as given, used as the report label.
    pub label: String,
    pub optimizer: OptimizerConfig,
    pub samples: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let mut optimizer = OptimizerConfig::default().with_seed(cli.seed);
        if let Some(r) = cli.restarts {
            optimizer.restarts = r;
        }
        optimizer.ensemble_size = cli.ensemble_size.or(optimizer.ensemble_size);
        if let Some(t) = cli.tolerance {
            optimizer.value_tolerance = t;
        }
        optimizer.validate()?;

        let needs_state = matches!(cli.command, Command::Compute | Command::Bounds | Command::Mregs);
        let input = match (&cli.state, needs_state) {
            (Some(s), true) => Some(s.parse::<StateSpec>()?),
            (None, true) => return Err(InputError("--state is required for this command".into())),
            (Some(_), false) => return Err(InputError("--state is not used by scan or verify".into())),
            (None, false) => None,
        };
        if !needs_state {
            match cli.samples {
                Some(n) if n >= 1 => {}
                _ => return Err(InputError("--samples must be given and at least 1".into())),
            }
        }
        Ok(Self {
            command: cli.command,
            input,
            label: cli.state.unwrap_or_default(),
            optimizer,
            samples: cli.samples,
            seed: cli.seed,
            format: cli.format,
            output: cli.output,
        })
    }

    fn state(&self) -> Result<StateFile> {
        self.input
            .as_ref()
            .ok_or_else(|| InputError("no input state".into()))?
            .load()
    }

    /// Writes the report to `--output` or standard output.
    pub fn emit(&self, body: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, body).map_err(|e| InputError(format!("{}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub exit_code: u8,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Compute => compute(cfg),
        Command::Bounds => bounds(cfg),
        Command::Mregs => mregs(cfg),
        Command::Scan => {
            let report = scan(cfg.samples.unwrap_or(0), cfg.seed, &cfg.optimizer)?;
            let failed = !report.summary.sandwich_violations.is_empty()
                || !report.summary.conjecture_violations.is_empty();
            let body = match cfg.format {
                Format::Json => to_json(&report),
                Format::Csv => [csv_rows(&report.rows)?, csv_key_values(&report.summary)?].join("\n"),
            };
            Ok(Outcome { body, exit_code: if failed { EXIT_INEQUALITY } else { EXIT_OK } })
        }
        Command::Verify => {
            let summary = verify(cfg.samples.unwrap_or(0), cfg.seed)?;
            let body = match cfg.format {
                Format::Json => to_json(&summary),
                Format::Csv => csv_key_values(&summary)?,
            };
            let failed = summary.violations_bi + summary.violations_tri > 0;
            Ok(Outcome { body, exit_code: if failed { EXIT_INEQUALITY } else { EXIT_OK } })
        }
    }
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_error(e: impl fmt::Display) -> InputError {
    InputError(format!("csv output: {e}"))
}

fn csv_rows<S: Serialize>(rows: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

/// A two-column `field,value` table from a flat struct; lists are joined with `;`.
fn csv_key_values<S: Serialize>(value: &S) -> Result<String> {
    let Value::Object(map) = serde_json::to_value(value).map_err(csv_error)? else {
        return Err(csv_error("expected an object"));
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).map_err(csv_error)?;
    for (k, v) in map {
        let text = match v {
            Value::Array(items) => items.iter().map(Value::to_string).collect::<Vec<_>>().join(";"),
            Value::String(s) => s,
            other => other.to_string(),
        };
        w.write_record([k, text]).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

#[derive(Debug, Clone, Serialize)]
struct ComputeReport {
    state_label: String,
    value: f64,
    gap_estimate: f64,
    iterations_used: usize,
    restarts_agreeing: usize,
    support_floor: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TermRow {
    term: usize,
    weight: f64,
    party: usize,
    component: usize,
    re: f64,
    im: f64,
}

/// Fewer terms than the dimension can keep the optimizer from representing
/// the closest separable state.
fn warn_small_ensemble(cfg: &RunConfig, dim: usize) {
    if let Some(k) = cfg.optimizer.ensemble_size.filter(|&k| k < dim) {
        eprintln!("warning: --ensemble-size {k} is below the state dimension {dim}");
    }
}

fn compute(cfg: &RunConfig) -> Result<Outcome> {
    let sigma = cfg.state()?.density();
    warn_small_ensemble(cfg, sigma.dim());
    let r = relative_entropy_of_entanglement(&sigma, &cfg.optimizer)?;
    let report = ComputeReport {
        state_label: cfg.label.clone(),
        value: r.value,
        gap_estimate: r.gap_estimate,
        iterations_used: r.iterations_used,
        restarts_agreeing: r.restarts_agreeing,
        support_floor: r.support_floor,
    };
    let body = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(csv_error)?;
            v["closest"] = r.closest.to_json();
            to_json(&v)
        }
        Format::Csv => {
            let mut terms = Vec::new();
            for (k, t) in r.closest.terms().iter().enumerate() {
                for (p, f) in t.factors.iter().enumerate() {
                    for (c, z) in f.iter().enumerate() {
                        terms.push(TermRow { term: k, weight: t.weight, party: p, component: c, re: z.re, im: z.im });
                    }
                }
            }
            [csv_rows(&[report])?, csv_rows(&terms)?].join("\n")
        }
    };
    Ok(Outcome { body, exit_code: EXIT_OK })
}

/// True when the REE estimate falls outside either sandwich by more than
/// the optimizer gap plus [`BOUND_TOLERANCE`].
pub fn sandwich_violated(r: &BoundsReport) -> bool {
    let tol = r.gap_estimate + BOUND_TOLERANCE;
    r.e3_estimate < r.lower_thm1 - tol
        || r.e3_estimate > r.upper_thm1 + tol
        || r.e3_estimate < r.corollary_lower - tol
        || r.e3_estimate > r.corollary_upper + tol
}

pub fn conjecture_violated(r: &BoundsReport) -> bool {
    r.e3_estimate > r.conjecture_half_sum + r.gap_estimate + BOUND_TOLERANCE
}

fn bounds(cfg: &RunConfig) -> Result<Outcome> {
    let psi = cfg.state()?.pure()?;
    warn_small_ensemble(cfg, psi.structure().total_dim());
    let report = nparty_bounds(&psi, &cfg.optimizer)?.with_label(cfg.label.clone());
    let body = match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_rows(&[&report])?,
    };
    let code = if sandwich_violated(&report) { EXIT_INEQUALITY } else { EXIT_OK };
    Ok(Outcome { body, exit_code: code })
}

fn mregs(cfg: &RunConfig) -> Result<Outcome> {
    let psi = cfg.state()?.pure()?;
    warn_small_ensemble(cfg, psi.structure().total_dim());
    let m = mregs_decompose(&psi, &cfg.optimizer)?;
    let body = match cfg.format {
        Format::Json => to_json(&m),
        Format::Csv => csv_rows(&[&m])?,
    };
    Ok(Outcome { body, exit_code: EXIT_OK })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub samples: usize,
    pub seed: u64,
    pub min_slack_lower: f64,
    pub min_slack_upper: f64,
    /// min over samples of ½ΣS − E₃.
    pub min_conjecture_slack: f64,
    pub max_gap_estimate: f64,
    /// Samples recomputed with more restarts because they looked like violations.
    pub rerun: Vec<usize>,
    pub sandwich_violations: Vec<usize>,
    pub conjecture_violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<BoundsReport>,
    pub summary: ScanSummary,
}

/// The state and optimizer seed of scan sample `index`.
pub fn scan_sample_seeds(seed: u64, index: usize) -> (u64, u64) {
    let state_seed = derive_seed(seed, index as u64);
    (state_seed, derive_seed(state_seed, 0))
}

/// Bounds for one Haar-random three-qubit sample; reproducible on its own.
pub fn scan_sample(seed: u64, index: usize, optimizer: &OptimizerConfig) -> Result<(BoundsReport, bool)> {
    let (state_seed, opt_seed) = scan_sample_seeds(seed, index);
    let psi = haar_random_pure::<f64>(&PartyStructure::qubits(3)?, state_seed);
    let cfg = optimizer.with_seed(opt_seed);
    let label = format!("haar:{index}");
    let mut report = nparty_bounds(&psi, &cfg)?.with_label(label.clone());
    let suspicious = sandwich_violated(&report) || conjecture_violated(&report);
    if suspicious {
        let more = cfg.with_restarts(cfg.restarts * RERUN_RESTART_FACTOR);
        report = nparty_bounds(&psi, &more)?.with_label(label);
    }
    Ok((report, suspicious))
}

pub fn scan(samples: usize, seed: u64, optimizer: &OptimizerConfig) -> Result<ScanReport> {
    let mut rows = Vec::with_capacity(samples);
    let mut summary = ScanSummary {
        samples,
        seed,
        min_slack_lower: f64::INFINITY,
        min_slack_upper: f64::INFINITY,
        min_conjecture_slack: f64::INFINITY,
        max_gap_estimate: 0.0,
        rerun: vec![],
        sandwich_violations: vec![],
        conjecture_violations: vec![],
    };
    for i in 0..samples {
        let (r, rerun) = scan_sample(seed, i, optimizer)?;
        summary.min_slack_lower = summary.min_slack_lower.min(r.slack_lower);
        summary.min_slack_upper = summary.min_slack_upper.min(r.slack_upper);
        summary.min_conjecture_slack = summary.min_conjecture_slack.min(r.conjecture_half_sum - r.e3_estimate);
        summary.max_gap_estimate = summary.max_gap_estimate.max(r.gap_estimate);
        if rerun {
            summary.rerun.push(i);
        }
        if sandwich_violated(&r) {
            summary.sandwich_violations.push(i);
        }
        if conjecture_violated(&r) {
            summary.conjecture_violations.push(i);
        }
        rows.push(r);
    }
    Ok(ScanReport { rows, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Minimum of the bipartite chain expression over finite samples.
    pub min_bi: f64,
    pub min_tri: f64,
    /// Pairs where σ left the support of ρ, which satisfy the inequality trivially.
    pub infinite_bi: usize,
    pub infinite_tri: usize,
    pub violations_bi: usize,
    pub violations_tri: usize,
}

/// A random separable ρ and a σ that is a Haar-random pure state, a Ginibre
/// mixed state, or ρ itself. In the first two cases ρ has between D and
/// 3D − 1 terms so that σ stays inside its support; in the last it has at
/// most D terms, which pushes the expression towards zero.
pub fn random_pair(structure: &PartyStructure, seed: u64) -> Result<(ree_core::State, SeparableEnsemble<f64>)> {
    let mut rng = rng_from_seed(seed);
    let d = structure.total_dim() as u64;
    if seed % 3 == 2 {
        let rho = SeparableEnsemble::random(structure, 1 + (seed % d) as usize, &mut rng)?;
        return Ok((rho.to_state(), rho));
    }
    let rho = SeparableEnsemble::random(structure, (d + seed % (2 * d)) as usize, &mut rng)?;
    let sigma = if seed.is_multiple_of(3) {
        haar_random_pure::<f64>(structure, derive_seed(seed, 1)).to_density()
    } else {
        random_mixed_state::<f64, _>(structure, &mut rng)?
    };
    Ok((sigma, rho))
}

pub fn verify(samples: usize, seed: u64) -> Result<VerifySummary> {
    let bi = PartyStructure::new(vec![2, 3])?;
    let tri = PartyStructure::qubits(3)?;
    let mut s = VerifySummary {
        samples,
        seed,
        tolerance: INEQUALITY_TOLERANCE,
        min_bi: f64::INFINITY,
        min_tri: f64::INFINITY,
        infinite_bi: 0,
        infinite_tri: 0,
        violations_bi: 0,
        violations_tri: 0,
    };
    for i in 0..samples as u64 {
        let (sigma, rho) = random_pair(&bi, derive_seed(seed, 2 * i))?;
        let v = verify_inequality_bi(&sigma, &rho)?;
        if v.is_infinite() {
            s.infinite_bi += 1;
        } else {
            s.min_bi = s.min_bi.min(v);
        }
        if v < -INEQUALITY_TOLERANCE {
            s.violations_bi += 1;
        }

        let (sigma, rho) = random_pair(&tri, derive_seed(seed, 2 * i + 1))?;
        let v = verify_inequality_tri(&sigma, &rho)?;
        if v.is_infinite() {
            s.infinite_tri += 1;
        } else {
            s.min_tri = s.min_tri.min(v);
        }
        if v < -INEQUALITY_TOLERANCE {
            s.violations_tri += 1;
        }
    }
    Ok(s)
}
