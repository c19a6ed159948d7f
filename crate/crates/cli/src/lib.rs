//! `wigner-lab`: run the named scenarios or `.wig` protocols, sweep their
//! parameters and time the cut-scaling simulation.
//!
//! Exit codes: 0 on success, 1 when an assertion or the bench budget fails,
//! 2 on usage, parse or parameter errors.

pub mod report;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use wigner_core::protoparse::{self, ExecutionReport};
use wigner_core::scenarios::*;
use wigner_core::{DensityOperator, FriendPolicy, Register, StateVector};

pub use report::{emit_report, Format, ReportDocument, ReportError, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wigner-lab", version, about = "Measurement-process scenarios and .wig protocols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the scenario names.
    List,
    /// Run a scenario by name, or a .wig file.
    Run(RunArgs),
    /// Sweep a parameter of cut, eraser or chsh.
    Sweep(SweepArgs),
    /// Time the cut-scaling simulation for m = 1..=m-max.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Friend policy: premeasure or full.
    #[arg(long)]
    pub policy: Option<FriendPolicy>,
    /// Phases in radians, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Vec<f64>,
    /// Number of friend record qubits (cut).
    #[arg(long)]
    pub m: Option<usize>,
    /// Per-qubit leak probability (cut).
    #[arg(long)]
    pub leak: Option<f64>,
    /// Grid step in degrees for the CHSH search.
    #[arg(long = "grid-deg")]
    pub grid_deg: Option<f64>,
    /// GHZ station agents, one letter each: d(irect), w(igner), f(riend).
    #[arg(long)]
    pub agents: Option<String>,
    /// Friend pre-measurement phase at Wigner stations (ghz).
    #[arg(long = "friend-phi", allow_hyphen_values = true)]
    pub friend_phi: Option<f64>,
    /// Counterfactual constraint such as `w1*f2*f3=-1`; repeatable.
    #[arg(long = "constraint", allow_hyphen_values = true)]
    pub constraints: Vec<String>,
    /// Drop the k-th (1-based) default counterfactual constraint.
    #[arg(long)]
    pub drop: Option<usize>,
    /// Remove the +45 filter in front of detector 1 (eraser).
    #[arg(long = "no-filter")]
    pub no_filter: bool,
    /// Copy the path into a marker before recombination (eraser).
    #[arg(long = "which-path")]
    pub which_path: bool,
    /// Number of phase points in a fringe sweep (eraser).
    #[arg(long)]
    pub points: Option<usize>,
    /// Device rotation angle (sealed-lab).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Input polarization: mixed, h, v, d or a (sealed-lab).
    #[arg(long)]
    pub input: Option<String>,
    /// The friend lets the photon pass untouched (sealed-lab).
    #[arg(long = "no-friend")]
    pub no_friend: bool,
    /// Coin amplitude angle: cos(theta/2)|H> + e^{i phi} sin(theta/2)|T> (concordant).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Sampled runs (concordant).
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario name or path to a .wig file.
    pub target: String,
    #[command(flatten)]
    pub output: Output,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// cut, eraser or chsh.
    pub scenario: String,
    /// Range of m for cut: `N` means 1..=N, `A..B` means A..=B.
    #[arg(long = "m-range", default_value = "1..12")]
    pub m_range: String,
    /// Leak probabilities for cut, comma separated.
    #[arg(long = "leaks", value_delimiter = ',', default_value = "0.1")]
    pub leaks: Vec<f64>,
    #[command(flatten)]
    pub output: Output,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long = "m-max", default_value_t = 20)]
    pub m_max: usize,
    #[arg(long, default_value_t = 0.1)]
    pub leak: f64,
    /// Seconds allowed for the largest m.
    #[arg(long, default_value_t = 60.0)]
    pub budget: f64,
    #[command(flatten)]
    pub output: Output,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<wigner_core::Error> for Failure {
    fn from(e: wigner_core::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        usage(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_command<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let (doc, output) = match command {
        Command::List => {
            for name in SCENARIOS {
                let _ = writeln!(stdout, "{name}");
            }
            return Ok(EXIT_OK);
        }
        Command::Run(a) => (run(&a.target, &a.params, &a.output, stderr)?, a.output),
        Command::Sweep(a) => (sweep(&a)?, a.output),
        Command::Bench(a) => (bench(&a)?, a.output),
    };
    let bytes = emit_report(&doc, output.format)?;
    match &output.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(&bytes).map_err(|e| usage(e.to_string()))?,
    }
    let _ = write!(stderr, "{}", doc.summary());
    Ok(if doc.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn finish(output: ScenarioOutput, out: &Output, started: Instant) -> ReportDocument {
    let mut doc = ReportDocument::new(output, out.seed);
    if out.timings {
        doc.timings.insert("total".into(), started.elapsed().as_secs_f64());
    }
    doc
}

fn is_program(target: &str) -> bool {
    target.ends_with(".wig") || (!SCENARIOS.contains(&target) && Path::new(target).is_file())
}

pub fn run(target: &str, p: &Params, out: &Output, stderr: &mut dyn Write) -> Result<ReportDocument, Failure> {
    let started = Instant::now();
    if is_program(target) {
        return run_program(target, out, stderr, started);
    }
    let output = match target {
        "fr" => run_fr(p.policy.unwrap_or(FriendPolicy::PreMeasure))?.tabulate(),
        "ghz" => GhzReport::run(ghz_settings(p)?)?.tabulate(),
        "counterfactual" => CounterfactualReport::run(constraints(p)?).tabulate(),
        "chsh" => match p.grid_deg {
            Some(step) => chsh_grid(step)?.tabulate(),
            None => run_brukner_chsh(p.policy.unwrap_or(FriendPolicy::PreMeasure))?.tabulate(),
        },
        "eraser" => run_eraser_with(eraser_config(p)?)?.tabulate(),
        "cut" => {
            let mut config = CutScalingConfig::new(p.m.unwrap_or(10), p.leak.unwrap_or(0.1));
            if !p.phi.is_empty() {
                config.phis = p.phi.clone();
            }
            run_cut_scaling(&config)?.tabulate()
        }
        "sealed-lab" => run_sealed_lab(&sealed_setting(p)?)?.tabulate(),
        "concordant" => {
            let theta = p.theta.unwrap_or(FRAC_PI_2);
            let phase = p.phi.first().copied().unwrap_or(0.0);
            let alpha = C64::new((theta / 2.0).cos(), 0.0);
            let beta = C64::from_polar((theta / 2.0).sin(), phase);
            run_concordant_wigner(alpha, beta, p.samples.unwrap_or(1000), out.seed)?.tabulate()
        }
        other => return Err(usage(format!("unknown scenario `{other}` (try `wigner-lab list`)"))),
    };
    Ok(finish(output, out, started))
}

fn run_program(path: &str, out: &Output, stderr: &mut dyn Write, started: Instant) -> Result<ReportDocument, Failure> {
    let source = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let report = match protoparse::run_source(&source, out.seed) {
        Ok(r) => r,
        Err(diags) => {
            for d in &diags {
                let _ = writeln!(stderr, "{}", d.render(path));
            }
            let errors = diags.iter().filter(|d| d.is_error()).count();
            return Err(usage(format!("{path}: {errors} error(s)")));
        }
    };
    for w in &report.warnings {
        let _ = writeln!(stderr, "{}", w.render(path));
    }
    let mut doc = finish(program_output(path, &report), out, started);
    doc.assertions = report.assertions;
    Ok(doc)
}

fn program_output(path: &str, report: &ExecutionReport) -> ScenarioOutput {
    let mut table = Table::new(["measurement", "outcome", "probability"]);
    let mut sampled = Table::new(["measurement", "outcome"]);
    for m in &report.measurements {
        for (label, p) in m.distribution.iter() {
            table.push(vec![json!(m.name), json!(label), num(p)]);
        }
        if let Some(p) = m.distribution.outside {
            table.push(vec![json!(m.name), json!("outside"), num(p)]);
        }
        sampled.push(vec![json!(m.name), json!(m.sampled)]);
    }
    let file = Path::new(path).file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    ScenarioOutput {
        scenario: file,
        parameters: BTreeMap::from([("file".to_string(), json!(path))]),
        tables: BTreeMap::from([("measurements".to_string(), table), ("sampled".to_string(), sampled)]),
        derived_quantities: BTreeMap::new(),
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn ghz_settings(p: &Params) -> Result<GhzSettings, Failure> {
    let phi: [f64; 3] = match p.phi.len() {
        0 => [0.0, FRAC_PI_2, FRAC_PI_2],
        3 => [p.phi[0], p.phi[1], p.phi[2]],
        n => return Err(usage(format!("ghz needs three phases, got {n}"))),
    };
    let letters = p.agents.as_deref().unwrap_or("ddd");
    let agents: Vec<Agent> = letters
        .chars()
        .map(|c| match c.to_ascii_lowercase() {
            'd' => Ok(Agent::Direct),
            'w' => Ok(Agent::Wigner),
            'f' => Ok(Agent::Friend),
            _ => Err(usage(format!("unknown agent `{c}` in `{letters}` (use d, w, f)"))),
        })
        .collect::<Result<_, _>>()?;
    let agents: [Agent; 3] = agents.try_into().map_err(|_| usage("--agents needs exactly three letters"))?;
    let mut s = GhzSettings::with_agents(phi, agents);
    if let Some(f) = p.friend_phi {
        s.friend_phi = f;
    }
    Ok(s)
}

fn constraints(p: &Params) -> Result<Vec<Constraint>, Failure> {
    let mut list = if p.constraints.is_empty() {
        ghz_constraints()
    } else {
        p.constraints.iter().map(|c| c.parse()).collect::<wigner_core::Result<Vec<Constraint>>>()?
    };
    if let Some(k) = p.drop {
        if k == 0 || k > list.len() {
            return Err(usage(format!("--drop {k} outside 1..={}", list.len())));
        }
        list.remove(k - 1);
    }
    Ok(list)
}

fn eraser_config(p: &Params) -> Result<EraserConfig, Failure> {
    if p.phi.len() > 1 {
        return Err(usage("eraser takes a single --phi"));
    }
    let mut c = EraserConfig {
        phi: p.phi.first().copied().unwrap_or(0.0),
        filter_on: !p.no_filter,
        which_path: p.which_path,
        ..Default::default()
    };
    if let Some(n) = p.points {
        c.sweep_points = n;
    }
    Ok(c)
}

fn sealed_setting(p: &Params) -> Result<SealedLabSetting, Failure> {
    let pol = Register::qubit("pol");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pure = |a: [f64; 2]| -> Result<DensityOperator, Failure> {
        let amps = a.map(|x| C64::new(x, 0.0)).to_vec();
        Ok(DensityOperator::from_pure(&StateVector::single(pol.clone(), amps)?))
    };
    let input = match p.input.as_deref().unwrap_or("mixed") {
        "mixed" => DensityOperator::maximally_mixed(vec![pol.clone()])?,
        "h" => pure([1.0, 0.0])?,
        "v" => pure([0.0, 1.0])?,
        "d" => pure([h, h])?,
        "a" => pure([h, -h])?,
        other => return Err(usage(format!("unknown input `{other}` (mixed, h, v, d, a)"))),
    };
    let mut s = SealedLabSetting::new(p.alpha.unwrap_or(0.0), p.phi.first().copied().unwrap_or(0.0), input);
    s.friend_measures = !p.no_friend;
    Ok(s)
}

fn m_range(spec: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("bad m range `{spec}` (use N or A..B)"));
    let (a, b) = match spec.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => (1, spec.trim().parse().map_err(|_| bad())?),
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn cut_table(ms: std::ops::RangeInclusive<usize>, leaks: &[f64]) -> Result<Table, Failure> {
    let mut table = Table::new(["m", "p", "visibility", "seconds"]);
    for r in run_cut_sweep(ms, leaks, DEFAULT_MAX_QUBITS)? {
        table.push(vec![json!(r.m), num(r.leak), num(r.visibility), num(r.seconds)]);
    }
    Ok(table)
}

pub fn sweep(a: &SweepArgs) -> Result<ReportDocument, Failure> {
    let started = Instant::now();
    let p = &a.params;
    let (output, table) = match a.scenario.as_str() {
        "cut" => {
            let ms = m_range(&a.m_range)?;
            let table = cut_table(ms.clone(), &a.leaks)?;
            let output = ScenarioOutput {
                scenario: "cut".into(),
                parameters: BTreeMap::from([
                    ("m".to_string(), json!([ms.start(), ms.end()])),
                    ("leaks".to_string(), Value::Array(a.leaks.iter().map(|&x| num(x)).collect())),
                ]),
                tables: BTreeMap::from([("sweep".to_string(), table)]),
                derived_quantities: BTreeMap::new(),
            };
            (output, "sweep")
        }
        "eraser" => (run_eraser_with(eraser_config(p)?)?.tabulate(), "sweep"),
        "chsh" => (chsh_grid(p.grid_deg.unwrap_or(10.0))?.tabulate(), "argmax"),
        other => return Err(usage(format!("no sweep for `{other}` (cut, eraser, chsh)"))),
    };
    let mut doc = finish(output, &a.output, started);
    doc.sweep = Some(table.into());
    Ok(doc)
}

pub fn bench(a: &BenchArgs) -> Result<ReportDocument, Failure> {
    let started = Instant::now();
    if a.m_max == 0 {
        return Err(usage("--m-max must be at least 1"));
    }
    let table = cut_table(1..=a.m_max, &[a.leak])?;
    let last = table.rows.last().and_then(|r| r[3].as_f64()).unwrap_or(f64::INFINITY);
    let output = ScenarioOutput {
        scenario: "bench".into(),
        parameters: BTreeMap::from([
            ("m_max".to_string(), json!(a.m_max)),
            ("leak".to_string(), num(a.leak)),
            ("budget_seconds".to_string(), num(a.budget)),
        ]),
        tables: BTreeMap::from([("sweep".to_string(), table)]),
        derived_quantities: BTreeMap::new(),
    };
    let mut doc = ReportDocument::new(output, a.output.seed);
    doc.sweep = Some("sweep".into());
    doc.timings.insert(format!("m={}", a.m_max), last);
    doc.timings.insert("total".into(), started.elapsed().as_secs_f64());
    doc.assertions.push(protoparse::AssertionOutcome {
        statement: format!("seconds(m={}) <= {}", a.m_max, a.budget),
        line: 0,
        expected: a.budget,
        actual: last,
        tolerance: 0.0,
        delta: last - a.budget,
        passed: last <= a.budget,
    });
    Ok(doc)
}
