//! Argument handling and report rendering for the `nodalscope` binary.
//!
//! Exit codes: 0 success, 1 invalid input or failed computation, 2 a
//! verification suite reported a failure.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nodalscope::dihedral::DihedralParams;
use nodalscope::graph::{parse_graph, GraphError};
use nodalscope::report::{self, Table};
use nodalscope::scattering::{self, attach_leads};
use nodalscope::verify;
use nodalscope::{builtins, nodal, spectral, GraphPoint, MetricGraph};
use serde_json::{Map, Value};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "NODALSCOPE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Core(#[from] nodalscope::Error),
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Dihedral,
    Interlacing,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Eigenvalues up to --kmax, or the first --nmax.
    Spectrum,
    /// Samples of the first --nmax eigenfunctions.
    Eigenfunction,
    /// Zero and domain counts of the first --nmax eigenfunctions.
    Nodal,
    /// Scattering matrix sweep with leads at --leads.
    Scatter,
    /// Sign-weighted counting function for probes --x1, --x2.
    Swcf,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Args)]
pub struct Options {
    /// Graph document path, or `builtin:NAME`.
    #[arg(long, global = true)]
    pub graph: Option<String>,
    #[arg(long, global = true)]
    pub kmax: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Comma-separated lead vertices.
    #[arg(long, global = true, value_delimiter = ',')]
    pub leads: Vec<String>,
    /// Probe point `EDGE:OFFSET`.
    #[arg(long, global = true)]
    pub x1: Option<GraphPoint>,
    #[arg(long, global = true)]
    pub x2: Option<GraphPoint>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<f64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Sweep step in k.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "nodalscope", version, about = "Spectra, scattering and nodal counts of quantum graphs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// Parse outcome: a config, or text that clap printed for --help/--version.
pub enum Parsed {
    Run(Box<RunConfig>),
    Info(String),
}

impl RunConfig {
    pub fn parse_args<I, T>(args: I) -> Result<Parsed, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        match RunConfig::try_parse_from(args) {
            Ok(c) => {
                c.validate()?;
                Ok(Parsed::Run(Box::new(c)))
            }
            Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
                Ok(Parsed::Info(e.to_string()))
            }
            Err(e) => Err(CliError::Usage(e.to_string())),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let o = &self.options;
        for (name, v) in [("kmax", o.kmax), ("step", o.step), ("a", o.a), ("b", o.b), ("c", o.c)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Invalid(format!("--{name} must be positive, got {v}")));
                }
            }
        }
        for (name, v) in [("nmax", o.nmax), ("trials", o.trials)] {
            if v == Some(0) {
                return Err(CliError::Invalid(format!("--{name} must be at least 1")));
            }
        }
        let abc = [o.a, o.b, o.c].iter().filter(|v| v.is_some()).count();
        if abc != 0 && abc != 3 {
            return Err(CliError::Invalid("give all of --a, --b, --c or none".into()));
        }
        Ok(())
    }

    fn abc(&self) -> Option<(f64, f64, f64)> {
        let o = &self.options;
        Some((o.a?, o.b?, o.c?))
    }

    fn graph(&self) -> Result<MetricGraph, CliError> {
        let src = self.options.graph.as_deref().ok_or_else(|| CliError::Invalid("--graph is required".into()))?;
        if let Some(name) = src.strip_prefix("builtin:") {
            return Ok(builtins::by_name(name, self.abc())?);
        }
        let path = PathBuf::from(src);
        let text = fs::read_to_string(&path).map_err(|source| CliError::Read { path, source })?;
        Ok(parse_graph(&text)?)
    }

    fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Invalid(format!("--{flag} is required")))
    }
}

/// Rendered report and whether every verification in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub verified: bool,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

fn table_report(t: &Table, format: Format, notes: Vec<String>) -> Result<Report, CliError> {
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.header)?;
            for r in &t.rows {
                w.write_record(r)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?).expect("csv output is UTF-8")
        }
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (h, cell) in t.header.iter().zip(r) {
                        m.insert(h.clone(), json_cell(cell));
                    }
                    Value::Object(m)
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
    };
    Ok(Report { text, verified: true, notes })
}

fn json_cell(cell: &str) -> Value {
    if cell.is_empty() {
        return Value::Null;
    }
    if let Ok(b) = cell.parse::<bool>() {
        return Value::Bool(b);
    }
    if let Ok(i) = cell.parse::<i64>() {
        return Value::from(i);
    }
    match cell.parse::<f64>() {
        Ok(x) if x.is_finite() => Value::from(x),
        _ => Value::String(cell.to_string()),
    }
}

/// Computes the report for a configuration without touching the filesystem
/// (except to read a graph document).
pub fn render(config: &RunConfig) -> Result<Report, CliError> {
    let o = &config.options;
    match &config.command {
        Command::Spectrum => {
            let g = config.graph()?;
            let spec = match (o.kmax, o.nmax) {
                (Some(k), _) => spectral::eigenvalues_up_to(&g, k)?,
                (None, Some(n)) => {
                    let mut s = spectral::first_eigenvalues(&g, n)?;
                    s.pairs.retain(|p| p.index <= n);
                    s
                }
                (None, None) => return Err(CliError::Invalid("--kmax or --nmax is required".into())),
            };
            let mut t = report::spectrum_table(&spec);
            if o.kmax.is_none() {
                t.rows.truncate(o.nmax.unwrap_or(usize::MAX));
            }
            table_report(&t, o.format, Vec::new())
        }
        Command::Eigenfunction => {
            let g = config.graph()?;
            let n = RunConfig::require(o.nmax, "nmax")?;
            let spec = spectral::first_eigenvalues(&g, n)?;
            let (t, notes) = report::eigenfunction_table(&g, &spec, n, spectral::SAMPLES_PER_EDGE)?;
            table_report(&t, o.format, notes)
        }
        Command::Nodal => {
            let g = config.graph()?;
            let n = RunConfig::require(o.nmax, "nmax")?;
            let outcomes = nodal::nodal_records(&g, n)?;
            let notes = outcomes
                .iter()
                .filter_map(|x| match x {
                    nodal::NodalOutcome::Skipped { n, reason, .. } => Some(format!("n = {n} skipped: {reason}")),
                    nodal::NodalOutcome::Record(_) => None,
                })
                .collect();
            table_report(&report::nodal_table(&g, &outcomes)?, o.format, notes)
        }
        Command::Scatter => {
            let g = config.graph()?;
            if o.leads.is_empty() {
                return Err(CliError::Invalid("--leads is required".into()));
            }
            let og = attach_leads(&g, &o.leads)?;
            let k_max = RunConfig::require(o.kmax, "kmax")?;
            let step = o.step.unwrap_or(k_max / 1000.0);
            let count = (k_max / step).floor() as usize;
            let ks: Vec<f64> = (1..=count).map(|i| i as f64 * step).collect();
            let rows = scattering::scattering_sweep(&og, &ks)?;
            table_report(&report::sweep_table(&og, &rows), o.format, Vec::new())
        }
        Command::Swcf => {
            let g = config.graph()?;
            let x1 = o.x1.clone().ok_or_else(|| CliError::Invalid("--x1 is required".into()))?;
            let x2 = o.x2.clone().ok_or_else(|| CliError::Invalid("--x2 is required".into()))?;
            let k_max = RunConfig::require(o.kmax, "kmax")?;
            let events = scattering::swcf_events(&g, &x1, &x2, k_max)?;
            let zero = if g.is_connected() { g.neumann_components() } else { 0 };
            table_report(&report::swcf_table(&events, zero), o.format, Vec::new())
        }
        Command::Verify { suite: Suite::Dihedral } => {
            let (a, b, c) = config.abc().unwrap_or(builtins::DIHEDRAL_DEFAULT);
            let params = DihedralParams::new(a, b, c)?;
            let r = verify::verify_dihedral(&params, o.nmax.unwrap_or(100))?;
            let notes = r.warnings.iter().map(|w| format!("warning: {w}")).collect();
            Ok(Report { text: serde_json::to_string_pretty(&r).expect("serializable") + "\n", verified: r.ok(), notes })
        }
        Command::Verify { suite: Suite::Interlacing } => {
            let g = config.graph()?;
            let r = verify::verify_interlacing(&g, o.trials.unwrap_or(20), o.seed)?;
            Ok(Report {
                text: serde_json::to_string_pretty(&r).expect("serializable") + "\n",
                verified: r.ok(),
                notes: Vec::new(),
            })
        }
    }
}

/// Renders and writes the report (to `--out` or stdout); returns the exit code.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    let r = render(config)?;
    for n in &r.notes {
        eprintln!("{n}");
    }
    match &config.options.out {
        Some(path) => fs::write(path, &r.text).map_err(|source| CliError::Write { path: path.clone(), source })?,
        None => print!("{}", r.text),
    }
    Ok(if r.verified { EXIT_OK } else { EXIT_VERIFICATION })
}

/// Caps the global worker pool from the environment, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot size worker pool: {e}")))
}

/// Full entry point: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = configure_threads().and_then(|()| match RunConfig::parse_args(args)? {
        Parsed::Info(text) => {
            print!("{text}");
            Ok(EXIT_OK)
        }
        Parsed::Run(c) => run(&c),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
