//! Command-line front end. Exit codes: 0 all checks pass, 1 some check
//! failed, 2 malformed input, 3 a geometric precondition failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::ellipsoids::lyz_body;
use crate::error::{Error, Result};
use crate::io::{read_body, read_fn, to_pretty, BodyJson, EllipsoidJson, FnJson, SphericalMeasureJson};
use crate::logconcave::{surface_measure, Backend, QuadratureSpec};
use crate::lyz::{gamma2_fn, Gamma2Report};
use crate::verify::{
    ball_barthe_check, containment_check, lyz_polar_check, mahler_check, main_check, run_instance, sweep,
    ContainmentInput, Instance, SweepKind, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "lyzlab", version, about = "LYZ ellipsoids and affine isoperimetric checks")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operations on a polytope.
    Body {
        op: BodyOp,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operations on a log-concave function.
    Fn {
        op: FnOp,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inequality checks, single or swept.
    Verify {
        kind: VerifyKind,
        /// Input file, or an instance dumped by a failed sweep.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Check this many random instances instead of --in.
        #[arg(long)]
        sweep: Option<usize>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Where failing sweep instances go (default: failures.json).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct NumericArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Analytic)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 129)]
    pub resolution: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl NumericArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec::with_resolution(self.resolution).seed(self.seed)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendArg {
    Analytic,
    Numeric,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Analytic => Backend::Analytic,
            BackendArg::Numeric => Backend::Numeric,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyOp {
    Polar,
    Volume,
    Gamma2,
    Facets,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnOp {
    Mass,
    Legendre,
    Gamma2,
    SurfaceMeasure,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyKind {
    Main,
    LyzPolar,
    Mahler,
    BallBarthe,
    Containment,
}

#[derive(Serialize)]
struct ValueOut {
    value: f64,
    error_bound: f64,
    backend: Backend,
    seed: u64,
}

#[derive(Serialize)]
struct FacetOut {
    normal: Vec<f64>,
    support: f64,
    area: f64,
    vertices: Vec<usize>,
}

#[derive(Serialize)]
struct Gamma2Out {
    #[serde(flatten)]
    report: Gamma2Report,
    seed: u64,
}

#[derive(Serialize)]
struct SurfaceOut {
    dimension: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
    mass_error_bound: f64,
    backend: Backend,
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallBartheInput {
    measure: SphericalMeasureJson,
    l: Vec<f64>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    kind: &'a str,
    n: usize,
    ratio: String,
    pass: bool,
    flags: String,
    seed: u64,
}

/// Parses arguments from the environment and runs.
pub fn main() -> ExitCode {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> ExitCode {
    if let Some(t) = cli.threads {
        // a second initialisation only happens in tests; the first one wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_geometric() { 3 } else { 2 })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Attaches the file name to parse errors; serde already names line and column.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Json(j) => Error::InvalidInput(format!("{}: {j}", path.display())),
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::Body { op, input, out } => {
            let body = in_file(input, read_body(&read(input)?))?;
            let text = match op {
                BodyOp::Polar => to_pretty(&BodyJson::from_body(&body.polar()?)),
                BodyOp::Volume => to_pretty(&ValueOut {
                    value: body.volume(),
                    error_bound: 0.0,
                    backend: Backend::Analytic,
                    seed: 0,
                }),
                BodyOp::Gamma2 => to_pretty(&EllipsoidJson::from_form(&lyz_body(&body)?)),
                BodyOp::Facets => to_pretty(
                    &body
                        .facets()
                        .iter()
                        .map(|f| FacetOut {
                            normal: f.normal.iter().copied().collect(),
                            support: f.support,
                            area: f.area,
                            vertices: f.vertices.clone(),
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Fn { op, input, numeric, out } => {
            let f = in_file(input, read_fn(&read(input)?))?;
            let spec = numeric.spec();
            let backend = Backend::from(numeric.backend);
            let text = match op {
                FnOp::Mass => {
                    let m = f.mass(backend, &spec)?;
                    to_pretty(&ValueOut {
                        value: m.value,
                        error_bound: m.error_bound,
                        backend,
                        seed: spec.seed,
                    })
                }
                FnOp::Legendre => to_pretty(&FnJson::from_fn(&f.legendre()?)),
                FnOp::Gamma2 => to_pretty(&Gamma2Out {
                    report: gamma2_fn(&f, backend, &spec)?.report(),
                    seed: spec.seed,
                }),
                FnOp::SurfaceMeasure => {
                    let s = surface_measure(&f, &spec)?;
                    let m = &s.measure;
                    to_pretty(&SurfaceOut {
                        dimension: m.dim(),
                        points: (0..m.len()).map(|i| m.point(i).to_vec()).collect(),
                        weights: m.weights().to_vec(),
                        mass_error_bound: s.mass_error_bound,
                        backend: Backend::Numeric,
                        seed: spec.seed,
                    })
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Verify {
            kind,
            input,
            sweep: count,
            n,
            numeric,
            report,
            csv,
            dump,
        } => {
            let reports = match (count, input) {
                (Some(count), _) => {
                    let sk = match kind {
                        VerifyKind::Main => SweepKind::Main,
                        VerifyKind::LyzPolar => SweepKind::LyzPolar,
                        VerifyKind::Mahler => SweepKind::Mahler,
                        VerifyKind::BallBarthe => SweepKind::BallBarthe,
                        VerifyKind::Containment => {
                            return Err(Error::InvalidInput("containment has no random sweep".into()))
                        }
                    };
                    if *count == 0 {
                        return Err(Error::InvalidInput("--sweep needs a positive count".into()));
                    }
                    let result = sweep(sk, *count, numeric.seed, *n);
                    let s = &result.summary;
                    eprintln!(
                        "{} n={} count={} seed={} min_ratio={} failed={} ({:.2}s)",
                        sk.check().as_str(),
                        s.n,
                        s.count,
                        s.seed,
                        s.min_ratio,
                        s.failed,
                        s.seconds
                    );
                    if !result.failures.is_empty() {
                        let path = dump.clone().unwrap_or_else(|| PathBuf::from("failures.json"));
                        fs::write(&path, to_pretty(&result.failures))?;
                        eprintln!("failing instances written to {}", path.display());
                    }
                    result.reports
                }
                (None, Some(path)) => vec![verify_one(*kind, path, numeric)?],
                (None, None) => return Err(Error::InvalidInput("verify needs --in or --sweep".into())),
            };
            let text = if count.is_some() {
                to_pretty(&reports)
            } else {
                to_pretty(&reports[0])
            };
            emit(report.as_deref(), &text)?;
            if let Some(path) = csv {
                fs::write(path, csv_summary(&reports)?)?;
            }
            Ok(reports.iter().all(|r| r.pass))
        }
    }
}

fn verify_one(kind: VerifyKind, path: &Path, numeric: &NumericArgs) -> Result<VerificationReport> {
    let text = read(path)?;
    if let Ok(inst) = serde_json::from_str::<Instance>(&text) {
        return run_instance(&inst);
    }
    let spec = numeric.spec();
    match kind {
        VerifyKind::Main => main_check(&in_file(path, read_fn(&text))?, numeric.backend.into(), &spec),
        VerifyKind::LyzPolar => lyz_polar_check(&in_file(path, read_body(&text))?),
        VerifyKind::Mahler => mahler_check(&in_file(path, read_body(&text))?),
        VerifyKind::BallBarthe => {
            let input: BallBartheInput = in_file(path, serde_json::from_str(&text).map_err(Error::from))?;
            ball_barthe_check(&in_file(path, input.measure.to_measure())?, &input.l)
        }
        VerifyKind::Containment => {
            let input: ContainmentInput = in_file(path, serde_json::from_str(&text).map_err(Error::from))?;
            let f = in_file(path, input.function.to_fn())?;
            let nu = input.measure(&f, &spec)?;
            let mut r = containment_check(&f, &nu)?;
            r.seed = spec.seed;
            Ok(r)
        }
    }
}

/// id,kind,n,ratio,pass,flags,seed with LF line endings; flags are ';'-joined.
pub fn csv_summary(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in reports {
        let ratio = if r.ratio == f64::INFINITY {
            "inf".to_string()
        } else {
            r.ratio.to_string()
        };
        w.serialize(CsvRow {
            id: &r.id,
            kind: r.kind.as_str(),
            n: r.n,
            ratio,
            pass: r.pass,
            flags: r.flags.join(";"),
            seed: r.seed,
        })
        .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
