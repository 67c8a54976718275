//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::elasticity::{default_order, run_benchmark, Benchmark};
use crate::error::Error;
use crate::geometry::{BackgroundMesh, InterfaceSpec};
use crate::integration::{
    area_convergence_study, default_sweep_steps, domain_quadrature, robustness_sweep, Backend, Case, StudyRecord,
    SweepCase,
};
use crate::interface_file::load_interface;
use crate::report;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const BACKEND_MISMATCH: u8 = 4;
    pub const STUDY_FAILURE: u8 = 5;
    pub const IO: u8 = 6;
}

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  2  invalid arguments or parameters
  3  interface file could not be parsed
  4  requested backend does not match the interface description
  5  a quadrature, study step or solve failed
  6  reading or writing a file failed

The number of worker threads is taken from --threads or CUTCELL_THREADS
(default: all cores). Output does not depend on it.";

#[derive(Debug, Parser)]
#[command(name = "cutcell", version, about = "Cut-cell quadrature studies and immersed elasticity benchmarks", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads.
    #[arg(long, env = "CUTCELL_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area of a region over a sequence of mesh sizes.
    Area(AreaArgs),
    /// Area of a moving line or rotating triangle on a fixed mesh.
    Sweep(SweepArgs),
    /// Elasticity benchmark errors over a sequence of mesh sizes.
    Elasticity(ElasticityArgs),
    /// Every quadrature node of one region on one mesh.
    Points(PointsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Implicit,
    Parametric,
    Both,
}

impl BackendChoice {
    fn backends(self) -> Vec<Backend> {
        match self {
            BackendChoice::Implicit => vec![Backend::Implicit],
            BackendChoice::Parametric => vec![Backend::Parametric],
            BackendChoice::Both => Backend::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseName {
    Circle,
    Semicircle,
    Line,
    Triangle,
    PlateHole,
    SquarePlate,
}

impl CaseName {
    fn case(self) -> Case {
        match self {
            CaseName::Circle => Case::Circle,
            CaseName::Semicircle => Case::Semicircle,
            CaseName::Line => Case::Line,
            CaseName::Triangle => Case::Triangle,
            CaseName::PlateHole => Case::PlateHole,
            CaseName::SquarePlate => Case::SquarePlate,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Geometry {
    /// Built-in geometry.
    #[arg(long, value_enum)]
    pub case: Option<CaseName>,
    /// Interface description file (TOML).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    /// Backend; defaults to both for built-in cases and to the file's own
    /// kind for interface files.
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    /// Gauss points per direction and per subinterval.
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    /// Mesh sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.125, 0.0625, 0.03125, 0.015625])]
    pub h: Vec<f64>,
    /// Output CSV (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `line` or `triangle`.
    #[arg(long, value_enum)]
    pub case: CaseName,
    /// Number of positions (default 101 for the line, 46 for the triangle).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = BackendChoice::Both)]
    pub backend: BackendChoice,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ElasticityArgs {
    /// `plate-hole` or `square-plate`.
    #[arg(long, value_enum)]
    pub case: CaseName,
    /// Spline degree.
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Quadrature order (default p + 2).
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.125, 0.0625, 0.03125])]
    pub h: Vec<f64>,
    #[arg(long, value_enum, default_value_t = BackendChoice::Both)]
    pub backend: BackendChoice,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    /// A single backend; defaults to implicit for built-in cases.
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long, default_value_t = 0.25)]
    pub h: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A failed run: exit code and diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => exit::PARSE,
            Error::BackendMismatch(_) => exit::BACKEND_MISMATCH,
            Error::Io(_) => exit::IO,
            Error::Domain(_) => exit::USAGE,
            _ => exit::STUDY_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: exit::IO,
            message: format!("i/o error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.into(),
    }
}

/// Interfaces to run with their reference areas.
fn interfaces(g: &Geometry, backend: Option<BackendChoice>, default: BackendChoice) -> Result<Vec<(InterfaceSpec, Option<f64>)>, Failure> {
    if let Some(case) = g.case {
        let case = case.case();
        return backend
            .unwrap_or(default)
            .backends()
            .into_iter()
            .map(|b| Ok((case.interface(b)?, Some(case.reference_area()))))
            .collect();
    }
    let path = g.spec.as_ref().ok_or_else(|| usage("either --case or --spec is required"))?;
    let file = load_interface(path)?;
    let kind = file.spec.backend_name();
    if let Some(choice) = backend {
        let wanted: Vec<&str> = choice.backends().iter().map(|b| b.name()).collect();
        if wanted != [kind] {
            return Err(Error::BackendMismatch(format!(
                "{} describes a {kind} interface, but --backend {} was requested",
                path.display(),
                wanted.join(" and ")
            ))
            .into());
        }
    }
    Ok(vec![(file.spec, file.reference_area)])
}

/// Every mesh size must be positive and divide the unit square.
fn check_levels(h: &[f64]) -> Result<(), Failure> {
    if h.is_empty() {
        return Err(usage("at least one mesh size is required"));
    }
    for &v in h {
        BackgroundMesh::unit_square_with_size(v).map_err(|e| usage(format!("--h {v}: {e}")))?;
    }
    Ok(())
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn area(args: &AreaArgs) -> Result<(), Failure> {
    check_levels(&args.h)?;
    let mut records: Vec<StudyRecord> = Vec::new();
    for (iface, reference) in interfaces(&args.geometry, args.backend, BackendChoice::Both)? {
        let reference = reference.ok_or_else(|| Error::Parse {
            location: "reference_area".into(),
            message: "an area study needs reference_area in the interface file".into(),
        })?;
        records.extend(area_convergence_study(&iface, reference, &args.h, args.q)?);
    }
    let mut out = open_output(&args.output)?;
    report::write_area_csv(&mut out, &records)?;
    out.flush()?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let case = match args.case {
        CaseName::Line => SweepCase::Line,
        CaseName::Triangle => SweepCase::Triangle,
        other => return Err(usage(format!("no sweep is defined for {}", other.case()))),
    };
    let steps = args.steps.unwrap_or_else(|| default_sweep_steps(case));
    let mut records = Vec::new();
    for b in args.backend.backends() {
        records.extend(robustness_sweep(case, steps, args.q, b)?);
    }
    let mut out = open_output(&args.output)?;
    report::write_area_csv(&mut out, &records)?;
    out.flush()?;
    Ok(())
}

fn elasticity(args: &ElasticityArgs) -> Result<(), Failure> {
    let bench = match args.case {
        CaseName::PlateHole => Benchmark::PlateHole,
        CaseName::SquarePlate => Benchmark::SquarePlate,
        other => return Err(usage(format!("{} is not an elasticity benchmark", other.case()))),
    };
    check_levels(&args.h)?;
    let q = args.q.unwrap_or_else(|| default_order(args.p));
    let mut records = Vec::new();
    for b in args.backend.backends() {
        for &h in &args.h {
            records.push(run_benchmark(bench, b, args.p, h, q)?.record);
        }
    }
    let mut out = open_output(&args.output)?;
    report::write_elasticity_csv(&mut out, &records)?;
    out.flush()?;
    Ok(())
}

fn points(args: &PointsArgs) -> Result<(), Failure> {
    if args.backend == Some(BackendChoice::Both) {
        return Err(usage("points takes a single backend"));
    }
    check_levels(&[args.h])?;
    let ifaces = interfaces(&args.geometry, args.backend, BackendChoice::Implicit)?;
    let mesh = BackgroundMesh::unit_square_with_size(args.h)?;
    let rule = domain_quadrature(&mesh, &ifaces[0].0, args.q)?;
    let mut out = open_output(&args.output)?;
    report::write_points_csv(&mut out, &rule)?;
    out.flush()?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Area(a) => area(a),
        Command::Sweep(a) => sweep(a),
        Command::Elasticity(a) => elasticity(a),
        Command::Points(a) => points(a),
    }
}

/// Runs a parsed command line on a pool of the requested size.
pub fn run(cli: &Cli) -> Result<(), Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| dispatch(cli))
}
