#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heatimages_core::asympt::expansion;
use heatimages_core::kernel::DEFAULT_EPSILON;
use heatimages_core::numeric::format_rational;
use heatimages_core::ztrace::{extrapolate_residuals, trace_series, Columns};
use heatimages_core::{
    admissible_triangle, admissible_trihedral, topological_constant, trihedral_constant, wedge_constant,
    DomainDescriptor, Error, QuadratureConfig, Scheme, TraceSeries,
};
use serde::Serialize;

mod domain_arg;

#[derive(Parser, Debug)]
#[command(name = "heatimages", version, about = "Dirichlet heat traces of reflection domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the domain catalogue and angle admissibility.
    Domains(OutputArgs),
    /// Numerical heat trace Z(t).
    Trace(RunArgs),
    /// Closed-form short-time expansion.
    Asympt(RunArgs),
    /// Numerical trace, expansion and their difference.
    Compare(RunArgs),
    /// Compare over a grid of times and extrapolate the constant term.
    Sweep(SweepArgs),
    /// Table of topological constants.
    Constants(OutputArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; written atomically. Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Inline JSON, a path to a JSON file, or a shortcut such as triangle-244.
    #[arg(long)]
    domain: String,
    /// Parameter override, repeatable: --param a=2.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Comma separated times.
    #[arg(long = "t", value_delimiter = ',', num_args = 1.., required = true)]
    t: Vec<f64>,
    /// Relative refinement target of the quadrature.
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
    /// Use the collapsed Gauss rule on triangles.
    #[arg(long)]
    collapsed: bool,
    /// Gauss points per axis and cell.
    #[arg(long, default_value_t = 10)]
    points: usize,
    /// How many times the subdivision count may double.
    #[arg(long, default_value_t = 3)]
    max_refinements: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Tolerance of the constant-term extrapolation.
    #[arg(long, default_value_t = 1e-6)]
    extrapolation_tol: f64,
}

enum Failure {
    Config(String),
    Domain(String),
    Convergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Convergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Domain(m) | Failure::Convergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceFailure { .. } | Error::ExtrapolationUnstable(_) => Failure::Convergence(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("HEATIMAGES_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("HEATIMAGES_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(format!("cannot start thread pool: {e}")))
}

/// Writes next to the target and renames, so readers never see a partial file.
fn emit(out: &Option<PathBuf>, body: &str) -> Outcome<()> {
    let io = |e: std::io::Error| Failure::Config(format!("cannot write output: {e}"));
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(body.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

struct Prepared {
    domain: DomainDescriptor,
    quad: QuadratureConfig,
}

fn prepare(args: &RunArgs) -> Outcome<Prepared> {
    if !(args.tol > 0.0 && args.tol <= 1e-2) {
        return Err(Failure::Config(format!("--tol must lie in (0, 1e-2], got {}", args.tol)));
    }
    if args.t.is_empty() {
        return Err(Failure::Config("--t needs at least one time".into()));
    }
    if let Some(bad) = args.t.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Failure::Config(format!("times must be positive, got {bad}")));
    }
    let up = args.t.windows(2).all(|w| w[1] > w[0]);
    let down = args.t.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Failure::Config("times must be strictly increasing or decreasing".into()));
    }
    let spec = domain_arg::resolve(&args.domain, &args.params).map_err(Failure::Config)?;
    let domain = spec.build()?;
    let quad = QuadratureConfig {
        scheme: if args.collapsed {
            Scheme::TriangleCollapsedGauss
        } else {
            Scheme::TensorGaussLegendre
        },
        target_rel_error: args.tol,
        points_per_axis: args.points,
        max_refinements: args.max_refinements,
        ..QuadratureConfig::default()
    };
    quad.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(Prepared { domain, quad })
}

#[derive(Serialize)]
struct SeriesReport<'a> {
    domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    expansion: Option<String>,
    rows: &'a [heatimages_core::TraceRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<ConstantReport>,
}

#[derive(Serialize)]
struct ConstantReport {
    value: f64,
    exact: Option<String>,
    method: String,
}

fn series(args: &RunArgs, columns: Columns) -> Outcome<(Prepared, TraceSeries)> {
    let p = prepare(args)?;
    let s = trace_series(&p.domain, &args.t, &p.quad, DEFAULT_EPSILON, columns)?;
    Ok((p, s))
}

fn run_series(args: &RunArgs, columns: Columns) -> Outcome<()> {
    let (p, s) = series(args, columns)?;
    let body = match args.output.format {
        Format::Csv => s.to_csv(),
        Format::Json => to_json(&SeriesReport {
            domain: p.domain.label(),
            expansion: columns.asymptotic.then(|| expansion(&p.domain).map(|e| e.to_string())).transpose()?,
            rows: &s.rows,
            constant: None,
        }),
    };
    emit(&args.output.out, &body)
}

fn sweep(args: &SweepArgs) -> Outcome<()> {
    let run = &args.run;
    if run.t.len() < 3 {
        return Err(Failure::Config("sweep needs at least three times".into()));
    }
    if !(args.extrapolation_tol > 0.0) {
        return Err(Failure::Config("--extrapolation-tol must be positive".into()));
    }
    let (p, s) = series(run, Columns { numeric: true, asymptotic: true })?;
    let e = expansion(&p.domain)?;
    let mut residuals = s
        .rows
        .iter()
        .map(|r| Ok((r.t, r.z_numeric - e.singular_part(r.t)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    residuals.sort_by(|a, b| b.0.total_cmp(&a.0));
    let ex = extrapolate_residuals(&residuals, args.extrapolation_tol)?;
    let exact = format_rational(ex.constant);
    let line = match &exact {
        Some(q) => format!("constant ≈ {} ({q})\n", short(ex.constant)),
        None => format!("constant ≈ {}\n", short(ex.constant)),
    };
    match run.output.format {
        Format::Csv => {
            let mut body = s.to_csv();
            if run.output.out.is_none() {
                body.push_str(&line);
                emit(&None, &body)
            } else {
                emit(&run.output.out, &body)?;
                emit(&None, &line)
            }
        }
        Format::Json => emit(
            &run.output.out,
            &to_json(&SeriesReport {
                domain: p.domain.label(),
                expansion: Some(e.to_string()),
                rows: &s.rows,
                constant: Some(ConstantReport {
                    value: ex.constant,
                    exact,
                    method: format!("{:?}", ex.method),
                }),
            }),
        ),
    }
}

/// Shortest decimal with at most nine places.
fn short(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[derive(Serialize)]
struct DomainRow {
    name: String,
    kind: String,
    dimension: usize,
    bounded: bool,
    admissible: bool,
}

fn domains(args: &OutputArgs) -> Outcome<()> {
    let mut rows = Vec::new();
    for (name, json) in domain_arg::SHORTCUTS {
        let spec: heatimages_core::DomainSpec = serde_json::from_str(json).expect("shortcut specs are valid");
        let d = spec.build()?;
        rows.push(DomainRow {
            name: name.into(),
            kind: d.kind().to_string(),
            dimension: d.dimension(),
            bounded: d.is_bounded(),
            admissible: true,
        });
    }
    for p in 2..=6 {
        for q in p..=6 {
            for r in q..=6 {
                rows.push(DomainRow {
                    name: format!("triangle-{p}{q}{r}"),
                    kind: "Triangle".into(),
                    dimension: 2,
                    bounded: true,
                    admissible: admissible_triangle(p, q, r)?,
                });
            }
        }
    }
    for p in 2..=6 {
        for q in p..=6 {
            for r in q..=6 {
                rows.push(DomainRow {
                    name: format!("trihedral-{p}{q}{r}"),
                    kind: "TrihedralWedge".into(),
                    dimension: 3,
                    bounded: false,
                    admissible: admissible_trihedral(p, q, r)?,
                });
            }
        }
    }
    let body = match args.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("name,kind,dimension,bounded,admissible\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.name, r.kind, r.dimension, r.bounded, r.admissible));
            }
            s
        }
    };
    emit(&args.out, &body)
}

#[derive(Serialize)]
struct ConstantRow {
    name: String,
    value: f64,
    exact: Option<String>,
}

fn constants(args: &OutputArgs) -> Outcome<()> {
    let mut rows = Vec::new();
    let mut push = |name: String, value: f64| {
        rows.push(ConstantRow {
            name,
            exact: format_rational(value),
            value,
        })
    };
    for m in 2..=12 {
        push(format!("wedge-{m}"), wedge_constant(m)?);
    }
    for r in 2..=12 {
        push(format!("trihedral-22{r}"), trihedral_constant(r)?);
    }
    for (name, json) in domain_arg::SHORTCUTS {
        let spec: heatimages_core::DomainSpec = serde_json::from_str(json).expect("shortcut specs are valid");
        push(name.to_string(), topological_constant(&spec.build()?)?);
    }
    // Limit of inscribed regular polygons.
    push("disc".into(), 1.0 / 6.0);
    let body = match args.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("name,value,exact\n");
            for r in &rows {
                s.push_str(&format!("{},{:.16e},{}\n", r.name, r.value, r.exact.as_deref().unwrap_or("")));
            }
            s
        }
    };
    emit(&args.out, &body)
}

fn run(cli: Cli) -> Outcome<()> {
    configure_threads()?;
    match &cli.command {
        Command::Domains(o) => domains(o),
        Command::Constants(o) => constants(o),
        Command::Trace(a) => run_series(a, Columns { numeric: true, asymptotic: false }),
        Command::Asympt(a) => run_series(a, Columns { numeric: false, asymptotic: true }),
        Command::Compare(a) => run_series(a, Columns { numeric: true, asymptotic: true }),
        Command::Sweep(a) => sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("heatimages: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
