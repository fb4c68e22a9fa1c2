//! `theta-route`: generate Poisson samples, build Θ-graphs, route on them,
//! audit the results and run the routing-ratio experiments.
//!
//! Exit codes: 0 success, 1 runtime error (I/O, malformed files), 2 usage,
//! 3 loop detected, 4 dead end or left the window, 5 step limit,
//! 6 certification failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use theta_route::graph::{build_theta_graph, read_points, write_points, GraphDump, Parity, ThetaGraph};
use theta_route::lab::{
    format_sig, predicted_average, predicted_ratio, ratio_experiment, sample_poisson, write_csv,
    ExperimentConfig, Window,
};
use theta_route::oracle::{all_pass, certify_graph, certify_trace, Check};
use theta_route::routing::{route, Algorithm, Status};

#[derive(Parser)]
#[command(name = "theta-route", version, about = "Online routing on Θ-graphs and half-Θ6 triangulations")]
struct Cli {
    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true, env = "THETA_ROUTE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Poisson point process into a point file.
    Gen(GenArgs),
    /// Build a Θ-graph from a point file and write it as JSON.
    Build(BuildArgs),
    /// Route between two vertices and print the trace as JSON.
    Route(RouteArgs),
    /// Audit a graph and, optionally, one route on it.
    Certify(CertifyArgs),
    /// Run a routing-ratio experiment described by a JSON config.
    Experiment(ExperimentArgs),
    /// Print the predicted expected routing ratio.
    Predict(PredictArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Intensity, in points per unit area.
    #[arg(long)]
    lambda: f64,
    /// Sampling window as `xmin,ymin,xmax,ymax`.
    #[arg(long, default_value = "0,0,1,1")]
    window: Window,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Point file: two reals per line, `#` comments.
    #[arg(long)]
    points: PathBuf,
    /// Number of cones.
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// Cones kept: all, even or odd.
    #[arg(long, default_value = "all")]
    parity: Parity,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RouteSpec {
    /// Algorithm: theta-k, positive, memoryless, constmem, bose or theta6-auto.
    #[arg(long)]
    algo: Algorithm,
    /// Source vertex index.
    #[arg(long)]
    s: usize,
    /// Target vertex index.
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
}

#[derive(Args)]
struct RouteArgs {
    /// Graph dump written by `build`.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    spec: RouteSpec,
}

#[derive(Args)]
#[command(group(ArgGroup::new("route").multiple(true).requires_all(["algo", "s", "t"])))]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Also route with this algorithm and audit the trace.
    #[arg(long, group = "route")]
    algo: Option<Algorithm>,
    #[arg(long, group = "route")]
    s: Option<usize>,
    #[arg(long, group = "route")]
    t: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    /// Ratio bound for the route (default: the algorithm's worst case).
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON file with the fields of an experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Results CSV (standard output if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("at").required(true).args(["phi", "average"])))]
struct PredictArgs {
    #[arg(long)]
    algo: Algorithm,
    /// Angle of `st` in radians, within [π/3, π/2].
    #[arg(long)]
    phi: Option<f64>,
    /// Average over the angle range instead.
    #[arg(long)]
    average: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<theta_route::Error> for Failure {
    fn from(e: theta_route::Error) -> Self {
        use theta_route::Error;
        let code = match e {
            Error::ContractViolation(_) | Error::DegenerateInput(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure { code: 1, message: format!("{}: {e}", p.display()) })?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_graph(path: &Path) -> Result<ThetaGraph, Failure> {
    let dump: GraphDump = serde_json::from_reader(open(path)?)?;
    Ok(dump.into_graph()?)
}

fn check_vertex(g: &ThetaGraph, v: usize) -> Result<(), Failure> {
    if v < g.len() {
        Ok(())
    } else {
        Err(Failure::usage(format!("vertex {v} out of range (graph has {} points)", g.len())))
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Arrived => 0,
        Status::LoopDetected => 3,
        Status::DeadEnd | Status::LeftWindow => 4,
        Status::StepLimit => 5,
    }
}

fn gen(a: GenArgs) -> Outcome {
    if !(a.lambda >= 0.0 && a.lambda.is_finite()) {
        return Err(Failure::usage(format!("lambda must be finite and non-negative, got {}", a.lambda)));
    }
    let points = sample_poisson(&a.window, a.lambda, a.seed);
    let header = vec![
        format!("poisson sample, lambda={} window={} seed={}", a.lambda, a.window, a.seed),
        format!("{} points", points.len()),
    ];
    let mut w = output(a.out.as_deref())?;
    write_points(&mut w, &header, &points)?;
    w.flush()?;
    Ok(0)
}

fn build(a: BuildArgs) -> Outcome {
    let points = read_points(open(&a.points)?)?;
    let g = build_theta_graph(&points, a.k, a.parity)?;
    let mut w = output(a.out.as_deref())?;
    serde_json::to_writer(&mut w, &GraphDump::from_graph(&g))?;
    writeln!(w)?;
    w.flush()?;
    Ok(0)
}

fn route_cmd(a: RouteArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    check_vertex(&g, a.spec.s)?;
    check_vertex(&g, a.spec.t)?;
    let trace = route(a.spec.algo, &g, a.spec.s, a.spec.t, a.spec.max_steps)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &trace)?;
    writeln!(out)?;
    if let Some(d) = &trace.detail {
        eprintln!("{}: {d}", trace.status);
    }
    Ok(status_code(trace.status))
}

fn certify(a: CertifyArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let mut checks: Vec<Check> = certify_graph(&g);
    if let (Some(algo), Some(s), Some(t)) = (a.algo, a.s, a.t) {
        check_vertex(&g, s)?;
        check_vertex(&g, t)?;
        let bound = match a.bound.or(algo.ratio_bound()) {
            Some(b) => b,
            None => return Err(Failure::usage(format!("{algo} has no ratio bound; pass --bound"))),
        };
        let trace = route(algo, &g, s, t, a.max_steps)?;
        checks.extend(certify_trace(&trace, &g, bound));
    }
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &checks)?;
    writeln!(out)?;
    Ok(if all_pass(&checks) { 0 } else { 6 })
}

fn experiment(a: ExperimentArgs) -> Outcome {
    let config: ExperimentConfig = serde_json::from_reader(open(&a.config)?)?;
    config.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let stats = ratio_experiment(&config)?;
    let mut w = output(a.out.as_deref())?;
    write_csv(&mut w, &[stats])?;
    w.flush()?;
    Ok(0)
}

fn predict(a: PredictArgs) -> Outcome {
    let value = match a.phi {
        Some(phi) => predicted_ratio(a.algo, phi),
        None => predicted_average(a.algo),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    println!("{}", format_sig(value));
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Route(a) => route_cmd(a),
        Command::Certify(a) => certify(a),
        Command::Experiment(a) => experiment(a),
        Command::Predict(a) => predict(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
