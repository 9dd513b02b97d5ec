use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rgg_core::bounds::{BoundParams, BoundReport};
use rgg_core::io::{read_instance, write_edges, write_instance};
use rgg_core::sampler::{sample_poissonized, sample_uniform, SeedSpec};
use rgg_core::spatial_graph::{bfs_distance, build_graph, min_hops_lower, DiameterMode};
use rgg_core::Point;

use crate::config::{default_threshold_sweep, parse_count, Experiment, ExperimentConfig, Format, RSpec};
use crate::experiments::{
    certify_experiment, diameter_experiment, strip_path_experiment, tails_experiment, threshold_sweep,
    verify_bounds,
};
use crate::report::Report;
use crate::HarnessError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rgg", version, about = "Random geometric graph experiments")]
struct Cli {
    /// Master seed; trial i uses the substream (seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: $RGG_JOBS, else one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance and write it as CSV with a JSON sidecar.
    Gen(GenArgs),
    /// Graph and Euclidean distance between two vertices, with bounds.
    Dist(DistArgs),
    /// Check hop-count bounds on random and corner pairs.
    Verify(PairGridArgs),
    /// Connectivity frequency across radii.
    Threshold(ThresholdArgs),
    /// Diameter against the corollary bound.
    Diameter(DiameterArgs),
    /// Greedy strip paths against BFS.
    StripPath(StripArgs),
    /// Lower-chain certificates against BFS.
    Certify(PairGridArgs),
    /// Monte Carlo tails of exponential sums.
    Tails(TailsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Uniform,
    Poissonized,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = parse_count)]
    n: u64,
    #[arg(long)]
    r: RSpec,
    #[arg(long, value_enum, default_value = "uniform")]
    model: ModelArg,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    /// Poissonized model: position of u as `x,y` (random when omitted).
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    u_at: Option<Point>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    v_at: Option<Point>,
    /// Also write the edge list here.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Instance written by `gen`; otherwise one is sampled from --n/--r.
    #[arg(long, conflicts_with_all = ["n", "r"])]
    points: Option<PathBuf>,
    #[arg(long, value_parser = parse_count, requires = "r")]
    n: Option<u64>,
    #[arg(long, requires = "n")]
    r: Option<RSpec>,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long)]
    u: usize,
    #[arg(long)]
    v: usize,
    /// Include a shortest path.
    #[arg(long)]
    path: bool,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, value_parser = parse_count, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<RSpec>,
    #[arg(long, default_value_t = 10)]
    trials: u64,
}

#[derive(Args, Debug)]
struct PairGridArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 20)]
    pairs: u64,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, value_parser = parse_count, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Defaults to ten radii from rc*0.5 to rc*2.
    #[arg(long, value_delimiter = ',')]
    r: Vec<RSpec>,
    #[arg(long, default_value_t = 50)]
    trials: u64,
}

#[derive(Args, Debug)]
struct DiameterArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 1.0)]
    reference_c: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Bounded,
}

#[derive(Args, Debug)]
struct StripArgs {
    #[command(flatten)]
    pairs: PairGridArgs,
    /// Fixed δ; by default min(max(J, γ), F·r^(4/3)) per pair.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args, Debug)]
struct TailsArgs {
    /// Number of summands N.
    #[arg(long, value_parser = parse_count, value_delimiter = ',', default_values_t = vec![1u64, 10, 50, 200])]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.5, 1.0])]
    delta: Vec<f64>,
    /// Monte Carlo sums per cell.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got '{s}'"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    Ok(Point::new(num(x)?, num(y)?))
}

impl GridArgs {
    fn config(&self, experiment: Experiment, seed: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(experiment);
        c.n_list = self.n.clone();
        c.r_list = self.r.clone();
        c.trials = self.trials;
        c.master_seed = seed;
        c
    }
}

impl PairGridArgs {
    fn config(&self, experiment: Experiment, seed: u64) -> ExperimentConfig {
        let mut c = self.grid.config(experiment, seed);
        c.pairs_per_trial = self.pairs;
        c
    }
}

/// Writes `report` and reports whether every row passed.
fn emit<R: Serialize, S: Serialize>(
    report: &Report<R, S>,
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<bool, HarnessError> {
    if let Some(text) = report.emit(out, format)? {
        stdout.write_all(text.as_bytes())?;
    }
    Ok(report.pass)
}

fn write_json(value: &serde_json::Value, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn gen(cli: &Cli, a: &GenArgs, stdout: &mut dyn Write) -> Result<bool, HarnessError> {
    let out = cli
        .out
        .as_deref()
        .ok_or_else(|| HarnessError::Usage("gen needs --out <points.csv>".into()))?;
    let r = a.r.resolve(a.n)?;
    let seed = SeedSpec::new(cli.seed, a.trial);
    let inst = match a.model {
        ModelArg::Uniform => sample_uniform(a.n, r, seed)?,
        ModelArg::Poissonized => sample_poissonized(a.n, r, seed, a.u_at, a.v_at)?,
    };
    write_instance(&inst, out)?;
    let mut summary = json!({
        "points": out,
        "n": a.n,
        "r": r,
        "realized_count": inst.points.len(),
    });
    if let Some(path) = &a.edges {
        let g = build_graph(inst)?;
        summary["edges"] = json!(path);
        summary["edge_count"] = json!(write_edges(&g, path)?);
    }
    writeln!(stdout, "{summary}")?;
    Ok(true)
}

fn dist(cli: &Cli, a: &DistArgs, stdout: &mut dyn Write) -> Result<bool, HarnessError> {
    let inst = match (&a.points, a.n, a.r) {
        (Some(p), _, _) => read_instance(p)?,
        (None, Some(n), Some(spec)) => sample_uniform(n, spec.resolve(n)?, SeedSpec::new(cli.seed, a.trial))?,
        _ => return Err(HarnessError::Usage("dist needs --points or both --n and --r".into())),
    };
    let g = build_graph(inst)?;
    let res = bfs_distance(&g, a.u, a.v, a.path)?;
    let (pu, pv) = (g.point(a.u), g.point(a.v));
    let d_e = (pu - pv).norm();
    let d_g = res.hops.map(u64::from);
    let n = g.instance().n as f64;
    let bounds = (n > 1.0 && g.r() > 0.0)
        .then(|| BoundParams::new(n, g.r(), d_e).map(|p| BoundReport::evaluate(&p, d_g)))
        .transpose()?;
    let value = json!({
        "u": a.u,
        "v": a.v,
        "n": g.instance().n,
        "r": g.r(),
        "d_E": d_e,
        "d_G": d_g,
        "min_hops": min_hops_lower(pu, pv, g.r()),
        "path": res.path,
        "bounds": bounds,
    });
    write_json(&value, cli.out.as_deref(), stdout)?;
    Ok(true)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<bool, HarnessError> {
    let out = cli.out.as_deref();
    let format = cli.format.unwrap_or_default();
    let seed = cli.seed;
    let jobs = cli.jobs;
    match &cli.command {
        Command::Gen(a) => gen(cli, a, stdout),
        Command::Dist(a) => dist(cli, a, stdout),
        Command::Verify(a) => emit(&verify_bounds(&a.config(Experiment::VerifyBounds, seed), jobs)?, out, format, stdout),
        Command::Threshold(a) => {
            let mut c = ExperimentConfig::new(Experiment::ThresholdSweep);
            c.n_list = a.n.clone();
            c.r_list = if a.r.is_empty() { default_threshold_sweep() } else { a.r.clone() };
            c.trials = a.trials;
            c.master_seed = seed;
            emit(&threshold_sweep(&c, jobs)?, out, format, stdout)
        }
        Command::Diameter(a) => {
            let mut c = a.grid.config(Experiment::Diameter, seed);
            c.diameter_mode = a.mode.map(|m| match m {
                ModeArg::Exact => DiameterMode::Exact,
                ModeArg::Bounded => DiameterMode::Bounded,
            });
            c.reference_c = a.reference_c;
            emit(&diameter_experiment(&c, jobs)?, out, format, stdout)
        }
        Command::StripPath(a) => {
            let mut c = a.pairs.config(Experiment::StripPath, seed);
            c.delta = a.delta;
            emit(&strip_path_experiment(&c, jobs)?, out, format, stdout)
        }
        Command::Certify(a) => emit(&certify_experiment(&a.config(Experiment::Certificate, seed), jobs)?, out, format, stdout),
        Command::Tails(a) => {
            let mut c = ExperimentConfig::new(Experiment::Tails);
            c.n_list = a.n.clone();
            c.delta_list = a.delta.clone();
            c.trials = a.trials;
            c.master_seed = seed;
            emit(&tails_experiment(&c, jobs)?, out, format, stdout)
        }
    }
}

/// Runs the command line with explicit output streams and returns the exit
/// code: 0 success, 1 failed check or runtime error, 2 usage error.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "one or more checks failed");
            EXIT_FAILED
        }
        Err(e) if e.is_usage() => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILED
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
