//! Command-line front end.
//!
//! Data goes to the output stream (JSON, or the file formats of the owning
//! modules); diagnostics go to the error stream. Exit codes: 0 success,
//! 1 domain failure (construction failed, cycle invalid, I/O), 2 usage.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algorithms::{verify_hamilton_cycle, HamiltonCycle, SearchBudget, DEFAULT_MAX_NODES};
use crate::construct::{construct_hamilton, construct_hamilton_knn, ConstructionParams, KnnParams};
use crate::error::{Error, Result};
use crate::experiments::{
    connectivity_radius, hamilton_radius, run_coincidence, run_constructive_validation, run_knn_window,
    run_limit_law_connectivity, run_limit_law_hamilton, write_csv, ConstructiveSetup, Model,
};
use crate::geometry::{sample_poisson, BoxSpec, Norm, PointSet};
use crate::graph::{build_gilbert, build_knn_directed, undirect, GeometricGraph};
use crate::hitting::{hitting_k, hitting_radius, MonotoneProperty};

#[derive(Parser, Debug)]
#[command(name = "rgg", version, about = "Random geometric graph laboratory")]
struct Cli {
    /// File of `key=value` lines merged into the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a unit-intensity Poisson process in a box of volume n.
    Sample(SampleArgs),
    /// Build a Gilbert or k-NN graph on a point file.
    Build(BuildArgs),
    /// Hitting radius (or k) of a monotone property.
    Hitting(HittingArgs),
    /// Run the constructive Hamilton cycle algorithm.
    Construct(ConstructArgs),
    /// Run a Monte Carlo experiment.
    Experiment(ExperimentArgs),
    /// Check a cycle file against a graph file.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModelArg {
    Gilbert,
    Knn,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Gilbert => Model::Gilbert,
            ModelArg::Knn => Model::Knn,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Law {
    /// π r² = log n + α
    Connectivity,
    /// π r² = log n + log log n + α
    Hamilton,
}

#[derive(Args, Debug, Clone)]
struct RadiusArgs {
    /// Absolute radius.
    #[arg(long, conflicts_with = "alpha")]
    r: Option<f64>,
    /// Radius from π r² = log n + α (or + log log n with --law hamilton).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    law: Option<Law>,
}

impl RadiusArgs {
    fn resolve(&self, n: f64, default_law: Law) -> Result<Option<f64>> {
        match (self.r, self.alpha) {
            (Some(r), _) => Ok(Some(r)),
            (None, Some(a)) => match self.law.unwrap_or(default_law) {
                Law::Connectivity => connectivity_radius(n, a).map(Some),
                Law::Hamilton => hamilton_radius(n, a).map(Some),
            },
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_enum, default_value = "gilbert")]
    model: ModelArg,
    #[command(flatten)]
    radius: RadiusArgs,
    #[arg(long)]
    k: Option<usize>,
    /// ℓp norm; `inf` for the maximum norm.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HittingArgs {
    #[arg(long)]
    points: PathBuf,
    /// connected, hamiltonian, min_degree:K, k_connected:K or 2conn.
    #[arg(long)]
    property: MonotoneProperty,
    #[arg(long, value_enum, default_value = "gilbert")]
    model: ModelArg,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    budget: u64,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_enum, default_value = "gilbert")]
    model: ModelArg,
    #[command(flatten)]
    radius: RadiusArgs,
    /// Multiplier on the 2-connectivity hitting radius (or k) when no
    /// radius or k is given.
    #[arg(long, default_value_t = 3.0)]
    margin: f64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    /// Points a square needs to be full.
    #[arg(long)]
    m: Option<usize>,
    /// Square side, overriding the default from the critical radius.
    #[arg(long)]
    side: Option<f64>,
    /// k-NN: window D of the blow-up, in squares.
    #[arg(long)]
    window: Option<usize>,
    /// k-NN: connectivity assumed for the pick count.
    #[arg(long)]
    kappa: Option<usize>,
    /// Start from the asymptotic constants instead of the desk defaults.
    #[arg(long)]
    asymptotic: bool,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    budget: u64,
    /// Report file (JSON); printed when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cycle file written on success.
    #[arg(long)]
    cycle_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ExperimentKind {
    Coincidence,
    Connectivity,
    Hamilton,
    KnnWindow,
    Construct,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    budget: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "gilbert")]
    model: ModelArg,
    #[arg(long, default_value_t = 3.0)]
    margin: f64,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    side: Option<f64>,
    /// Relative widening of the k-NN window.
    #[arg(long, default_value_t = 0.0)]
    slack: f64,
    /// Per-trial CSV (coincidence only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Summary file (JSON); printed when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cycle: PathBuf,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidParameter(_) | Error::InvalidBox(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Appends `--key value` for every config-file entry whose flag is absent.
fn merge_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)?;
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("{path}:{}: expected key=value", i + 1)))?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        let given = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match value.trim() {
            "true" => extra.push(flag),
            "false" => {}
            v => extra.push(format!("{flag}={v}")),
        }
    }
    args.extend(extra);
    Ok(args)
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    match cmd {
        Command::Sample(a) => sample(a, out),
        Command::Build(a) => build(a, out, err),
        Command::Hitting(a) => hitting(a, out),
        Command::Construct(a) => construct(a, out, err),
        Command::Experiment(a) => experiment(a, out, err),
        Command::Verify(a) => verify(a, out),
    }
}

fn norm_of(p: f64) -> Result<Norm> {
    Norm::new(p)
}

fn read_points(path: &Path) -> Result<PointSet> {
    PointSet::read_from(BufReader::new(File::open(path)?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Result<Status> {
    let ps = sample_poisson(BoxSpec::new(a.n, a.d)?, a.seed);
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            ps.write_to(&mut w)?;
            w.flush()?;
            print_json(
                out,
                &json!({"config": {"n": a.n, "d": a.d, "seed": a.seed, "out": path}, "count": ps.len()}),
            )?;
        }
        None => ps.write_to(out)?,
    }
    Ok(Status::Ok)
}

fn knn_graph(ps: &PointSet, k: usize, norm: Norm) -> Result<GeometricGraph> {
    Ok(undirect(&build_knn_directed(ps, k, norm)?))
}

fn build(a: BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    let ps = read_points(&a.points)?;
    let norm = norm_of(a.p)?;
    let (g, config) = match a.model {
        ModelArg::Gilbert => {
            let r = a
                .radius
                .resolve(ps.bounds().intensity(), Law::Connectivity)?
                .ok_or_else(|| Error::InvalidParameter("gilbert graphs need --r or --alpha".into()))?;
            if a.radius.alpha.is_some() {
                writeln!(err, "resolved r = {r}")?;
            }
            (build_gilbert(&ps, r, norm)?, json!({"model": "gilbert", "r": r, "alpha": a.radius.alpha, "p": a.p}))
        }
        ModelArg::Knn => {
            let k = a.k.ok_or_else(|| Error::InvalidParameter("knn graphs need --k".into()))?;
            (knn_graph(&ps, k, norm)?, json!({"model": "knn", "k": k, "p": a.p}))
        }
    };
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            g.write_to(&mut w)?;
            w.flush()?;
            print_json(out, &json!({"config": config, "vertices": g.vertex_count(), "edges": g.edge_count()}))?;
        }
        None => g.write_to(out)?,
    }
    Ok(Status::Ok)
}

fn hitting(a: HittingArgs, out: &mut dyn Write) -> Result<Status> {
    let ps = read_points(&a.points)?;
    let norm = norm_of(a.p)?;
    let budget = SearchBudget::new(a.budget);
    let config = json!({
        "points": a.points, "property": a.property.to_string(), "model": format!("{:?}", a.model).to_lowercase(),
        "p": a.p, "budget": a.budget,
    });
    let body = match a.model {
        ModelArg::Gilbert => {
            let h = hitting_radius(&ps, a.property, norm, budget)?;
            json!({"config": config, "radius": h.radius, "resolved": h.is_resolved(), "unresolved_at": h.unresolved_at})
        }
        ModelArg::Knn => {
            let h = hitting_k(&ps, a.property, norm, budget)?;
            json!({"config": config, "k": h.k, "resolved": h.is_resolved(), "unresolved_at": h.unresolved_at})
        }
    };
    print_json(out, &body)?;
    Ok(Status::Ok)
}

fn construct(a: ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    let ps = read_points(&a.points)?;
    let norm = norm_of(a.p)?;
    let budget = SearchBudget::new(a.budget);
    let (report, graph, config) = match a.model {
        ModelArg::Gilbert => {
            let mut params = if a.asymptotic { ConstructionParams::asymptotic() } else { ConstructionParams::default() };
            params.c = a.c.unwrap_or(params.c);
            params.min_points = a.m.unwrap_or(params.min_points);
            params.square_side = a.side.or(params.square_side);
            let r = match a.radius.resolve(ps.bounds().intensity(), Law::Hamilton)? {
                Some(r) => r,
                None => a.margin * hitting_radius(&ps, MonotoneProperty::KConnected(2), norm, budget)?.radius,
            };
            writeln!(err, "resolved r = {r}")?;
            let report = construct_hamilton(&ps, r, &params, norm)?;
            (report, build_gilbert(&ps, r, norm)?, json!({"model": "gilbert", "r": r, "params": params, "p": a.p}))
        }
        ModelArg::Knn => {
            let mut params = if a.asymptotic { KnnParams::asymptotic() } else { KnnParams::default() };
            params.min_points = a.m.unwrap_or(params.min_points);
            params.square_side = a.side.or(params.square_side);
            params.window = a.window.unwrap_or(params.window);
            params.kappa = a.kappa.unwrap_or(params.kappa);
            let k = match a.k {
                Some(k) => k,
                None => {
                    let k0 = hitting_k(&ps, MonotoneProperty::KConnected(2), norm, budget)?.k;
                    ((a.margin * k0 as f64).ceil() as usize).clamp(1, ps.len().saturating_sub(1).max(1))
                }
            };
            writeln!(err, "resolved k = {k}")?;
            let report = construct_hamilton_knn(&ps, k, &params, norm)?;
            (report, knn_graph(&ps, k, norm)?, json!({"model": "knn", "k": k, "params": params, "p": a.p}))
        }
    };
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let mut body = serde_json::to_value(&report)?;
    if let Value::Object(map) = &mut body {
        map.insert("config".into(), config);
    }
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{}", serde_json::to_string_pretty(&body)?)?;
            w.flush()?;
        }
        None => print_json(out, &body)?,
    }
    match report.cycle() {
        Some(cycle) => {
            if !verify_hamilton_cycle(&graph, &cycle) {
                writeln!(err, "constructed cycle failed verification")?;
                return Ok(Status::Failed);
            }
            if let Some(path) = &a.cycle_out {
                let mut w = create(path)?;
                cycle.write_to(&mut w)?;
                w.flush()?;
            }
            writeln!(err, "cycle through {} points", cycle.len())?;
            Ok(Status::Ok)
        }
        None => {
            if let Some((stage, why)) = report.failure() {
                writeln!(err, "construction failed at {stage}: {why}")?;
            }
            Ok(Status::Failed)
        }
    }
}

fn experiment(a: ExperimentArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(Error::InvalidParameter("--workers must be positive".into()));
    }
    let budget = SearchBudget::new(a.budget);
    let summary = match a.kind {
        ExperimentKind::Coincidence => {
            let (s, records) = run_coincidence(a.model.into(), a.n, a.trials, a.seed, budget, workers)?;
            if let Some(path) = &a.csv {
                let mut w = create(path)?;
                write_csv(&records, &mut w)?;
                w.flush()?;
            }
            s
        }
        ExperimentKind::Connectivity => run_limit_law_connectivity(a.n, a.alpha, a.trials, a.seed, workers)?,
        ExperimentKind::Hamilton => run_limit_law_hamilton(a.n, a.alpha, a.trials, a.seed, budget, workers)?,
        ExperimentKind::KnnWindow => run_knn_window(a.n, a.trials, a.seed, a.slack, workers)?.0,
        ExperimentKind::Construct => {
            let setup = match a.model {
                ModelArg::Gilbert => {
                    let mut params = ConstructionParams::default();
                    params.c = a.c.unwrap_or(params.c);
                    params.min_points = a.m.unwrap_or(params.min_points);
                    params.square_side = a.side;
                    ConstructiveSetup::Gilbert { params, margin: a.margin }
                }
                ModelArg::Knn => {
                    let mut params = KnnParams::default();
                    params.min_points = a.m.unwrap_or(params.min_points);
                    params.square_side = a.side;
                    ConstructiveSetup::Knn { params, margin: a.margin }
                }
            };
            run_constructive_validation(a.n, a.trials, setup, a.seed, workers)?
        }
    };
    writeln!(
        err,
        "{}: p = {:.4} [{:.4}, {:.4}] over {} resolved trials, {} unresolved",
        summary.experiment, summary.estimate.p, summary.estimate.lo, summary.estimate.hi, summary.estimate.trials, summary.unresolved
    )?;
    let json = summary.to_json()?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => writeln!(out, "{json}")?,
    }
    Ok(Status::Ok)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<Status> {
    let g = GeometricGraph::read_from(BufReader::new(File::open(&a.graph)?))?;
    let cycle = HamiltonCycle::read_from(BufReader::new(File::open(&a.cycle)?))?;
    if verify_hamilton_cycle(&g, &cycle) {
        writeln!(out, "VALID")?;
        Ok(Status::Ok)
    } else {
        writeln!(out, "INVALID")?;
        Ok(Status::Failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("rgg").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn p(dir: &tempfile::TempDir, name: &str) -> String {
        dir.path().join(name).to_string_lossy().into_owned()
    }

    #[test]
    fn sample_build_construct_verify_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let pts = p(&dir, "pts.txt");
        let (code, out, _) = call(&["sample", "--n", "300", "--d", "2", "--seed", "7", "--out", &pts]);
        assert_eq!(code, 0);
        let echo: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(echo["config"]["seed"], 7);
        let ps = read_points(Path::new(&pts)).unwrap();
        assert_eq!(ps.len() as u64, echo["count"].as_u64().unwrap());
        assert_eq!(ps, sample_poisson(BoxSpec::planar(300.0).unwrap(), 7));

        let cyc = p(&dir, "c.txt");
        let (code, out, err) = call(&["construct", "--points", &pts, "--side", "2.6", "--cycle-out", &cyc]);
        assert_eq!(code, 0, "{err}");
        let report: Value = serde_json::from_str(&out).unwrap();
        let r = report["config"]["r"].as_f64().unwrap();

        let graph = p(&dir, "g.txt");
        let (code, _, _) = call(&["build", "--points", &pts, "--r", &r.to_string(), "--out", &graph]);
        assert_eq!(code, 0);
        let (code, out, _) = call(&["verify", "--graph", &graph, "--cycle", &cyc]);
        assert_eq!((code, out.trim()), (0, "VALID"));

        std::fs::write(&cyc, "0 1 2\n").unwrap();
        let (code, out, _) = call(&["verify", "--graph", &graph, "--cycle", &cyc]);
        assert_eq!((code, out.trim()), (1, "INVALID"));
    }

    #[test]
    fn failed_construction_exits_one_and_keeps_report() {
        let dir = tempfile::tempdir().unwrap();
        let pts = p(&dir, "pts.txt");
        call(&["sample", "--n", "500", "--seed", "1", "--out", &pts]);
        let rep = p(&dir, "rep.json");
        let (code, _, err) = call(&["construct", "--points", &pts, "--out", &rep]);
        assert_eq!(code, 1);
        assert!(err.contains("stage 2"), "{err}");
        let report = crate::construct::ConstructionReport::from_json(&std::fs::read_to_string(&rep).unwrap());
        assert!(report.unwrap().failure().is_some());
    }

    #[test]
    fn hitting_matches_library() {
        let dir = tempfile::tempdir().unwrap();
        let pts = p(&dir, "pts.txt");
        call(&["sample", "--n", "60", "--seed", "3", "--out", &pts]);
        let (code, out, _) = call(&["hitting", "--points", &pts, "--property", "hamiltonian"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let ps = read_points(Path::new(&pts)).unwrap();
        let h = hitting_radius(&ps, MonotoneProperty::Hamiltonian, Norm::EUCLIDEAN, SearchBudget::default()).unwrap();
        assert_eq!(v["radius"].as_f64().unwrap(), h.radius);
        assert_eq!(v["resolved"], json!(h.is_resolved()));
        let (code, out, _) = call(&["hitting", "--points", &pts, "--property", "connected", "--model", "knn"]);
        assert_eq!(code, 0);
        assert!(serde_json::from_str::<Value>(&out).unwrap()["k"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        let (code, _, err) = call(&["sample", "--n", "10", "--bogus"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        assert_eq!(call(&["sample", "--n", "-4"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn config_file_merges_with_flags_winning() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = p(&dir, "run.cfg");
        std::fs::write(&cfg, "# experiment defaults\nn = 200\ntrials = 8\nseed = 4\nalpha=2\n").unwrap();
        let (code, out, _) = call(&["experiment", "connectivity", "--config", &cfg, "--seed", "5", "--workers", "2"]);
        assert_eq!(code, 0);
        let s = crate::experiments::ExperimentSummary::from_json(&out).unwrap();
        assert_eq!(s.master_seed, 5);
        assert_eq!(s.trials, 8);
        assert_eq!(s.config["alpha"], json!(2.0));
        let (_, again, _) = call(&["experiment", "connectivity", "--config", &cfg, "--seed", "5", "--workers", "1"]);
        assert_eq!(out, again);
    }

    #[test]
    fn alpha_resolves_radius() {
        let dir = tempfile::tempdir().unwrap();
        let pts = p(&dir, "pts.txt");
        call(&["sample", "--n", "100", "--seed", "2", "--out", &pts]);
        let graph = p(&dir, "g.txt");
        let (code, out, err) = call(&["build", "--points", &pts, "--alpha", "-1", "--out", &graph]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        let r = v["config"]["r"].as_f64().unwrap();
        assert!((r - connectivity_radius(100.0, -1.0).unwrap()).abs() < 1e-12);
        assert!(err.contains("resolved r"));
        let g = GeometricGraph::read_from(BufReader::new(File::open(&graph).unwrap())).unwrap();
        assert_eq!(g.edge_count() as u64, v["edges"].as_u64().unwrap());
    }

    #[test]
    fn coincidence_writes_csv() {
        let dir = tempfile::tempdir().unwrap();
        let csv = p(&dir, "trials.csv");
        let (code, _, err) = call(&["experiment", "coincidence", "--n", "30", "--trials", "5", "--csv", &csv, "--workers", "2"]);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().next().unwrap(), crate::experiments::TrialRecord::CSV_HEADER);
        assert_eq!(text.lines().count(), 6);
    }
}
