//! Reproducible Monte Carlo experiments.
//!
//! Trial `i` of an experiment keyed by `master_seed` samples its point set
//! with seed `mix_seed(master_seed, i)`. Trials run on a rayon pool of the
//! requested size and results are collected in trial order, so summaries
//! depend only on the configuration and the master seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algorithms::{is_connected, verify_hamilton_cycle, SearchBudget};
use crate::construct::{construct_hamilton, construct_hamilton_knn, ConstructionParams, KnnParams, Stage};
use crate::error::{Error, Result};
use crate::geometry::{sample_poisson, BoxSpec, Norm, PointSet};
use crate::graph::{build_gilbert, build_knn_directed, undirect};
use crate::hitting::{hitting_k, hitting_radius, MonotoneProperty};
use crate::rng::mix_seed;

/// Lower end of the k-NN connectivity window for `k / log n`.
pub const KNN_WINDOW_LOW: f64 = 0.3043;
/// Upper end of the k-NN connectivity window for `k / log n`.
pub const KNN_WINDOW_HIGH: f64 = 0.5139;

const Z95: f64 = 1.959_963_984_540_054;

/// Which graph a coincidence experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Gilbert,
    Knn,
}

/// One trial of a coincidence experiment. Hitting values are radii for
/// the Gilbert model and `k` for the k-NN model; `None` if not computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub count: usize,
    pub h_mindeg2: Option<f64>,
    pub h_2conn: Option<f64>,
    pub h_ham: Option<f64>,
    pub eq_deg: bool,
    pub eq_ham: bool,
    pub resolved: bool,
    pub ms: f64,
}

impl TrialRecord {
    pub const CSV_HEADER: &'static str = "seed,count,h_mindeg2,h_2conn,h_ham,eq_deg,eq_ham,resolved,ms";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:?}"));
        format!(
            "{},{},{},{},{},{},{},{},{:.3}",
            self.seed,
            self.count,
            opt(self.h_mindeg2),
            opt(self.h_2conn),
            opt(self.h_ham),
            u8::from(self.eq_deg),
            u8::from(self.eq_ham),
            u8::from(self.resolved),
            self.ms
        )
    }

    /// True when all three values are present and ordered.
    pub fn chain_holds(&self) -> bool {
        match (self.h_mindeg2, self.h_2conn, self.h_ham) {
            (Some(a), Some(b), Some(c)) => a <= b && b <= c,
            _ => true,
        }
    }
}

pub fn write_csv<W: Write>(records: &[TrialRecord], mut w: W) -> Result<()> {
    writeln!(w, "{}", TrialRecord::CSV_HEADER)?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// A proportion with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: usize,
    pub trials: usize,
    pub p: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Estimate {
    /// With no trials the estimate is 0 and the interval is `[0, 1]`.
    pub fn new(successes: usize, trials: usize) -> Self {
        assert!(successes <= trials);
        if trials == 0 {
            return Self { successes, trials, p: 0.0, lo: 0.0, hi: 1.0 };
        }
        let (lo, hi) = wilson_interval(successes, trials);
        let p = successes as f64 / trials as f64;
        Self { successes, trials, p, lo: lo.min(p), hi: hi.max(p) }
    }

    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Result of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    /// Every input, echoed.
    pub config: BTreeMap<String, Value>,
    pub trials: usize,
    pub master_seed: u64,
    pub estimate: Estimate,
    pub unresolved: usize,
    pub reference: Option<f64>,
    /// Further proportions (equality fractions, check pass rates).
    pub rates: BTreeMap<String, Estimate>,
    /// Counts such as failures per stage.
    pub counts: BTreeMap<String, usize>,
    /// Scalar statistics such as means.
    pub stats: BTreeMap<String, f64>,
}

impl ExperimentSummary {
    fn new(experiment: &str, config: BTreeMap<String, Value>, trials: usize, master_seed: u64, estimate: Estimate) -> Self {
        Self {
            experiment: experiment.to_string(),
            config,
            trials,
            master_seed,
            estimate,
            unresolved: 0,
            reference: None,
            rates: BTreeMap::new(),
            counts: BTreeMap::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Limit of the connectivity and Hamiltonicity probabilities: `e^{-e^{-α}}`.
pub fn limit_probability(alpha: f64) -> f64 {
    (-(-alpha).exp()).exp()
}

/// Radius with `π r² = log n + α`.
pub fn connectivity_radius(n: f64, alpha: f64) -> Result<f64> {
    radius_from_area(n.ln() + alpha)
}

/// Radius with `π r² = log n + log log n + α`.
pub fn hamilton_radius(n: f64, alpha: f64) -> Result<f64> {
    if n <= std::f64::consts::E {
        return Err(Error::InvalidParameter(format!("log log n needs n > e, got {n}")));
    }
    radius_from_area(n.ln() + n.ln().ln() + alpha)
}

fn radius_from_area(area: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::InvalidParameter(format!("π r² = {area} gives no positive radius")));
    }
    Ok((area / std::f64::consts::PI).sqrt())
}

/// Seed of trial `i`.
pub fn trial_seed(master_seed: u64, i: usize) -> u64 {
    mix_seed(master_seed, i as u64)
}

fn run_trials<T: Send>(workers: usize, trials: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..trials).into_par_iter().map(f).collect()))
}

fn planar(n: f64) -> Result<BoxSpec> {
    BoxSpec::planar(n)
}

fn hitting_value(ps: &PointSet, model: Model, p: MonotoneProperty, budget: SearchBudget) -> (Option<f64>, bool) {
    match model {
        Model::Gilbert => match hitting_radius(ps, p, Norm::EUCLIDEAN, budget) {
            Ok(h) => (Some(h.radius), h.is_resolved()),
            Err(_) => (None, false),
        },
        Model::Knn => match hitting_k(ps, p, Norm::EUCLIDEAN, budget) {
            Ok(h) => (Some(h.k as f64), h.is_resolved()),
            Err(_) => (None, false),
        },
    }
}

/// Computes `ℋ(δ≥2)`, `ℋ(2-connected)` and `ℋ(hamiltonian)` on one sample.
pub fn coincidence_trial(n: f64, model: Model, seed: u64, budget: SearchBudget) -> Result<TrialRecord> {
    let start = Instant::now();
    let ps = sample_poisson(planar(n)?, seed);
    let (h_mindeg2, r1) = hitting_value(&ps, model, MonotoneProperty::MinDegree(2), budget);
    let (h_2conn, r2) = hitting_value(&ps, model, MonotoneProperty::KConnected(2), budget);
    let (h_ham, r3) = hitting_value(&ps, model, MonotoneProperty::Hamiltonian, budget);
    let resolved = r1 && r2 && r3;
    Ok(TrialRecord {
        seed,
        count: ps.len(),
        h_mindeg2,
        h_2conn,
        h_ham,
        eq_deg: resolved && h_mindeg2 == h_2conn,
        eq_ham: resolved && h_2conn == h_ham,
        resolved,
        ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Fraction of samples whose 2-connectivity and Hamiltonicity hitting
/// values coincide (the estimate), and the same for minimum degree 2 and
/// 2-connectivity (rate `eq_deg`). Unresolved trials are left out of both.
///
/// A resolved trial violating `ℋ(δ≥2) ≤ ℋ(2-conn) ≤ ℋ(ham)` is an error.
pub fn run_coincidence(
    model: Model,
    n: f64,
    trials: usize,
    master_seed: u64,
    budget: SearchBudget,
    workers: usize,
) -> Result<(ExperimentSummary, Vec<TrialRecord>)> {
    if n < 10.0 {
        return Err(Error::InvalidParameter(format!("coincidence needs n >= 10, got {n}")));
    }
    let records = run_trials(workers, trials, |i| coincidence_trial(n, model, trial_seed(master_seed, i), budget))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = records.iter().find(|r| r.resolved && !r.chain_holds()) {
        return Err(Error::InvariantViolated(format!("hitting order broken in trial with seed {}", bad.seed)));
    }
    let resolved: Vec<&TrialRecord> = records.iter().filter(|r| r.resolved).collect();
    let eq_ham = resolved.iter().filter(|r| r.eq_ham).count();
    let eq_deg = resolved.iter().filter(|r| r.eq_deg).count();
    let config = BTreeMap::from([
        ("model".to_string(), json!(model)),
        ("n".to_string(), json!(n)),
        ("budget".to_string(), json!(budget.max_nodes)),
    ]);
    let mut s = ExperimentSummary::new("coincidence", config, trials, master_seed, Estimate::new(eq_ham, resolved.len()));
    s.unresolved = trials - resolved.len();
    s.rates.insert("eq_deg".into(), Estimate::new(eq_deg, resolved.len()));
    s.rates.insert("eq_ham".into(), s.estimate);
    s.counts.insert("chain_violations".into(), 0);
    Ok((s, records))
}

/// Fraction of samples connected at `π r² = log n + α`.
pub fn run_limit_law_connectivity(n: f64, alpha: f64, trials: usize, master_seed: u64, workers: usize) -> Result<ExperimentSummary> {
    let r = connectivity_radius(n, alpha)?;
    let bounds = planar(n)?;
    let hits = run_trials(workers, trials, |i| -> Result<bool> {
        let ps = sample_poisson(bounds, trial_seed(master_seed, i));
        Ok(is_connected(&build_gilbert(&ps, r, Norm::EUCLIDEAN)?))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let config = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("alpha".to_string(), json!(alpha)),
        ("radius".to_string(), json!(r)),
    ]);
    let mut s = ExperimentSummary::new(
        "limit_law_connectivity",
        config,
        trials,
        master_seed,
        Estimate::new(hits.iter().filter(|&&h| h).count(), trials),
    );
    s.reference = Some(limit_probability(alpha));
    Ok(s)
}

/// Fraction of samples Hamiltonian at `π r² = log n + log log n + α`.
/// Searches that exhaust `budget` are counted as unresolved and left out.
pub fn run_limit_law_hamilton(
    n: f64,
    alpha: f64,
    trials: usize,
    master_seed: u64,
    budget: SearchBudget,
    workers: usize,
) -> Result<ExperimentSummary> {
    let r = hamilton_radius(n, alpha)?;
    let bounds = planar(n)?;
    let outcomes = run_trials(workers, trials, |i| -> Result<(Option<bool>, bool)> {
        let ps = sample_poisson(bounds, trial_seed(master_seed, i));
        if ps.len() < 3 {
            return Ok((Some(false), false));
        }
        let g = build_gilbert(&ps, r, Norm::EUCLIDEAN)?;
        let mindeg_ok = MonotoneProperty::MinDegree(2).holds(&g, budget) == Some(true);
        Ok((MonotoneProperty::Hamiltonian.holds(&g, budget), mindeg_ok))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let resolved = outcomes.iter().filter(|o| o.0.is_some()).count();
    let hits = outcomes.iter().filter(|o| o.0 == Some(true)).count();
    let config = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("alpha".to_string(), json!(alpha)),
        ("radius".to_string(), json!(r)),
        ("budget".to_string(), json!(budget.max_nodes)),
    ]);
    let mut s = ExperimentSummary::new("limit_law_hamilton", config, trials, master_seed, Estimate::new(hits, resolved));
    s.unresolved = trials - resolved;
    s.reference = Some(limit_probability(alpha));
    s.rates.insert("min_degree_2".into(), Estimate::new(outcomes.iter().filter(|o| o.1).count(), trials));
    Ok(s)
}

/// Distribution of the connectivity hitting `k` relative to `log n`. The
/// estimate is the fraction of samples with `k / log n` inside the window
/// `[0.3043 (1 - slack), 0.5139 (1 + slack)]`.
pub fn run_knn_window(n: f64, trials: usize, master_seed: u64, slack: f64, workers: usize) -> Result<(ExperimentSummary, Vec<usize>)> {
    if n < 100.0 {
        return Err(Error::InvalidParameter(format!("k-NN window needs n >= 100, got {n}")));
    }
    let bounds = planar(n)?;
    let ks = run_trials(workers, trials, |i| -> Result<usize> {
        let ps = sample_poisson(bounds, trial_seed(master_seed, i));
        Ok(hitting_k(&ps, MonotoneProperty::Connected, Norm::EUCLIDEAN, SearchBudget::default())?.k)
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let log_n = n.ln();
    let (lo, hi) = (KNN_WINDOW_LOW * (1.0 - slack), KNN_WINDOW_HIGH * (1.0 + slack));
    let inside = ks.iter().filter(|&&k| (lo..=hi).contains(&(k as f64 / log_n))).count();
    let config = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("slack".to_string(), json!(slack)),
    ]);
    let mut s = ExperimentSummary::new("knn_window", config, trials, master_seed, Estimate::new(inside, trials));
    let ratios: Vec<f64> = ks.iter().map(|&k| k as f64 / log_n).collect();
    if !ratios.is_empty() {
        s.stats.insert("mean_k_over_log_n".into(), ratios.iter().sum::<f64>() / ratios.len() as f64);
        s.stats.insert("min_k".into(), *ks.iter().min().unwrap() as f64);
        s.stats.insert("max_k".into(), *ks.iter().max().unwrap() as f64);
    }
    s.stats.insert("window_low".into(), lo);
    s.stats.insert("window_high".into(), hi);
    Ok((s, ks))
}

/// Construction scheme for [`run_constructive_validation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ConstructiveSetup {
    /// Radius `margin · ℋ(2-connected)`.
    Gilbert { params: ConstructionParams, margin: f64 },
    /// `k = ⌈margin · k(2-connected)⌉`.
    Knn { params: KnnParams, margin: f64 },
}

struct ConstructiveTrial {
    cycle: Option<bool>,
    failed_stage: Option<Stage>,
    checks: Vec<(String, bool)>,
    isoperimetric_violations: usize,
}

/// Runs the constructive algorithm on fresh samples. The estimate is the
/// fraction of runs returning a cycle; `counts` holds failures per stage
/// (`failed_<stage>`), `invalid_cycles` (cycles the verifier rejects) and
/// `isoperimetric_violations` (components with `|Aᶜ∖N| > u²/2 + u`), and
/// `rates` holds how often each structural check held.
pub fn run_constructive_validation(
    n: f64,
    trials: usize,
    setup: ConstructiveSetup,
    master_seed: u64,
    workers: usize,
) -> Result<ExperimentSummary> {
    let bounds = planar(n)?;
    let results = run_trials(workers, trials, |i| -> Result<ConstructiveTrial> {
        let ps = sample_poisson(bounds, trial_seed(master_seed, i));
        let budget = SearchBudget::default();
        let (report, graph) = match setup {
            ConstructiveSetup::Gilbert { params, margin } => {
                let r = margin * hitting_radius(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, budget)?.radius;
                (construct_hamilton(&ps, r, &params, Norm::EUCLIDEAN)?, build_gilbert(&ps, r, Norm::EUCLIDEAN)?)
            }
            ConstructiveSetup::Knn { params, margin } => {
                let k0 = hitting_k(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, budget)?.k;
                let k = ((margin * k0 as f64).ceil() as usize).clamp(1, ps.len() - 1);
                let g = undirect(&build_knn_directed(&ps, k, Norm::EUCLIDEAN)?);
                (construct_hamilton_knn(&ps, k, &params, Norm::EUCLIDEAN)?, g)
            }
        };
        let isoperimetric_violations = match setup {
            ConstructiveSetup::Knn { .. } => report
                .components
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .filter(|c| {
                    let u = c.size as f64;
                    c.cutoff_outside as f64 > u * u / 2.0 + u
                })
                .count(),
            ConstructiveSetup::Gilbert { .. } => 0,
        };
        Ok(ConstructiveTrial {
            cycle: report.cycle().map(|c| verify_hamilton_cycle(&graph, &c)),
            failed_stage: report.failure().map(|(s, _)| s),
            checks: report
                .assumption_checks
                .iter()
                .filter(|c| c.evaluated > 0)
                .map(|c| (c.name.clone(), c.held))
                .collect(),
            isoperimetric_violations,
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let cycles = results.iter().filter(|t| t.cycle.is_some()).count();
    let mut config = BTreeMap::from([("n".to_string(), json!(n))]);
    if let Value::Object(map) = serde_json::to_value(setup)? {
        config.extend(map);
    }
    let mut s = ExperimentSummary::new("constructive_validation", config, trials, master_seed, Estimate::new(cycles, trials));
    s.counts.insert("invalid_cycles".into(), results.iter().filter(|t| t.cycle == Some(false)).count());
    s.counts.insert("unlabelled_failures".into(), results.iter().filter(|t| t.cycle.is_none() && t.failed_stage.is_none()).count());
    s.counts.insert("isoperimetric_violations".into(), results.iter().map(|t| t.isoperimetric_violations).sum());
    for t in &results {
        if let Some(stage) = t.failed_stage {
            *s.counts.entry(format!("failed_{}", stage_key(stage))).or_default() += 1;
        }
    }
    let mut held: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (name, ok) in results.iter().flat_map(|t| &t.checks) {
        let e = held.entry(name.clone()).or_default();
        e.0 += usize::from(*ok);
        e.1 += 1;
    }
    for (name, (ok, total)) in held {
        s.rates.insert(name, Estimate::new(ok, total));
    }
    Ok(s)
}

/// Snake-case stage name, as used in summaries.
pub fn stage_key(stage: Stage) -> String {
    serde_json::to_value(stage).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_contains_estimate_and_shrinks() {
        for (k, n) in [(0, 10), (3, 10), (10, 10), (37, 100)] {
            let e = Estimate::new(k, n);
            assert!(e.lo <= e.p && e.p <= e.hi);
        }
        let small = Estimate::new(50, 100);
        let large = Estimate::new(5000, 10000);
        assert!(large.half_width() < small.half_width());
        // textbook value for 37/100
        let (lo, hi) = wilson_interval(37, 100);
        assert!((lo - 0.2815).abs() < 1e-3 && (hi - 0.4682).abs() < 1e-3);
        assert_eq!(Estimate::new(0, 0).hi, 1.0);
    }

    #[test]
    fn limit_values() {
        assert!((limit_probability(0.0) - 0.367_879).abs() < 1e-6);
        assert!((limit_probability(4.0) - 0.981_851).abs() < 1e-6);
        assert!((limit_probability(2.0) - 0.873_423).abs() < 1e-6);
        assert!(connectivity_radius(100.0, -10.0).is_err());
        assert!(hamilton_radius(2.0, 0.0).is_err());
        let r = connectivity_radius(std::f64::consts::PI.exp(), 0.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coincidence_is_ordered_and_worker_independent() {
        let budget = SearchBudget::new(200_000);
        let (a, ra) = run_coincidence(Model::Gilbert, 40.0, 24, 5, budget, 1).unwrap();
        let (b, rb) = run_coincidence(Model::Gilbert, 40.0, 24, 5, budget, 4).unwrap();
        assert_eq!(a, b);
        let strip = |r: &[TrialRecord]| r.iter().map(|t| TrialRecord { ms: 0.0, ..t.clone() }).collect::<Vec<_>>();
        assert_eq!(strip(&ra), strip(&rb));
        assert!(ra.iter().all(|r| r.chain_holds()));
        assert!(a.estimate.trials + a.unresolved == 24);
        let mut csv = Vec::new();
        write_csv(&ra, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("seed,count,h_mindeg2,h_2conn,h_ham,eq_deg,eq_ham,resolved,ms\n"));
        assert_eq!(text.lines().count(), 25);
        assert!(run_coincidence(Model::Gilbert, 5.0, 1, 0, budget, 1).is_err());
    }

    #[test]
    fn knn_coincidence_records_k() {
        let (s, records) = run_coincidence(Model::Knn, 60.0, 6, 1, SearchBudget::new(200_000), 2).unwrap();
        assert_eq!(records.len(), 6);
        for r in records.iter().filter(|r| r.resolved) {
            let k = r.h_2conn.unwrap();
            assert_eq!(k, k.round());
            assert!(r.chain_holds());
        }
        assert_eq!(s.config["model"], json!("knn"));
    }

    #[test]
    fn connectivity_limit_law_runs() {
        let s = run_limit_law_connectivity(500.0, 4.0, 40, 3, 2).unwrap();
        assert_eq!(s.reference, Some(limit_probability(4.0)));
        assert!(s.estimate.p > 0.3);
        assert_eq!(s, run_limit_law_connectivity(500.0, 4.0, 40, 3, 3).unwrap());
        let back = ExperimentSummary::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn hamilton_limit_law_runs() {
        let s = run_limit_law_hamilton(200.0, 4.0, 12, 9, SearchBudget::default(), 2).unwrap();
        assert_eq!(s.estimate.trials + s.unresolved, 12);
        // Hamiltonian implies minimum degree two
        assert!(s.estimate.successes <= s.rates["min_degree_2"].successes);
    }

    #[test]
    fn knn_window_records_every_trial() {
        let (s, ks) = run_knn_window(400.0, 10, 2, 0.5, 2).unwrap();
        assert_eq!(ks.len(), 10);
        assert!(ks.iter().all(|&k| k >= 1));
        assert!(s.stats["mean_k_over_log_n"] > 0.0);
        assert_eq!(ks, run_knn_window(400.0, 10, 2, 0.5, 1).unwrap().1);
        assert!(run_knn_window(50.0, 1, 0, 0.0, 1).is_err());
    }

    #[test]
    fn constructive_validation_is_sound() {
        let setup = ConstructiveSetup::Gilbert {
            params: ConstructionParams { square_side: Some(4.0), ..Default::default() },
            margin: 3.0,
        };
        let s = run_constructive_validation(400.0, 6, setup, 11, 2).unwrap();
        assert_eq!(s.counts["invalid_cycles"], 0);
        assert_eq!(s.counts["unlabelled_failures"], 0);
        let failures: usize = s.counts.iter().filter(|(k, _)| k.starts_with("failed_")).map(|(_, v)| v).sum();
        assert_eq!(failures + s.estimate.successes, 6);
        let stages = ["tessellate", "decompose", "structure", "stitch", "tree_cycle"];
        for key in s.counts.keys().filter_map(|k| k.strip_prefix("failed_")) {
            assert!(stages.contains(&key));
        }

        let knn = ConstructiveSetup::Knn { params: KnnParams::default(), margin: 1.0 };
        let s = run_constructive_validation(300.0, 4, knn, 11, 2).unwrap();
        assert_eq!(s.counts["invalid_cycles"], 0);
        assert_eq!(s.counts["isoperimetric_violations"], 0);
    }
}
