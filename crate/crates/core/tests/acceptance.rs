//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! (visible with `--nocapture`) and then asserts it.

use rand::Rng;
use rayon::prelude::*;

use rgg_lab::algorithms::{
    find_hamilton_exact, mst_bottleneck, vertex_connectivity, HamiltonOutcome, SearchBudget,
};
use rgg_lab::construct::{ConstructionParams, KnnParams};
use rgg_lab::experiments::{
    run_coincidence, run_constructive_validation, run_limit_law_connectivity, run_limit_law_hamilton,
    trial_seed, ConstructiveSetup, ExperimentSummary, Model,
};
use rgg_lab::geometry::{expected_isolated, r0_general, r0_planar, sample_poisson, BoxSpec, Norm};
use rgg_lab::graph::{build_knn_directed, undirect, GeometricGraph};
use rgg_lab::hitting::{hitting_radius, MonotoneProperty};
use rgg_lab::rng::rng_from_seed;

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_hitting_order_chain() {
    let mut detail = Vec::new();
    let mut pass = true;
    for (n, seed) in [(50.0, 101), (200.0, 102)] {
        match run_coincidence(Model::Gilbert, n, 1000, seed, SearchBudget::default(), workers()) {
            Ok((s, records)) => {
                let violations = records.iter().filter(|r| r.resolved && !r.chain_holds()).count();
                pass &= violations == 0 && records.len() == 1000;
                detail.push(format!("n={n}: {} resolved, {violations} violations", s.estimate.trials));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("n={n}: {e}"));
            }
        }
    }
    report(1, pass, detail.join("; "));
    assert!(pass, "{detail:?}");
}

#[test]
fn criterion_02_connectivity_radius_is_mst_bottleneck() {
    let mismatches: Vec<u64> = (0..500u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = rng_from_seed(trial_seed(202, i as usize));
            let n = rng.gen_range(3.0..200.0);
            let ps = sample_poisson(BoxSpec::planar(n).unwrap(), i);
            if ps.len() < 2 || ps.len() > 200 {
                return false;
            }
            let h = hitting_radius(&ps, MonotoneProperty::Connected, Norm::EUCLIDEAN, SearchBudget::default()).unwrap();
            h.radius.to_bits() != mst_bottleneck(&ps, Norm::EUCLIDEAN).unwrap().to_bits()
        })
        .collect();
    let pass = mismatches.is_empty();
    report(2, pass, format!("{} mismatches over 500 instances", mismatches.len()));
    assert!(pass, "{mismatches:?}");
}

fn limit_line(s: &ExperimentSummary) -> String {
    format!("p={:.4} ref={:.4} (n={} α={})", s.estimate.p, s.reference.unwrap(), s.config["n"], s.config["alpha"])
}

#[test]
fn criterion_03_connectivity_limit_law() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, seed) in [(0.0, 301), (2.0, 302)] {
        let s = run_limit_law_connectivity(65536.0, alpha, 2000, seed, workers()).unwrap();
        pass &= (s.estimate.p - s.reference.unwrap()).abs() <= 0.08;
        detail.push(limit_line(&s));
    }
    report(3, pass, detail.join("; "));
    assert!(pass, "{detail:?}");
}

#[test]
fn criterion_04_hamilton_limit_bracket() {
    let budget = SearchBudget::default();
    let high = run_limit_law_hamilton(4096.0, 6.0, 200, 401, budget, workers()).unwrap();
    let low = run_limit_law_hamilton(4096.0, -2.0, 200, 402, budget, workers()).unwrap();
    let unresolved_ok = |s: &ExperimentSummary| (s.unresolved as f64) < 0.05 * s.trials as f64;
    let pass = high.estimate.p >= 0.90 && low.estimate.p <= 0.35 && unresolved_ok(&high) && unresolved_ok(&low);
    let detail = format!(
        "α=6: p={:.4} ({} unresolved); α=-2: p={:.4} ({} unresolved)",
        high.estimate.p, high.unresolved, low.estimate.p, low.unresolved
    );
    report(4, pass, detail.clone());
    assert!(pass, "{detail}");
}

#[test]
fn criterion_05_coincidence_trend() {
    let budget = SearchBudget::default();
    let (small, _) = run_coincidence(Model::Gilbert, 50.0, 300, 501, budget, workers()).unwrap();
    let (large, _) = run_coincidence(Model::Gilbert, 400.0, 300, 502, budget, workers()).unwrap();
    let slack = small.estimate.half_width() + large.estimate.half_width();
    let pass = large.estimate.p >= small.estimate.p - slack;
    let detail = format!(
        "n=50: {:.4} ± {:.4}; n=400: {:.4} ± {:.4}",
        small.estimate.p,
        small.estimate.half_width(),
        large.estimate.p,
        large.estimate.half_width()
    );
    report(5, pass, detail.clone());
    assert!(pass, "{detail}");
}

fn sound(s: &ExperimentSummary) -> bool {
    let failures: usize = s.counts.iter().filter(|(k, _)| k.starts_with("failed_")).map(|(_, v)| v).sum();
    s.counts["invalid_cycles"] == 0 && s.counts["unlabelled_failures"] == 0 && failures + s.estimate.successes == s.trials
}

#[test]
fn criterion_06_constructive_soundness() {
    let stated = ConstructiveSetup::Gilbert { params: ConstructionParams::default(), margin: 3.0 };
    let a = run_constructive_validation(500.0, 200, stated, 601, workers()).unwrap();
    // larger squares so that the sea is non-empty and cycles are produced
    let larger = ConstructiveSetup::Gilbert {
        params: ConstructionParams { square_side: Some(2.7), ..Default::default() },
        margin: 3.0,
    };
    let b = run_constructive_validation(500.0, 200, larger, 602, workers()).unwrap();
    let pass = sound(&a) && sound(&b);
    let detail = format!(
        "default squares: {} cycles / 200, failures {:?}; side 2.7: {} cycles / 200, invalid {}",
        a.estimate.successes,
        a.counts.iter().filter(|(k, _)| k.starts_with("failed_")).collect::<Vec<_>>(),
        b.estimate.successes,
        b.counts["invalid_cycles"]
    );
    report(6, pass, detail.clone());
    assert!(pass, "{detail}");
}

fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> GeometricGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    GeometricGraph::from_edges(n, &edges).unwrap()
}

fn connected_without(g: &GeometricGraph, removed: u32) -> bool {
    let n = g.vertex_count();
    let Some(start) = (0..n).find(|v| removed & (1 << v) == 0) else { return true };
    let mut seen = removed | (1 << start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if seen & (1 << w) == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen.count_ones() as usize == n
}

/// Smallest vertex set whose removal disconnects the graph or leaves one
/// vertex; `n - 1` for complete graphs.
fn brute_connectivity(g: &GeometricGraph) -> usize {
    let n = g.vertex_count();
    let mut best = n.saturating_sub(1);
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < best && n - size >= 2 && !connected_without(g, mask) {
            best = size;
        }
    }
    best
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (0..a.len().saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) else { return false };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn brute_hamiltonian(g: &GeometricGraph) -> bool {
    let n = g.vertex_count();
    if n < 3 {
        return false;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        let mut cycle = vec![0];
        cycle.extend(&rest);
        if (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n])) {
            return true;
        }
        if !next_permutation(&mut rest) {
            return false;
        }
    }
}

#[test]
fn criterion_07_oracle_equivalences() {
    let mut rng = rng_from_seed(707);
    let mut conn_mismatch = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.2..0.9);
        let g = random_graph(n, p, &mut rng);
        if vertex_connectivity(&g).unwrap() != brute_connectivity(&g) {
            conn_mismatch += 1;
        }
    }
    let mut ham_mismatch = 0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=9);
        let p = rng.gen_range(0.25..0.8);
        let g = random_graph(n, p, &mut rng);
        let found = match find_hamilton_exact(&g, SearchBudget::default()) {
            HamiltonOutcome::Found(_) => Some(true),
            HamiltonOutcome::ProvenAbsent => Some(false),
            HamiltonOutcome::Exhausted => None,
        };
        if found != Some(brute_hamiltonian(&g)) {
            ham_mismatch += 1;
        }
    }
    let pass = conn_mismatch == 0 && ham_mismatch == 0;
    report(7, pass, format!("connectivity mismatches {conn_mismatch}/200, hamiltonicity mismatches {ham_mismatch}/200"));
    assert!(pass);
}

#[test]
fn criterion_08_knn_degree_bounds() {
    let ks = [3usize, 5, 8];
    let bad: Vec<(u64, usize, usize, usize)> = (0..200u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let ps = sample_poisson(BoxSpec::planar(2000.0).unwrap(), trial_seed(808, i as usize));
            let full = build_knn_directed(&ps, 8, Norm::EUCLIDEAN).unwrap();
            ks.iter()
                .filter_map(|&k| {
                    let g = undirect(&full.truncated(k));
                    let degrees: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
                    let (lo, hi) = (*degrees.iter().min().unwrap(), *degrees.iter().max().unwrap());
                    (lo < k || hi > 6 * k).then_some((i, k, lo, hi))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let pass = bad.is_empty();
    report(8, pass, format!("{} of 600 (trial, k) pairs out of [k, 6k]", bad.len()));
    assert!(pass, "{bad:?}");
}

#[test]
fn criterion_09_critical_radius_consistency() {
    let norm = Norm::EUCLIDEAN;
    let bounds = BoxSpec::planar(1e6).unwrap();
    let r0 = r0_general(&bounds, norm, 1e-9).unwrap();
    let e = expected_isolated(&bounds, norm, r0, 512);
    let planar = r0_planar(1e6).unwrap();
    let radii: Vec<f64> = [1e4, 1e5, 1e6]
        .iter()
        .map(|&n| r0_general(&BoxSpec::planar(n).unwrap(), norm, 1e-9).unwrap())
        .collect();
    let monotone = radii.windows(2).all(|w| w[0] < w[1]);
    let pass = (0.95..=1.05).contains(&e) && r0 >= planar && monotone;
    report(9, pass, format!("E(r0)={e:.4}, r0={r0:.5} vs planar {planar:.5}, r0 over n: {radii:?}"));
    assert!(pass);
}

#[test]
fn criterion_10_isoperimetric_bound() {
    let params = KnnParams { window: 3, min_points: 6, kappa: 4, ..Default::default() };
    let s = run_constructive_validation(2000.0, 100, ConstructiveSetup::Knn { params, margin: 1.0 }, 1001, workers()).unwrap();
    let pass = s.counts["isoperimetric_violations"] == 0 && sound(&s);
    report(
        10,
        pass,
        format!("{} violations over 100 runs, {} cycles", s.counts["isoperimetric_violations"], s.estimate.successes),
    );
    assert!(pass);
}
