//! Hitting radii and hitting `k` for monotone graph properties.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::{
    is_connected, is_k_connected, min_degree, mst_bottleneck, search_hamilton, HamiltonOutcome,
    SearchBudget,
};
use crate::error::{Error, Result};
use crate::geometry::{Norm, PointSet};
use crate::graph::{build_knn_directed, sorted_pairs_within, undirect, GeometricGraph, Provenance};

/// A graph property preserved by adding edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneProperty {
    MinDegree(usize),
    KConnected(usize),
    Hamiltonian,
    Connected,
}

impl MonotoneProperty {
    /// Fewest vertices for which the complete graph has the property.
    pub fn min_vertices(&self) -> usize {
        match *self {
            MonotoneProperty::MinDegree(k) | MonotoneProperty::KConnected(k) => k + 1,
            MonotoneProperty::Hamiltonian => 3,
            MonotoneProperty::Connected => 2,
        }
    }

    /// Evaluates the property; `None` when the Hamilton search ran out of budget.
    pub fn holds(&self, g: &GeometricGraph, budget: SearchBudget) -> Option<bool> {
        match *self {
            MonotoneProperty::MinDegree(k) => Some(g.vertex_count() > 0 && min_degree(g) >= k),
            MonotoneProperty::KConnected(k) => Some(is_k_connected(g, k)),
            MonotoneProperty::Connected => Some(is_connected(g)),
            MonotoneProperty::Hamiltonian => match search_hamilton(g, budget).0 {
                HamiltonOutcome::Found(_) => Some(true),
                HamiltonOutcome::ProvenAbsent => Some(false),
                HamiltonOutcome::Exhausted => None,
            },
        }
    }
}

impl fmt::Display for MonotoneProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneProperty::MinDegree(k) => write!(f, "min_degree:{k}"),
            MonotoneProperty::KConnected(k) => write!(f, "k_connected:{k}"),
            MonotoneProperty::Hamiltonian => f.write_str("hamiltonian"),
            MonotoneProperty::Connected => f.write_str("connected"),
        }
    }
}

impl FromStr for MonotoneProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown property `{s}`"));
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name, arg) {
            ("connected", None) => Ok(MonotoneProperty::Connected),
            ("hamiltonian", None) => Ok(MonotoneProperty::Hamiltonian),
            ("min_degree", Some(k)) => Ok(MonotoneProperty::MinDegree(k)),
            ("k_connected", Some(k)) => Ok(MonotoneProperty::KConnected(k)),
            ("biconnected" | "2conn", None) => Ok(MonotoneProperty::KConnected(2)),
            _ => Err(bad()),
        }
    }
}

/// Smallest radius at which the Gilbert graph has the property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingResult {
    pub radius: f64,
    /// Radii whose Hamilton search ran out of budget and was counted as a success.
    pub unresolved_at: Vec<f64>,
}

impl HittingResult {
    pub fn is_resolved(&self) -> bool {
        self.unresolved_at.is_empty()
    }
}

/// Smallest `k` at which the undirected k-NN graph has the property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingK {
    pub k: usize,
    pub unresolved_at: Vec<usize>,
}

impl HittingK {
    pub fn is_resolved(&self) -> bool {
        self.unresolved_at.is_empty()
    }
}

enum Eval {
    Holds,
    Fails,
    Unresolved,
}

fn evaluate(p: MonotoneProperty, g: &GeometricGraph, budget: SearchBudget) -> Eval {
    match p.holds(g, budget) {
        Some(true) => Eval::Holds,
        Some(false) => Eval::Fails,
        None => Eval::Unresolved,
    }
}

fn check_size(ps: &PointSet, p: MonotoneProperty) -> Result<()> {
    let n = ps.len();
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    if n < p.min_vertices() {
        return Err(Error::Unattainable(format!("{p} needs at least {} points, got {n}", p.min_vertices())));
    }
    Ok(())
}

/// Smallest index in `lo..hi` where `test` holds, given that it holds at `hi - 1`
/// and is monotone. Gallops up from `lo`, then bisects.
fn first_true(lo: usize, hi: usize, mut test: impl FnMut(usize) -> bool) -> usize {
    let (mut a, mut b) = (lo, hi - 1);
    let mut step = 1;
    let mut probe = lo;
    while probe < b {
        if test(probe) {
            b = probe;
            break;
        }
        a = probe + 1;
        probe = lo + step;
        step *= 2;
    }
    while a < b {
        let mid = a + (b - a) / 2;
        if test(mid) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    b
}

/// Sorted pairs up to some radius, grouped by distinct distance.
struct Ladder {
    n: usize,
    norm: Norm,
    pairs: Vec<(f64, usize, usize)>,
    /// `ends[i]`: number of pairs at distance at most the `i`-th distinct value.
    ends: Vec<usize>,
}

impl Ladder {
    fn new(ps: &PointSet, norm: Norm, radius: f64) -> Self {
        let pairs = sorted_pairs_within(ps, radius, norm);
        let mut ends = Vec::new();
        for i in 0..pairs.len() {
            if i + 1 == pairs.len() || pairs[i + 1].0 != pairs[i].0 {
                ends.push(i + 1);
            }
        }
        Self { n: ps.len(), norm, pairs, ends }
    }

    fn radius(&self, step: usize) -> f64 {
        self.pairs[self.ends[step] - 1].0
    }

    fn graph(&self, step: usize) -> GeometricGraph {
        let r = self.radius(step);
        let pairs = self.pairs[..self.ends[step]].iter().map(|&(_, i, j)| (i, j));
        GeometricGraph::from_pairs(self.n, pairs, Provenance::Gilbert { r, norm: self.norm })
    }

    fn step_of(&self, r: f64) -> usize {
        self.ends.partition_point(|&e| self.pairs[e - 1].0 < r)
    }
}

/// Largest distance between two points of the box in any p-norm with `p >= 1`.
fn diameter_cap(ps: &PointSet) -> f64 {
    ps.bounds().side() * ps.dimension() as f64
}

fn search_radius(
    ps: &PointSet,
    p: MonotoneProperty,
    norm: Norm,
    budget: SearchBudget,
    seed: f64,
    lower: Option<f64>,
) -> Result<HittingResult> {
    let cap = diameter_cap(ps);
    let mut radius = seed.min(cap);
    let mut unresolved = Vec::new();
    let ladder = loop {
        let ladder = Ladder::new(ps, norm, radius);
        if !ladder.ends.is_empty() {
            let top = ladder.ends.len() - 1;
            match evaluate(p, &ladder.graph(top), budget) {
                Eval::Holds => break ladder,
                Eval::Unresolved => {
                    unresolved.push(ladder.radius(top));
                    break ladder;
                }
                Eval::Fails => {}
            }
        }
        if radius >= cap {
            return Err(Error::Unattainable(format!("{p} fails on the complete graph")));
        }
        radius = (radius * 2.0).min(cap);
    };

    let steps = ladder.ends.len();
    let lo = lower.map_or(0, |r| ladder.step_of(r).min(steps - 1));
    let mut memo: HashMap<usize, bool> = HashMap::new();
    let step = first_true(lo, steps, |s| {
        if s == steps - 1 {
            return true;
        }
        *memo.entry(s).or_insert_with(|| match evaluate(p, &ladder.graph(s), budget) {
            Eval::Holds => true,
            Eval::Fails => false,
            Eval::Unresolved => {
                unresolved.push(ladder.radius(s));
                true
            }
        })
    });
    unresolved.sort_by(f64::total_cmp);
    Ok(HittingResult { radius: ladder.radius(step), unresolved_at: unresolved })
}

/// Smallest pairwise distance `r` such that the Gilbert graph `G(ps, r)` has `p`.
///
/// Hamilton searches that exhaust `budget` are counted as successes and
/// listed in [`HittingResult::unresolved_at`].
pub fn hitting_radius(ps: &PointSet, p: MonotoneProperty, norm: Norm, budget: SearchBudget) -> Result<HittingResult> {
    check_size(ps, p)?;
    let mst = mst_bottleneck(ps, norm)?;
    match p {
        MonotoneProperty::Connected | MonotoneProperty::MinDegree(_) => search_radius(ps, p, norm, budget, mst, None),
        MonotoneProperty::KConnected(_) => search_radius(ps, p, norm, budget, mst, Some(mst)),
        // every Hamiltonian graph is 2-connected
        MonotoneProperty::Hamiltonian => {
            let lower = hitting_radius(ps, MonotoneProperty::KConnected(2), norm, budget)?.radius;
            search_radius(ps, p, norm, budget, lower, Some(lower))
        }
    }
}

/// Smallest `k` such that the undirected k-NN graph has `p`.
///
/// Out-lists are nested in `k` under the fixed tie-break, so the property is
/// monotone in `k`.
pub fn hitting_k(ps: &PointSet, p: MonotoneProperty, norm: Norm, budget: SearchBudget) -> Result<HittingK> {
    check_size(ps, p)?;
    let n = ps.len();
    let lo = match p {
        MonotoneProperty::Hamiltonian => hitting_k(ps, MonotoneProperty::KConnected(2), norm, budget)?.k,
        // every vertex already has degree at least k
        MonotoneProperty::MinDegree(k) => k.max(1),
        _ => 1,
    };
    let mut unresolved = Vec::new();
    let mut top = (2 * lo).max(8).min(n - 1);
    let knn = loop {
        let knn = build_knn_directed(ps, top, norm)?;
        match evaluate(p, &undirect(&knn), budget) {
            Eval::Holds => break knn,
            Eval::Unresolved => {
                unresolved.push(top);
                break knn;
            }
            Eval::Fails if top == n - 1 => {
                return Err(Error::Unattainable(format!("{p} fails at k = N - 1")));
            }
            Eval::Fails => top = (2 * top).min(n - 1),
        }
    };
    let lo = lo.min(top);
    let mut memo: HashMap<usize, bool> = HashMap::new();
    let k = first_true(lo, top + 1, |k| {
        if k == top {
            return true;
        }
        *memo.entry(k).or_insert_with(|| match evaluate(p, &undirect(&knn.truncated(k)), budget) {
            Eval::Holds => true,
            Eval::Fails => false,
            Eval::Unresolved => {
                unresolved.push(k);
                true
            }
        })
    });
    unresolved.sort_unstable();
    Ok(HittingK { k, unresolved_at: unresolved })
}
