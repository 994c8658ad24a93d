//! Constructive Hamilton cycles from a tessellation of the box.
//!
//! The box is cut into small squares. Squares holding fewer than `M`
//! points are non-full; nearby non-full squares form components, and the
//! largest component of full squares is the sea. Points cut off from the
//! sea by a component are routed onto closed walks anchored in sea squares
//! (using vertex-disjoint paths found by max-flow), and a walk around a
//! doubled spanning tree of the sea then strings everything into a cycle.
//!
//! Square-level adjacency is only used for planning. Every edge placed in
//! the output is checked against the real graph, so a construction either
//! returns a verified cycle or fails with the stage that broke.

mod decompose;
mod stitch;
mod tessellation;
mod tour;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use decompose::{
    classify_and_decompose, decompose, diagonal_boundary_check, AssumptionCheck, NonFullComponent,
    SeaDecomposition, SquareRules, StageError,
};
pub use stitch::{stitch_component, stitch_component_knn, AnchoredWalk, VertexPool};
pub use tessellation::{SquareGraph, Tessellation, MAX_SQUARES};
pub use tour::{build_tree_cycle, sea_spanning_tree, tree_tour};

use decompose::{check_common, CheckLog};
use crate::algorithms::{verify_hamilton_cycle, HamiltonCycle};
use crate::error::{Error, Result};
use crate::geometry::{ball_box_volume, r0_general, r0_planar, BoxSpec, Norm, PointSet};
use crate::graph::{build_gilbert, build_knn_directed, undirect, GeometricGraph};

/// Parameters of the Gilbert-graph construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Squares have side `r0 / c`.
    pub c: usize,
    /// Squares with fewer points are non-full.
    pub min_points: usize,
    /// Explicit square side, replacing `r0 / c`.
    #[serde(default)]
    pub square_side: Option<f64>,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        Self { c: 4, min_points: 4, square_side: None }
    }
}

impl ConstructionParams {
    /// Asymptotic-scale constants (c = 1000, M = 10^7).
    pub fn asymptotic() -> Self {
        Self { c: 1000, min_points: 10_000_000, square_side: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < 3 {
            return Err(Error::InvalidParameter(format!("c must be at least 3, got {}", self.c)));
        }
        if self.min_points < 1 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        if let Some(s) = self.square_side {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!("square side must be positive, got {s}")));
            }
        }
        Ok(())
    }

    /// Bound `U` on the size of a non-full component: `ceil(pi (c+2)^2)` in
    /// the plane, `ceil((1 + 1/c) V_d c^d)` for an interior cube otherwise.
    pub fn component_bound(&self, d: usize) -> usize {
        let c = self.c as f64;
        if d == 2 {
            (PI * (c + 2.0).powi(2)).ceil() as usize
        } else {
            ((1.0 + 1.0 / c) * Norm::EUCLIDEAN.unit_ball_volume(d) * c.powi(d as i32)).ceil() as usize
        }
    }

    /// `M > 2U + 2 + (2c+1)^d`: enough points per sea square for stitching
    /// and the tree walk.
    pub fn budget_inequality_holds(&self, d: usize) -> bool {
        let u = self.component_bound(d) as f64;
        self.min_points as f64 > 2.0 * u + 2.0 + (2.0 * self.c as f64 + 1.0).powi(d as i32)
    }

    fn rules(&self, d: usize) -> SquareRules {
        SquareRules {
            square_graph: SquareGraph::euclidean(d, self.c as f64 - d as f64),
            join: 4 * self.c - 1,
            blowup: 2 * self.c,
            min_points: self.min_points,
        }
    }
}

/// Parameters of the k-nearest-neighbour construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    /// `r_- = coef * sqrt(ln n)` when radii are not taken from the graph.
    pub r_minus_coef: f64,
    /// `r_+ = coef * sqrt(ln n)`; longer edges are flagged.
    pub r_plus_coef: f64,
    /// Non-full squares within ℓ∞ distance `2D - 1` are joined; blow-ups have radius `D`.
    pub window: usize,
    pub min_points: usize,
    /// Connectivity the stitching may rely on; more picks per component are flagged.
    pub kappa: usize,
    /// Flagged when a non-full component reaches this size.
    pub component_bound: usize,
    /// Take `r_-` as the shortest non-edge of the actual graph.
    pub realised_radii: bool,
    #[serde(default)]
    pub square_side: Option<f64>,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self {
            r_minus_coef: 0.035,
            r_plus_coef: 2.3,
            window: 3,
            min_points: 6,
            kappa: 4,
            component_bound: 7000,
            realised_radii: true,
            square_side: None,
        }
    }
}

impl KnnParams {
    /// Asymptotic-scale constants (D = 10^4, M = 10^9, kappa = 5 * 10^7).
    pub fn asymptotic() -> Self {
        Self {
            window: 10_000,
            min_points: 1_000_000_000,
            kappa: 50_000_000,
            realised_radii: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 1 || self.min_points < 1 || self.kappa < 1 {
            return Err(Error::InvalidParameter("D, M and kappa must be positive".into()));
        }
        if !(self.r_minus_coef > 0.0 && self.r_plus_coef > 0.0) {
            return Err(Error::InvalidParameter("radius coefficients must be positive".into()));
        }
        if let Some(s) = self.square_side {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!("square side must be positive, got {s}")));
            }
        }
        Ok(())
    }

    fn rules(&self, d: usize) -> SquareRules {
        SquareRules {
            square_graph: SquareGraph::king(d),
            join: 2 * self.window - 1,
            blowup: self.window,
            min_points: self.min_points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Tessellate,
    Decompose,
    Structure,
    Stitch,
    TreeCycle,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, name) = match self {
            Stage::Tessellate => (1, "tessellate"),
            Stage::Decompose => (2, "decompose"),
            Stage::Structure => (3, "structure"),
            Stage::Stitch => (4, "stitch"),
            Stage::TreeCycle => (5, "tree cycle"),
        };
        write!(f, "stage {i} ({name})")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Cycle { order: Vec<usize> },
    Failed { stage: Stage, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageLog {
    pub stage: Stage,
    pub stats: BTreeMap<String, f64>,
}

/// Per-component sizes, as recorded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub size: usize,
    pub cutoff: usize,
    pub cutoff_outside: usize,
    pub close: usize,
    pub far: usize,
    pub blowup: usize,
}

impl From<&NonFullComponent> for ComponentSummary {
    fn from(c: &NonFullComponent) -> Self {
        Self {
            size: c.size(),
            cutoff: c.cutoff.len(),
            cutoff_outside: c.cutoff_outside(),
            close: c.close.len(),
            far: c.far.len(),
            blowup: c.blowup.len(),
        }
    }
}

/// Everything a construction run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub outcome: Outcome,
    pub stage_log: Vec<StageLog>,
    pub assumption_checks: Vec<AssumptionCheck>,
    pub warnings: Vec<String>,
    /// Filled once the decomposition has been computed.
    pub components: Option<Vec<ComponentSummary>>,
}

impl ConstructionReport {
    pub fn cycle(&self) -> Option<HamiltonCycle> {
        match &self.outcome {
            Outcome::Cycle { order } => Some(HamiltonCycle::new(order.clone())),
            Outcome::Failed { .. } => None,
        }
    }

    pub fn failure(&self) -> Option<(Stage, &str)> {
        match &self.outcome {
            Outcome::Failed { stage, reason } => Some((*stage, reason)),
            Outcome::Cycle { .. } => None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&AssumptionCheck> {
        self.assumption_checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Square side for the Gilbert construction: `r0 / c`, with `r0` from the
/// closed form in the plane and from `E(r0) = 1` otherwise.
fn critical_radius(bounds: &BoxSpec, norm: Norm) -> Result<f64> {
    if bounds.dimension() == 2 {
        r0_planar(bounds.intensity())
    } else {
        r0_general(bounds, norm, 1e-6)
    }
}

/// Tessellates with side `r0 / c` (or the explicit side in `params`).
pub fn tessellate(ps: &PointSet, params: &ConstructionParams, norm: Norm) -> Result<Tessellation> {
    params.validate()?;
    let s = match params.square_side {
        Some(s) => s,
        None => critical_radius(ps.bounds(), norm)? / params.c as f64,
    };
    Tessellation::with_side(ps, s)
}

/// Evaluates the structural assumptions of the Gilbert construction on
/// every component. Pure diagnostics: nothing here aborts a run.
pub fn check_structural_lemmas(
    dec: &SeaDecomposition,
    t: &Tessellation,
    params: &ConstructionParams,
    bounds: &BoxSpec,
    norm: Norm,
) -> Vec<AssumptionCheck> {
    let d = t.dimension();
    let c = params.c as f64;
    let s = t.side();
    let mut log = CheckLog::default();
    for comp in &dec.components {
        let size_ok = if d == 2 {
            comp.size() <= params.component_bound(2)
        } else {
            let r0 = c * s;
            let mut threshold = f64::INFINITY;
            for &q in &comp.squares {
                let centre: Vec<f64> = t
                    .coords(q)
                    .iter()
                    .map(|&i| ((i as f64 + 0.5) * s).min(bounds.side()))
                    .collect();
                if let Ok(v) = ball_box_volume(&centre, r0, bounds, norm, 64) {
                    threshold = threshold.min((1.0 + 1.0 / c) * v / s.powi(d as i32));
                }
            }
            (comp.size() as f64) < threshold
        };
        log.record("component_size", Some(size_ok));

        let far_diameter = linf_diameter(t, &comp.far);
        let reach = c - d as f64;
        // pairwise centre distances only matter once the ℓ∞ extent is small
        let far_joined = far_diameter as f64 <= reach
            && comp.far.iter().enumerate().all(|(i, &a)| {
                comp.far[i + 1..].iter().all(|&b| t.centre_distance(a, b) <= reach + 1e-9)
            });
        log.record("far_diameter", Some(far_diameter as f64 <= c / 10.0));
        log.record("far_squares_pairwise_joined", Some(far_joined));

        let mut contained = true;
        for &q in &comp.cutoff {
            dec.square_graph().for_each_neighbour(t, q, |x| contained &= comp.in_blowup(x));
        }
        log.record("cutoff_neighbours_in_blowup", Some(contained));
    }
    check_common(dec, t, &mut log);
    log.finish()
}

fn linf_diameter(t: &Tessellation, squares: &[usize]) -> usize {
    let d = t.dimension();
    let (mut lo, mut hi) = (vec![usize::MAX; d], vec![0; d]);
    for &q in squares {
        for (axis, x) in t.coords(q).into_iter().enumerate() {
            lo[axis] = lo[axis].min(x);
            hi[axis] = hi[axis].max(x);
        }
    }
    if squares.is_empty() {
        return 0;
    }
    (0..d).map(|a| hi[a] - lo[a]).max().unwrap_or(0)
}

/// Structural assumptions of the k-nearest-neighbour construction.
pub fn check_knn_structure(dec: &SeaDecomposition, t: &Tessellation, params: &KnnParams) -> Vec<AssumptionCheck> {
    let mut log = CheckLog::default();
    for comp in &dec.components {
        log.record("component_size", Some(comp.size() < params.component_bound));
        let u = comp.size() as f64;
        log.record("isoperimetric", Some(comp.cutoff_outside() as f64 <= u * u / 2.0));
        log.record("cutoff_in_blowup", Some(comp.cutoff.iter().all(|&q| comp.in_blowup(q))));
    }
    check_common(dec, t, &mut log);
    log.finish()
}

enum Scheme<'a> {
    Gilbert(&'a ConstructionParams),
    Knn(&'a KnnParams),
}

struct Run {
    report: ConstructionReport,
}

impl Run {
    fn new(warnings: Vec<String>) -> Self {
        Self {
            report: ConstructionReport {
                outcome: Outcome::Failed { stage: Stage::Tessellate, reason: String::new() },
                stage_log: Vec::new(),
                assumption_checks: Vec::new(),
                warnings,
                components: None,
            },
        }
    }

    fn log(&mut self, stage: Stage, stats: &[(&str, f64)]) {
        self.report.stage_log.push(StageLog {
            stage,
            stats: stats.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        });
    }

    fn fail(mut self, stage: Stage, reason: impl Into<String>) -> ConstructionReport {
        self.report.outcome = Outcome::Failed { stage, reason: reason.into() };
        self.report
    }
}

fn run_pipeline(g: &GeometricGraph, ps: &PointSet, side: f64, scheme: Scheme, norm: Norm, mut run: Run) -> ConstructionReport {
    let d = ps.dimension();
    let t = match Tessellation::with_side(ps, side) {
        Ok(t) => t,
        Err(e) => return run.fail(Stage::Tessellate, e.to_string()),
    };
    let max_count = t.counts().iter().copied().max().unwrap_or(0);
    run.log(
        Stage::Tessellate,
        &[
            ("square_side", side),
            ("squares", t.square_count() as f64),
            ("points", t.point_count() as f64),
            ("mean_points_per_square", t.point_count() as f64 / t.square_count() as f64),
            ("max_points_per_square", max_count as f64),
        ],
    );

    let rules = match scheme {
        Scheme::Gilbert(p) => p.rules(d),
        Scheme::Knn(p) => p.rules(d),
    };
    let dec = decompose(&t, &rules);
    let largest = dec.components.iter().map(|c| c.size()).max().unwrap_or(0);
    run.log(
        Stage::Decompose,
        &[
            ("non_full", dec.non_full.len() as f64),
            ("components", dec.components.len() as f64),
            ("largest_component", largest as f64),
            ("sea", dec.sea.len() as f64),
        ],
    );
    run.report.components = Some(dec.components.iter().map(ComponentSummary::from).collect());

    run.report.assumption_checks = match scheme {
        Scheme::Gilbert(p) => check_structural_lemmas(&dec, &t, p, ps.bounds(), norm),
        Scheme::Knn(p) => check_knn_structure(&dec, &t, p),
    };
    let violated = run.report.assumption_checks.iter().filter(|c| !c.held).count();
    run.log(Stage::Structure, &[("checks", run.report.assumption_checks.len() as f64), ("violated", violated as f64)]);
    if dec.sea.is_empty() {
        return run.fail(
            Stage::Decompose,
            format!("sea empty: no square holds {} points", rules.min_points),
        );
    }

    let mut pool = VertexPool::new(&t);
    let mut walks = Vec::new();
    let mut owner = vec![usize::MAX; t.square_count()];
    let mut overlap = false;
    let mut picks_ok = true;
    for i in 0..dec.components.len() {
        let stitched = match scheme {
            Scheme::Gilbert(_) => stitch_component(g, &t, &dec, i, &mut pool),
            Scheme::Knn(p) => stitch_component_knn(g, &t, &dec, i, &mut pool).map(|(w, picks)| {
                picks_ok &= picks <= p.kappa;
                w
            }),
        };
        match stitched {
            Ok(w) => walks.extend(w),
            Err(StageError(reason)) => return run.fail(Stage::Stitch, reason),
        }
        for v in pool.drain_journal() {
            let q = t.square_of(v);
            if owner[q] != usize::MAX && owner[q] != i {
                overlap = true;
            }
            owner[q] = i;
        }
    }
    let mut checks = CheckLog::default();
    checks.record("touched_regions_disjoint", Some(!overlap));
    if let Scheme::Knn(_) = scheme {
        checks.record("picks_within_connectivity", Some(picks_ok));
    }
    let max_spent = dec.sea.iter().map(|&q| pool.spent_in(q)).max().unwrap_or(0);
    if let Scheme::Gilbert(p) = scheme {
        let premises = run.report.assumption_checks.iter().all(|c| c.held) && p.budget_inequality_holds(d);
        let bound = 2 * p.component_bound(d) + 2;
        checks.record("stitch_usage_per_sea_square", premises.then_some(max_spent <= bound));
    }
    run.report.assumption_checks.extend(checks.finish());
    let walk_points: usize = walks.iter().map(|w| w.vertices.len()).sum();
    run.log(
        Stage::Stitch,
        &[
            ("walks", walks.len() as f64),
            ("walk_points", walk_points as f64),
            ("max_points_used_in_sea_square", max_spent as f64),
        ],
    );
    let stranded = (0..t.point_count()).filter(|&v| !pool.is_used(v) && !dec.in_sea(t.square_of(v))).count();
    if stranded > 0 {
        return run.fail(Stage::Stitch, format!("{stranded} points outside the sea were not reached by any walk"));
    }

    match build_tree_cycle(g, &t, &dec, &mut pool, &walks) {
        Ok(cycle) => {
            debug_assert!(verify_hamilton_cycle(g, &cycle));
            run.log(Stage::TreeCycle, &[("sea_squares", dec.sea.len() as f64)]);
            run.report.outcome = Outcome::Cycle { order: cycle.order().to_vec() };
            run.report
        }
        Err(StageError(reason)) => run.fail(Stage::TreeCycle, reason),
    }
}

/// Builds a Hamilton cycle of the Gilbert graph `G(ps, r)` constructively.
///
/// Errors only on invalid input; construction failures are reported in the
/// returned report together with the stage that failed.
pub fn construct_hamilton(ps: &PointSet, r: f64, params: &ConstructionParams, norm: Norm) -> Result<ConstructionReport> {
    params.validate()?;
    if ps.len() < 3 {
        return Err(Error::TooFewVertices { needed: 3, got: ps.len() });
    }
    let g = build_gilbert(ps, r, norm)?;
    let d = ps.dimension();
    let r0 = critical_radius(ps.bounds(), norm)?;
    let c = params.c as f64;
    let mut warnings = Vec::new();
    if !((1.0 - 0.5 / c) * r0 < r && r < (1.0 + 0.5 / c) * r0) {
        warnings.push(format!(
            "radius {r:.4} outside the window ({:.4}, {:.4}) around r0 = {r0:.4}",
            (1.0 - 0.5 / c) * r0,
            (1.0 + 0.5 / c) * r0
        ));
    }
    if !params.budget_inequality_holds(d) {
        warnings.push(format!(
            "M = {} does not exceed 2U + 2 + (2c+1)^d with U = {}",
            params.min_points,
            params.component_bound(d)
        ));
    }
    let side = params.square_side.unwrap_or(r0 / c);
    Ok(run_pipeline(&g, ps, side, Scheme::Gilbert(params), norm, Run::new(warnings)))
}

/// Longest edge and shortest non-edge of a graph on `ps`; the latter is
/// infinite for complete graphs.
pub fn edge_length_extremes(ps: &PointSet, g: &GeometricGraph, norm: Norm) -> Result<(f64, f64)> {
    let n = ps.len();
    let longest = g.edges().map(|(u, v)| ps.dist(u, v, norm)).fold(0.0, f64::max);
    let max_deg = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    if max_deg + 1 >= n {
        // some vertex sees everything; fall back to a full scan
        let mut shortest = f64::INFINITY;
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) {
                    shortest = shortest.min(ps.dist(u, v, norm));
                }
            }
        }
        return Ok((longest, shortest));
    }
    // the nearest non-neighbour of v is among its deg(v) + 1 nearest points
    let near = build_knn_directed(ps, max_deg + 1, norm)?;
    let mut shortest = f64::INFINITY;
    for v in 0..n {
        if let Some(&w) = near.out_neighbors(v).iter().find(|&&w| !g.has_edge(v, w)) {
            shortest = shortest.min(ps.dist(v, w, norm));
        }
    }
    Ok((longest, shortest))
}

/// Builds a Hamilton cycle of the undirected `k`-nearest-neighbour graph
/// constructively. Squares have side `r_- / sqrt(8)`.
pub fn construct_hamilton_knn(ps: &PointSet, k: usize, params: &KnnParams, norm: Norm) -> Result<ConstructionReport> {
    params.validate()?;
    if ps.len() < 3 {
        return Err(Error::TooFewVertices { needed: 3, got: ps.len() });
    }
    let g = undirect(&build_knn_directed(ps, k, norm)?);
    let (longest, shortest) = edge_length_extremes(ps, &g, norm)?;
    let scale = ps.bounds().intensity().ln().max(0.0).sqrt();
    let (r_minus, r_plus) = (params.r_minus_coef * scale, params.r_plus_coef * scale);
    let mut warnings = Vec::new();
    if longest > r_plus {
        warnings.push(format!("edge of length {longest:.4} exceeds r+ = {r_plus:.4}"));
    }
    if shortest < r_minus {
        warnings.push(format!("non-edge of length {shortest:.4} is shorter than r- = {r_minus:.4}"));
    }
    let radius = if params.realised_radii { shortest } else { r_minus };
    let side = params
        .square_side
        .unwrap_or(radius / 8f64.sqrt())
        .min(ps.bounds().side());
    Ok(run_pipeline(&g, ps, side, Scheme::Knn(params), norm, Run::new(warnings)))
}

#[cfg(test)]
mod tests;
