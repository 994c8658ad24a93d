//! Non-full squares, their components, the sea and the cutoff regions.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::tessellation::{SquareGraph, Tessellation};
use crate::algorithms::UnionFind;
use crate::error::{Error, Result};

/// Square-level rules of one construction.
#[derive(Debug, Clone)]
pub struct SquareRules {
    /// Planning graph on squares.
    pub square_graph: SquareGraph,
    /// Non-full squares within this ℓ∞ distance are joined.
    pub join: usize,
    /// ℓ∞ radius of the blow-up around each component.
    pub blowup: usize,
    /// Squares with fewer points are non-full.
    pub min_points: usize,
}

/// One component `N` of non-full squares with its cutoff region.
///
/// `A` is the largest component of the square graph once `N` is removed;
/// everything else is cutoff. All lists are sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonFullComponent {
    pub squares: Vec<usize>,
    /// Complement of `A`; contains `squares`.
    pub cutoff: Vec<usize>,
    /// Cutoff squares with a neighbour in `A`.
    pub close: Vec<usize>,
    pub far: Vec<usize>,
    /// Squares within the blow-up radius of `squares`.
    pub blowup: Vec<usize>,
}

impl NonFullComponent {
    pub fn size(&self) -> usize {
        self.squares.len()
    }

    pub fn in_a(&self, q: usize) -> bool {
        self.cutoff.binary_search(&q).is_err()
    }

    pub fn in_blowup(&self, q: usize) -> bool {
        self.blowup.binary_search(&q).is_ok()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.squares.binary_search(&q).is_ok()
    }

    /// Cutoff squares outside the component itself.
    pub fn cutoff_outside(&self) -> usize {
        self.cutoff.len() - self.squares.len()
    }
}

/// Classification of every square of a tessellation.
#[derive(Debug, Clone)]
pub struct SeaDecomposition {
    pub non_full: Vec<usize>,
    pub components: Vec<NonFullComponent>,
    /// Largest component of full squares in the square graph.
    pub sea: Vec<usize>,
    in_sea: Vec<bool>,
    square_graph: SquareGraph,
    lattice: SquareGraph,
}

impl SeaDecomposition {
    pub fn in_sea(&self, q: usize) -> bool {
        self.in_sea[q]
    }

    pub fn square_graph(&self) -> &SquareGraph {
        &self.square_graph
    }

    pub fn lattice_graph(&self) -> &SquareGraph {
        &self.lattice
    }
}

/// Stamped membership marks over squares, reusable without clearing.
pub(crate) struct Marks {
    stamp: Vec<u32>,
    now: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Self { stamp: vec![0; n], now: 0 }
    }

    pub(crate) fn reset(&mut self) {
        self.now += 1;
    }

    pub(crate) fn set(&mut self, q: usize) -> bool {
        let fresh = self.stamp[q] != self.now;
        self.stamp[q] = self.now;
        fresh
    }

    pub(crate) fn get(&self, q: usize) -> bool {
        self.stamp[q] == self.now
    }
}

/// Components of the squares accepted by `keep` under `graph`, each sorted,
/// in order of their smallest square.
pub(crate) fn components_of(
    t: &Tessellation,
    graph: &SquareGraph,
    keep: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut seen = vec![false; t.square_count()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for q in 0..t.square_count() {
        if seen[q] || !keep(q) {
            continue;
        }
        seen[q] = true;
        queue.push_back(q);
        let mut comp = Vec::new();
        while let Some(x) = queue.pop_front() {
            comp.push(x);
            graph.for_each_neighbour(t, x, |y| {
                if !seen[y] && keep(y) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            });
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn largest(comps: &[Vec<usize>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in comps.iter().enumerate() {
        if best.is_none_or(|b| c.len() > comps[b].len()) {
            best = Some(i);
        }
    }
    best
}

/// Classifies squares and decomposes the non-full ones. The sea may come
/// out empty; [`classify_and_decompose`] turns that into an error.
pub fn decompose(t: &Tessellation, rules: &SquareRules) -> SeaDecomposition {
    let squares = t.square_count();
    let non_full: Vec<usize> = (0..squares).filter(|&q| t.count(q) < rules.min_points).collect();
    let mut nf_index = vec![usize::MAX; squares];
    for (i, &q) in non_full.iter().enumerate() {
        nf_index[q] = i;
    }

    let mut uf = UnionFind::new(non_full.len());
    for (i, &q) in non_full.iter().enumerate() {
        t.for_each_within_linf(q, rules.join, |x| {
            let j = nf_index[x];
            if j != usize::MAX && j > i {
                uf.union(i, j);
            }
        });
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_root = vec![usize::MAX; non_full.len()];
    for (i, &q) in non_full.iter().enumerate() {
        let r = uf.find(i);
        if group_of_root[r] == usize::MAX {
            group_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of_root[r]].push(q);
    }

    let graph = &rules.square_graph;
    let full_parts = components_of(t, graph, |q| nf_index[q] == usize::MAX);
    let mut in_sea = vec![false; squares];
    let sea = largest(&full_parts).map(|i| full_parts[i].clone()).unwrap_or_default();
    for &q in &sea {
        in_sea[q] = true;
    }
    let mut part_of = vec![usize::MAX; squares];
    for (i, p) in full_parts.iter().enumerate() {
        for &q in p {
            part_of[q] = i;
        }
    }

    let mut marks = Marks::new(squares);
    let components = groups
        .into_iter()
        .map(|n| component_regions(t, graph, rules.blowup, n, &non_full, &nf_index, &full_parts, &part_of, &mut marks))
        .collect();

    SeaDecomposition {
        non_full,
        components,
        sea,
        in_sea,
        square_graph: graph.clone(),
        lattice: SquareGraph::lattice(t.dimension()),
    }
}

#[allow(clippy::too_many_arguments)]
fn component_regions(
    t: &Tessellation,
    graph: &SquareGraph,
    blowup_radius: usize,
    n: Vec<usize>,
    non_full: &[usize],
    nf_index: &[usize],
    full_parts: &[Vec<usize>],
    part_of: &[usize],
    marks: &mut Marks,
) -> NonFullComponent {
    // Nodes: one per full part, then one per non-full square outside `n`.
    marks.reset();
    for &q in &n {
        marks.set(q);
    }
    let parts = full_parts.len();
    let node = |q: usize| if part_of[q] != usize::MAX { part_of[q] } else { parts + nf_index[q] };
    let mut uf = UnionFind::new(parts + non_full.len());
    for &q in non_full {
        if marks.get(q) {
            continue;
        }
        graph.for_each_neighbour(t, q, |x| {
            if !marks.get(x) {
                uf.union(node(q), node(x));
            }
        });
    }
    let mut weight = vec![0usize; parts + non_full.len()];
    for (i, p) in full_parts.iter().enumerate() {
        let r = uf.find(i);
        weight[r] += p.len();
    }
    for &q in non_full {
        if !marks.get(q) {
            let r = uf.find(node(q));
            weight[r] += 1;
        }
    }
    let mut best: Option<usize> = None;
    for x in 0..weight.len() {
        if weight[x] > 0 && best.is_none_or(|b| weight[x] > weight[b]) {
            best = Some(x);
        }
    }

    let mut cutoff = n.clone();
    for (i, p) in full_parts.iter().enumerate() {
        if Some(uf.find(i)) != best {
            cutoff.extend_from_slice(p);
        }
    }
    for &q in non_full {
        if !marks.get(q) && Some(uf.find(node(q))) != best {
            cutoff.push(q);
        }
    }
    cutoff.sort_unstable();

    marks.reset();
    for &q in &cutoff {
        marks.set(q);
    }
    let (mut close, mut far) = (Vec::new(), Vec::new());
    for &q in &cutoff {
        let mut near_a = false;
        graph.for_each_neighbour(t, q, |x| near_a |= !marks.get(x));
        if near_a {
            close.push(q);
        } else {
            far.push(q);
        }
    }

    marks.reset();
    let mut blowup = Vec::new();
    for &q in &n {
        t.for_each_within_linf(q, blowup_radius, |x| {
            if marks.set(x) {
                blowup.push(x);
            }
        });
    }
    blowup.sort_unstable();

    NonFullComponent { squares: n, cutoff, close, far, blowup }
}

/// Why a construction stage failed.
#[derive(Debug, Clone, PartialEq)]
pub struct StageError(pub String);

/// [`decompose`], failing when no square is full enough to form a sea.
pub fn classify_and_decompose(t: &Tessellation, rules: &SquareRules) -> std::result::Result<SeaDecomposition, StageError> {
    let dec = decompose(t, rules);
    if dec.sea.is_empty() {
        return Err(StageError(format!(
            "sea empty: no square holds {} points ({} squares, {} points)",
            rules.min_points,
            t.square_count(),
            t.point_count()
        )));
    }
    Ok(dec)
}

/// Outcome of one structural assumption over all components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub name: String,
    pub held: bool,
    /// Components the check applied to.
    pub evaluated: usize,
    pub violations: usize,
}

#[derive(Default)]
pub(crate) struct CheckLog {
    checks: Vec<AssumptionCheck>,
}

impl CheckLog {
    pub(crate) fn record(&mut self, name: &str, held: Option<bool>) {
        let i = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(AssumptionCheck { name: name.into(), held: true, evaluated: 0, violations: 0 });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[i];
        if let Some(ok) = held {
            c.evaluated += 1;
            if !ok {
                c.violations += 1;
                c.held = false;
            }
        }
    }

    pub(crate) fn finish(self) -> Vec<AssumptionCheck> {
        self.checks
    }
}

/// Whether the squares of `set` with `in_a` hold are connected in `graph`.
pub(crate) fn restricted_connected(
    t: &Tessellation,
    graph: &SquareGraph,
    set: &[usize],
    keep: impl Fn(usize) -> bool,
    marks: &mut Marks,
) -> bool {
    let members: Vec<usize> = set.iter().copied().filter(|&q| keep(q)).collect();
    let Some(&first) = members.first() else { return true };
    marks.reset();
    for &q in &members {
        marks.set(q);
    }
    let mut seen = std::collections::HashSet::new();
    seen.insert(first);
    let mut queue = VecDeque::from([first]);
    while let Some(x) = queue.pop_front() {
        graph.for_each_neighbour(t, x, |y| {
            if marks.get(y) && seen.insert(y) {
                queue.push_back(y);
            }
        });
    }
    seen.len() == members.len()
}

/// Checks shared by both schemes: blow-up ∩ A connected and the sea
/// agreeing with `A` on the blow-up.
pub(crate) fn check_common(dec: &SeaDecomposition, t: &Tessellation, log: &mut CheckLog) {
    let mut marks = Marks::new(t.square_count());
    for comp in &dec.components {
        let connected = restricted_connected(t, &dec.square_graph, &comp.blowup, |q| comp.in_a(q), &mut marks);
        log.record("blowup_sea_side_connected", Some(connected));
        let agrees = comp.blowup.iter().all(|&q| comp.in_a(q) == dec.in_sea(q));
        log.record("sea_matches_blowup", Some(agrees));
        let lattice = diagonal_boundary_check(t, &comp.blowup).ok().flatten();
        log.record("lattice_boundary_diagonally_connected", lattice);
    }
}

/// Reports whether the lattice boundary of `e` (squares outside `e` sharing
/// a face with it) is diagonally connected. `None` when `e` or its
/// complement is disconnected in the lattice, where no claim is made.
pub fn diagonal_boundary_check(t: &Tessellation, e: &[usize]) -> Result<Option<bool>> {
    let total = t.square_count();
    let mut in_e = vec![false; total];
    for &q in e {
        if q >= total {
            return Err(Error::InvalidParameter(format!("square {q} outside the grid")));
        }
        in_e[q] = true;
    }
    let size = in_e.iter().filter(|&&b| b).count();
    if size == 0 || size == total {
        return Err(Error::InvalidParameter("set and its complement must be nonempty".into()));
    }
    let lattice = SquareGraph::lattice(t.dimension());
    let inside = components_of(t, &lattice, |q| in_e[q]);
    let outside = components_of(t, &lattice, |q| !in_e[q]);
    if inside.len() != 1 || outside.len() != 1 {
        return Ok(None);
    }
    let mut on_boundary = vec![false; total];
    for q in 0..total {
        if !in_e[q] {
            let mut touches = false;
            lattice.for_each_neighbour(t, q, |x| touches |= in_e[x]);
            on_boundary[q] = touches;
        }
    }
    let parts = components_of(t, &SquareGraph::diagonal(t.dimension()), |q| on_boundary[q]);
    Ok(Some(parts.len() == 1))
}
