//! Exact Hamilton cycle search and cycle verification.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{is_biconnected, UnionFind};
use super::cutting::branch_and_cut;
use super::posa::rotation_search;
use crate::error::{parse_err, Result};
use crate::graph::{GeometricGraph, Provenance};
use crate::rng::splitmix64;

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

/// Work limit for [`search_hamilton`]: heuristic moves (at most half) plus
/// branching nodes, with each LP node charged as 100 branching nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl SearchBudget {
    pub fn new(max_nodes: u64) -> Self {
        Self { max_nodes }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_MAX_NODES }
    }
}

/// A cyclic vertex order. Validity against a graph is checked by
/// [`verify_hamilton_cycle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonCycle {
    order: Vec<usize>,
}

impl HamiltonCycle {
    pub fn new(order: Vec<usize>) -> Self {
        Self { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Consecutive pairs, including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    /// Writes the cycle file format: one line of indices.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let line: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut order = Vec::new();
        for (i, line) in r.lines().enumerate() {
            for tok in line?.split_whitespace() {
                order.push(tok.parse().map_err(|_| parse_err(i + 1, format!("bad index `{tok}`")))?);
            }
        }
        Ok(Self { order })
    }
}

/// True iff `cycle` visits every vertex exactly once along edges of `g`.
pub fn verify_hamilton_cycle(g: &GeometricGraph, cycle: &HamiltonCycle) -> bool {
    let n = g.vertex_count();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle.order() {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    cycle.edges().all(|(u, v)| g.has_edge(u, v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HamiltonOutcome {
    Found(HamiltonCycle),
    ProvenAbsent,
    Exhausted,
}

impl HamiltonOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, HamiltonOutcome::Found(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Heuristic moves plus branching nodes.
    pub nodes: u64,
}

/// Decides Hamiltonicity by depth-first search.
pub fn find_hamilton_exact(g: &GeometricGraph, budget: SearchBudget) -> HamiltonOutcome {
    search_hamilton(g, budget).0
}

/// As [`find_hamilton_exact`], also reporting search effort.
///
/// Stages, cheapest first:
/// 1. certificates of absence: fewer than three vertices, a vertex of degree
///    below two, a cut vertex;
/// 2. forced-edge propagation: both edges at a vertex with two candidate
///    edges are used, other edges at a vertex with two used edges are
///    dropped, and an edge closing a short cycle of used edges is dropped.
///    A contradiction proves absence, as does a set of vertices left by an
///    odd number of edges that are all forced;
/// 3. a rotation-extension heuristic on the reduced graph;
/// 4. two vertices whose removal leaves three or more components;
/// 5. branching on one edge at a time (use it, or delete it), re-running the
///    propagation, parity and cut-vertex tests at every node;
/// 6. if that has not finished after a fixed number of nodes, branch and cut
///    on the degree-two LP with subtour and blossom cuts.
///
/// Stages 3, 5 and 6 share `budget`; an LP node is charged as a batch of
/// backtracking nodes.
pub fn search_hamilton(g: &GeometricGraph, budget: SearchBudget) -> (HamiltonOutcome, SearchStats) {
    let n = g.vertex_count();
    let absent = (HamiltonOutcome::ProvenAbsent, SearchStats::default());
    if n < 3 || super::min_degree(g) < 2 || !is_biconnected(g) {
        return absent;
    }
    let mut root = Reducer::new(g);
    if root.propagate().is_none() || !root.parity_ok() {
        return absent;
    }
    let h = root.graph();
    if !is_biconnected(&h) {
        return absent;
    }
    let seed = splitmix64(((n as u64) << 32) ^ h.edge_count() as u64);
    let run = HEURISTIC_STEPS_PER_VERTEX * n as u64 + 1000;
    let allowance = (run * HEURISTIC_RESTARTS).min(budget.max_nodes / 2);
    let (found, spent) = rotation_search(&h, &root.forced, seed, run, allowance);
    let mut stats = SearchStats { nodes: spent };
    if let Some(order) = found {
        let c = HamiltonCycle::new(order);
        assert!(verify_hamilton_cycle(g, &c), "heuristic produced an invalid cycle");
        return (HamiltonOutcome::Found(c), stats);
    }
    if splits_into_three(&h) {
        return (HamiltonOutcome::ProvenAbsent, stats);
    }
    let forced = root.forced.clone();
    let quick = budget.max_nodes.min(stats.nodes + BRANCH_NODES);
    let mut outcome = branch(root, quick, &mut stats);
    if outcome == HamiltonOutcome::Exhausted && quick < budget.max_nodes {
        outcome = branch_and_cut(&h, &forced, budget.max_nodes, &mut stats);
    }
    if let HamiltonOutcome::Found(c) = &outcome {
        assert!(verify_hamilton_cycle(g, c), "search produced an invalid cycle");
    }
    (outcome, stats)
}

const BRANCH_NODES: u64 = 20_000;
const HEURISTIC_RESTARTS: u64 = 64;
const HEURISTIC_STEPS_PER_VERTEX: u64 = 40;

fn branch(root: Reducer, limit: u64, stats: &mut SearchStats) -> HamiltonOutcome {
    let mut stack = vec![root];
    while let Some(mut st) = stack.pop() {
        stats.nodes += 1;
        if stats.nodes > limit {
            return HamiltonOutcome::Exhausted;
        }
        if st.propagate().is_none() || !st.parity_ok() || !is_biconnected(&st.graph()) {
            continue;
        }
        let Some((v, x)) = st.pick_edge() else {
            return HamiltonOutcome::Found(st.cycle());
        };
        let mut without = st.clone();
        without.remove(v, x);
        stack.push(without);
        if st.force(v, x).is_some() {
            stack.push(st);
        }
    }
    HamiltonOutcome::ProvenAbsent
}

/// Candidate and forced edges under propagation.
#[derive(Clone)]
struct Reducer {
    n: usize,
    provenance: Provenance,
    adj: Vec<Vec<usize>>,
    forced: Vec<Vec<usize>>,
    /// For an end of a path of forced edges, the other end.
    other_end: Vec<usize>,
    /// Vertices on the forced path, valid at path ends.
    size: Vec<usize>,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

impl Reducer {
    fn new(g: &GeometricGraph) -> Self {
        let n = g.vertex_count();
        Self {
            n,
            provenance: g.provenance(),
            adj: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            forced: vec![Vec::new(); n],
            other_end: (0..n).collect(),
            size: vec![1; n],
            queue: (0..n).collect(),
            queued: vec![true; n],
        }
    }

    fn graph(&self) -> GeometricGraph {
        GeometricGraph::from_lists(self.adj.clone(), self.provenance)
    }

    /// Runs to a fixpoint; `None` on a contradiction.
    fn propagate(&mut self) -> Option<()> {
        while let Some(v) = self.queue.pop() {
            self.queued[v] = false;
            if self.adj[v].len() < 2 {
                return None;
            }
            if self.adj[v].len() == 2 {
                for x in self.adj[v].clone() {
                    self.force(v, x)?;
                }
            }
            if self.forced[v].len() == 2 && self.adj[v].len() > 2 {
                let drop: Vec<usize> = self.adj[v].iter().copied().filter(|x| !self.forced[v].contains(x)).collect();
                for x in drop {
                    self.remove(v, x);
                }
            }
        }
        Some(())
    }

    fn enqueue(&mut self, v: usize) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push(v);
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
        self.enqueue(u);
        self.enqueue(v);
    }

    fn force(&mut self, u: usize, v: usize) -> Option<()> {
        if self.forced[u].contains(&v) {
            return Some(());
        }
        if self.forced[u].len() == 2 || self.forced[v].len() == 2 {
            return None;
        }
        let (a, b) = (self.other_end[u], self.other_end[v]);
        if a == v {
            // closes the forced path into a cycle
            if self.size[u] < self.n {
                return None;
            }
        } else {
            let size = self.size[u] + self.size[v];
            self.other_end[a] = b;
            self.other_end[b] = a;
            self.size[a] = size;
            self.size[b] = size;
            if size < self.n && size > 2 && self.adj[a].contains(&b) {
                self.remove(a, b);
            }
        }
        self.forced[u].push(v);
        self.forced[v].push(u);
        self.enqueue(u);
        self.enqueue(v);
        Some(())
    }

    /// A Hamilton cycle crosses every cut an even number of times. Cuts
    /// crossed only by forced edges are unions of components of the graph
    /// of undecided edges, so it suffices that each such component is left
    /// by an even number of forced edges.
    fn parity_ok(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v && !self.forced[u].contains(&v) {
                    uf.union(u, v);
                }
            }
        }
        let mut odd = vec![false; self.n];
        for u in 0..self.n {
            for &v in &self.forced[u] {
                let (a, b) = (uf.find(u), uf.find(v));
                if a != b {
                    // seen once from each end
                    odd[a] ^= true;
                }
            }
        }
        !odd.contains(&true)
    }

    /// An undecided edge at a forced path end (or, failing that, the
    /// lowest-degree open vertex); `None` once every vertex has two forced edges.
    fn pick_edge(&self) -> Option<(usize, usize)> {
        let v = (0..self.n)
            .filter(|&v| self.forced[v].len() < 2)
            .min_by_key(|&v| (2 - self.forced[v].len(), self.adj[v].len(), v))?;
        let x = self.adj[v]
            .iter()
            .copied()
            .filter(|x| !self.forced[v].contains(x))
            .min_by_key(|&x| (self.adj[x].len(), x))?;
        Some((v, x))
    }

    /// The forced edges once they form a single cycle through every vertex.
    fn cycle(&self) -> HamiltonCycle {
        let mut order = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (usize::MAX, 0);
        for _ in 0..self.n {
            order.push(cur);
            let next = if self.forced[cur][0] != prev { self.forced[cur][0] } else { self.forced[cur][1] };
            prev = cur;
            cur = next;
        }
        HamiltonCycle::new(order)
    }
}

/// Whether removing some two vertices leaves at least three components,
/// which rules out a Hamilton cycle. Assumes `g` is biconnected.
fn splits_into_three(g: &GeometricGraph) -> bool {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut pieces = vec![0usize; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for skip in 0..n {
        disc.iter_mut().for_each(|d| *d = usize::MAX);
        let root = if skip == 0 { 1 } else { 0 };
        disc[skip] = 0;
        disc[root] = 1;
        low[root] = 1;
        pieces[root] = 0;
        let mut time = 2;
        stack.clear();
        stack.push((root, 0));
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(u);
            if *next < nbrs.len() {
                let w = nbrs[*next];
                *next += 1;
                if w == skip {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    pieces[w] = 1;
                    time += 1;
                    stack.push((w, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if p == root || low[u] >= disc[p] {
                        pieces[p] += 1;
                        if pieces[p] >= 3 {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}
