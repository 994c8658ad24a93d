//! Unit-capacity max-flow on the split-vertex network of a graph.
//!
//! Vertex `v` becomes `in(v) -> out(v)` with capacity 1 (or a larger
//! multiplicity for sources), and every edge `uv` becomes `out(u) -> in(v)`
//! and `out(v) -> in(u)`. Integral flows then decompose into internally
//! vertex-disjoint paths.

use std::collections::VecDeque;

use crate::graph::GeometricGraph;

#[derive(Debug, Clone)]
struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    orig: Vec<u32>,
}

impl Network {
    fn with_nodes(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), orig: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.orig.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.orig.push(0);
    }

    /// Augments one unit at a time until `limit` units or no path remains.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let n = self.adj.len();
        let mut via = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut flow = 0;
        while flow < limit {
            via.iter_mut().for_each(|x| *x = usize::MAX);
            via[s] = usize::MAX - 1;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && via[v] == usize::MAX {
                        via[v] = e;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if via[t] == usize::MAX {
                break;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    /// Removes one unit of flow along a path from `s`, returning the nodes visited.
    fn take_path(&mut self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut nodes = vec![s];
        let mut u = s;
        while u != t {
            let e = self.adj[u]
                .iter()
                .copied()
                .find(|&e| e % 2 == 0 && self.orig[e] > self.cap[e])?;
            self.cap[e] += 1;
            u = self.to[e];
            nodes.push(u);
        }
        Some(nodes)
    }
}

#[inline]
fn vin(v: usize) -> usize {
    2 * v
}

#[inline]
fn vout(v: usize) -> usize {
    2 * v + 1
}

/// Reusable split-vertex network over a fixed graph.
#[derive(Debug, Clone)]
pub struct VertexFlow {
    base: Network,
    vertices: usize,
}

impl VertexFlow {
    pub fn new(g: &GeometricGraph) -> Self {
        let n = g.vertex_count();
        let mut net = Network::with_nodes(2 * n);
        for v in 0..n {
            net.add_edge(vin(v), vout(v), 1);
        }
        for (u, v) in g.edges() {
            net.add_edge(vout(u), vin(v), 1);
            net.add_edge(vout(v), vin(u), 1);
        }
        Self { base: net, vertices: n }
    }

    /// Number of internally vertex-disjoint `s`-`t` paths, capped at `limit`.
    /// `s` and `t` must be distinct and non-adjacent for this to equal the
    /// local vertex connectivity.
    pub fn local_connectivity(&self, s: usize, t: usize, limit: usize) -> usize {
        debug_assert!(s < self.vertices && t < self.vertices && s != t);
        let mut net = self.base.clone();
        net.max_flow(vout(s), vin(t), limit)
    }
}

/// Vertex-disjoint paths from `sources` to target vertices.
///
/// Each `(v, m)` in `sources` asks for `m` paths starting at `v` (paths from
/// the same source share only `v`). Paths avoid blocked vertices and are cut
/// at their first target vertex. Returns as many paths as the max flow
/// allows, grouped in source order.
pub fn disjoint_paths_to_targets(
    g: &GeometricGraph,
    sources: &[(usize, u32)],
    is_target: impl Fn(usize) -> bool,
    is_blocked: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Network::with_nodes(2 * n + 2);
    let mut mult = vec![0u32; n];
    for &(v, m) in sources {
        mult[v] += m;
    }
    let usable = |v: usize| mult[v] > 0 || !is_blocked(v);
    for v in 0..n {
        if !usable(v) {
            continue;
        }
        if mult[v] > 0 {
            net.add_edge(s, vin(v), mult[v]);
            net.add_edge(vin(v), vout(v), mult[v]);
        } else {
            net.add_edge(vin(v), vout(v), 1);
            if is_target(v) {
                net.add_edge(vout(v), t, 1);
            }
        }
    }
    for (u, v) in g.edges() {
        if usable(u) && usable(v) {
            net.add_edge(vout(u), vin(v), 1);
            net.add_edge(vout(v), vin(u), 1);
        }
    }
    let want: usize = sources.iter().map(|&(_, m)| m as usize).sum();
    let flow = net.max_flow(s, t, want);

    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(flow);
    for _ in 0..flow {
        let nodes = net.take_path(s, t).expect("flow decomposes into paths");
        let mut path = Vec::new();
        for &x in &nodes[1..nodes.len() - 1] {
            if x % 2 == 0 {
                let v = x / 2;
                path.push(v);
                if is_target(v) && mult[v] == 0 {
                    break;
                }
            }
        }
        paths.push(path);
    }
    let order = |p: &Vec<usize>| sources.iter().position(|&(v, _)| v == p[0]).unwrap_or(usize::MAX);
    paths.sort_by_key(order);
    paths
}
