//! Exact decision procedures on [`GeometricGraph`]s.

mod connectivity;
mod cutting;
mod flow;
mod hamilton;
mod posa;
mod mst;
mod union_find;

pub use connectivity::{is_biconnected, is_k_connected, vertex_connectivity};
pub use flow::{disjoint_paths_to_targets, VertexFlow};
pub use hamilton::{
    find_hamilton_exact, search_hamilton, verify_hamilton_cycle, HamiltonCycle, HamiltonOutcome,
    SearchBudget, SearchStats, DEFAULT_MAX_NODES,
};
pub use mst::mst_bottleneck;
pub use union_find::UnionFind;

use crate::graph::GeometricGraph;

/// Component label per vertex, labels numbered `0..count` in order of each
/// component's smallest vertex.
pub fn connected_components(g: &GeometricGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn component_count(g: &GeometricGraph) -> usize {
    connected_components(g).into_iter().max().map_or(0, |m| m + 1)
}

/// True for graphs with exactly one component. The empty graph is not connected.
pub fn is_connected(g: &GeometricGraph) -> bool {
    component_count(g) == 1
}

/// Minimum vertex degree; 0 for the empty graph.
pub fn min_degree(g: &GeometricGraph) -> usize {
    (0..g.vertex_count()).map(|v| g.degree(v)).min().unwrap_or(0)
}

pub fn max_degree(g: &GeometricGraph) -> usize {
    (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::graph::GeometricGraph;

    pub fn cycle(n: usize) -> GeometricGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GeometricGraph::from_edges(n, &e).unwrap()
    }

    pub fn complete(n: usize) -> GeometricGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        GeometricGraph::from_edges(n, &e).unwrap()
    }

    pub fn path(n: usize) -> GeometricGraph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        GeometricGraph::from_edges(n, &e).unwrap()
    }

    /// G(n, p) from a tiny xorshift stream, for oracle comparisons.
    pub fn random_graph(n: usize, p: f64, seed: u64) -> GeometricGraph {
        let mut s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if next() < p {
                    e.push((i, j));
                }
            }
        }
        GeometricGraph::from_edges(n, &e).unwrap()
    }
}
