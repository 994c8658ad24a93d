use super::flow::VertexFlow;
use super::min_degree;
use crate::error::{Error, Result};
use crate::graph::GeometricGraph;

/// Exact vertex connectivity.
///
/// Esfahanian–Hakimi reduction: with `v` of minimum degree, any minimum
/// separator either misses `v` (then it separates `v` from some non-neighbour)
/// or contains it (then it separates two non-adjacent neighbours of `v`).
/// Complete graphs return `N - 1`.
pub fn vertex_connectivity(g: &GeometricGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: n });
    }
    Ok(connectivity_capped(g, usize::MAX))
}

/// `min(kappa(G), cap)`.
fn connectivity_capped(g: &GeometricGraph, cap: usize) -> usize {
    let n = g.vertex_count();
    if g.edge_count() == n * (n - 1) / 2 {
        return (n - 1).min(cap);
    }
    let v = (0..n).min_by_key(|&v| (g.degree(v), v)).unwrap();
    let mut best = g.degree(v).min(cap);
    if best == 0 {
        return 0;
    }
    let flow = VertexFlow::new(g);
    let nbrs = g.neighbors(v);
    for w in 0..n {
        if w != v && nbrs.binary_search(&w).is_err() {
            best = best.min(flow.local_connectivity(v, w, best));
            if best == 0 {
                return 0;
            }
        }
    }
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            if !g.has_edge(x, y) {
                best = best.min(flow.local_connectivity(x, y, best));
            }
        }
    }
    best
}

/// `kappa(G) >= k`, which requires at least `k + 1` vertices.
pub fn is_k_connected(g: &GeometricGraph, k: usize) -> bool {
    let n = g.vertex_count();
    match k {
        0 => true,
        _ if n < k + 1 => false,
        1 => super::is_connected(g),
        2 => is_biconnected(g),
        _ => min_degree(g) >= k && super::is_connected(g) && connectivity_capped(g, k) >= k,
    }
}

/// Connected, at least three vertices, and no cut vertex.
pub fn is_biconnected(g: &GeometricGraph) -> bool {
    let n = g.vertex_count();
    if n < 3 {
        return false;
    }
    // iterative Tarjan lowpoint from vertex 0
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    let mut time = 1;
    let mut root_children = 0;
    while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
        let nbrs = g.neighbors(u);
        if *next < nbrs.len() {
            let w = nbrs[*next];
            *next += 1;
            if disc[w] == usize::MAX {
                disc[w] = time;
                low[w] = time;
                time += 1;
                if u == 0 {
                    root_children += 1;
                }
                stack.push((w, u, 0));
            } else if w != parent {
                low[u] = low[u].min(disc[w]);
            }
        } else {
            stack.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[u]);
                if parent != 0 && low[u] >= disc[parent] {
                    return false;
                }
            }
        }
    }
    time == n && root_children == 1
}
