use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{Norm, PointSet};
use crate::graph::for_each_pair_within;

const DENSE_LIMIT: usize = 2000;

/// Longest edge of a minimum spanning tree of the complete geometric graph.
pub fn mst_bottleneck(ps: &PointSet, norm: Norm) -> Result<f64> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: n });
    }
    if n < DENSE_LIMIT {
        return Ok(dense_prim(ps, norm));
    }
    let d = ps.dimension();
    let density = n as f64 / ps.bounds().volume();
    let mut radius = (2.0 * (n as f64).ln() / (density * norm.unit_ball_volume(d))).powf(1.0 / d as f64);
    loop {
        if let Some(b) = sparse_prim(ps, norm, radius) {
            return Ok(b);
        }
        radius *= 2.0;
    }
}

fn dense_prim(ps: &PointSet, norm: Norm) -> f64 {
    let n = ps.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut bottleneck: f64 = 0.0;
    let mut u = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let pu = ps.point(u);
        let mut next = usize::MAX;
        let mut next_d = f64::INFINITY;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let d = norm.dist(pu, ps.point(v));
            if d < best[v] {
                best[v] = d;
            }
            if best[v] < next_d {
                next_d = best[v];
                next = v;
            }
        }
        in_tree[next] = true;
        bottleneck = bottleneck.max(next_d);
        u = next;
    }
    bottleneck
}

struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Prim restricted to pairs within `radius`; `None` if that graph is disconnected.
fn sparse_prim(ps: &PointSet, norm: Norm, radius: f64) -> Option<f64> {
    let n = ps.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for_each_pair_within(ps, radius, norm, |i, j, d| {
        adj[i].push((j, d));
        adj[j].push((i, d));
    });
    let mut in_tree = vec![false; n];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Key(0.0), 0usize)));
    let mut bottleneck: f64 = 0.0;
    let mut added = 0;
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if in_tree[u] {
            continue;
        }
        in_tree[u] = true;
        added += 1;
        bottleneck = bottleneck.max(d);
        for &(v, w) in &adj[u] {
            if !in_tree[v] {
                heap.push(Reverse((Key(w), v)));
            }
        }
    }
    (added == n).then_some(bottleneck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_poisson, BoxSpec};

    fn line(xs: &[f64]) -> PointSet {
        let b = BoxSpec::planar(400.0).unwrap();
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
        PointSet::from_points(b, &pts, 0).unwrap()
    }

    #[test]
    fn examples() {
        let ps = line(&[0.0, 1.0, 3.0]);
        assert_eq!(mst_bottleneck(&ps, Norm::EUCLIDEAN).unwrap(), 2.0);
        let ps = line(&[2.0, 7.5]);
        assert_eq!(mst_bottleneck(&ps, Norm::EUCLIDEAN).unwrap(), 5.5);
        assert!(mst_bottleneck(&line(&[1.0]), Norm::EUCLIDEAN).is_err());
    }

    #[test]
    fn sparse_and_dense_agree() {
        let ps = sample_poisson(BoxSpec::planar(3000.0).unwrap(), 12);
        assert!(ps.len() >= DENSE_LIMIT);
        let sparse = mst_bottleneck(&ps, Norm::EUCLIDEAN).unwrap();
        assert_eq!(sparse, dense_prim(&ps, Norm::EUCLIDEAN));
        let sparse = mst_bottleneck(&ps, Norm::MAX).unwrap();
        assert_eq!(sparse, dense_prim(&ps, Norm::MAX));
    }
}
