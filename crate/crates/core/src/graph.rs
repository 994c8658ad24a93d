//! Gilbert and k-nearest-neighbour graphs over point sets.

use std::cmp::Ordering;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::geometry::{parse_header, Norm, PointSet};
use crate::grid::BucketGrid;

/// How a graph was built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Provenance {
    Gilbert { r: f64, norm: Norm },
    KnnUndirected { k: usize, norm: Norm },
    /// Hand-built or read from a file without a geometric model.
    Explicit,
}

/// Simple undirected graph with sorted adjacency lists (CSR layout).
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    provenance: Provenance,
}

impl GeometricGraph {
    /// Builds a simple graph from an edge list. Self-loops are rejected and
    /// duplicate edges collapse.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Ok(Self::from_lists(lists, Provenance::Explicit))
    }

    pub(crate) fn from_lists(mut lists: Vec<Vec<usize>>, provenance: Provenance) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
            targets.extend_from_slice(l);
            offsets.push(targets.len());
        }
        Self { offsets, targets, provenance }
    }

    /// Builds from a list of `(u, v)` pairs known to be distinct and loop-free.
    pub(crate) fn from_pairs(n: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone, provenance: Provenance) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, v) in pairs.clone() {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        for (u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { offsets, targets, provenance }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> GeometricGraph {
        let mut lists = vec![Vec::new(); self.vertex_count()];
        for u in 0..self.vertex_count() {
            lists[perm[u]] = self.neighbors(u).iter().map(|&v| perm[v]).collect();
        }
        Self::from_lists(lists, self.provenance)
    }

    /// Writes the graph text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let (model, param) = match self.provenance {
            Provenance::Gilbert { r, .. } => ("gilbert", r.to_string()),
            Provenance::KnnUndirected { k, .. } => ("knn", k.to_string()),
            Provenance::Explicit => ("explicit", "0".to_string()),
        };
        writeln!(w, "# vertices={} model={} param={}", self.vertex_count(), model, param)?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Reads the graph text format. The norm is not part of the format, so
    /// geometric provenance is restored with the Euclidean norm.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))??;
        let fields = parse_header(&header, 1)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| parse_err(1, format!("header lacks `{key}`")))
        };
        let n: usize = get("vertices")?.parse().map_err(|_| parse_err(1, "bad vertex count"))?;
        let param = get("param")?;
        let provenance = match get("model")? {
            "gilbert" => Provenance::Gilbert {
                r: param.parse().map_err(|_| parse_err(1, "bad radius"))?,
                norm: Norm::EUCLIDEAN,
            },
            "knn" => Provenance::KnnUndirected {
                k: param.parse().map_err(|_| parse_err(1, "bad k"))?,
                norm: Norm::EUCLIDEAN,
            },
            "explicit" => Provenance::Explicit,
            other => return Err(parse_err(1, format!("unknown model `{other}`"))),
        };
        let mut lists = vec![Vec::new(); n];
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| parse_err(lineno, "expected `u v`"))?
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad vertex index"))
            };
            let (u, v) = (next()?, next()?);
            if u >= v || v >= n {
                return Err(parse_err(lineno, format!("edge `{u} {v}` must satisfy u < v < {n}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Ok(Self::from_lists(lists, provenance))
    }
}

/// The directed k-nearest-neighbour graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedKnnGraph {
    k: usize,
    norm: Norm,
    out: Vec<Vec<usize>>,
}

impl DirectedKnnGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Out-neighbours of `v`, nearest first.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.out.len()];
        for list in &self.out {
            for &w in list {
                deg[w] += 1;
            }
        }
        deg
    }

    /// The `k' <= k` nearest-neighbour graph, which is a prefix of this one.
    pub fn truncated(&self, k: usize) -> DirectedKnnGraph {
        let k = k.min(self.k);
        DirectedKnnGraph {
            k,
            norm: self.norm,
            out: self.out.iter().map(|l| l[..k.min(l.len())].to_vec()).collect(),
        }
    }
}

/// Edge `uv` iff `distance(u, v) <= r`.
pub fn build_gilbert(ps: &PointSet, r: f64, norm: Norm) -> Result<GeometricGraph> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let mut pairs = Vec::new();
    for_each_pair_within(ps, r, norm, |i, j, _| pairs.push((i, j)));
    Ok(GeometricGraph::from_pairs(
        ps.len(),
        pairs.iter().copied(),
        Provenance::Gilbert { r, norm },
    ))
}

/// Visits every unordered pair `i < j` at distance at most `r` once.
pub(crate) fn for_each_pair_within(ps: &PointSet, r: f64, norm: Norm, mut f: impl FnMut(usize, usize, f64)) {
    if ps.len() < 2 {
        return;
    }
    let grid = BucketGrid::new(ps, r);
    for i in 0..ps.len() {
        let pi = ps.point(i);
        grid.for_each_cell_within(i, 1, |c| {
            for &j in grid.items_in(c) {
                if j > i {
                    let d = norm.dist(pi, ps.point(j));
                    if d <= r {
                        f(i, j, d);
                    }
                }
            }
        });
    }
}

/// All pairs within `r`, sorted by `(distance, i, j)`.
pub(crate) fn sorted_pairs_within(ps: &PointSet, r: f64, norm: Norm) -> Vec<(f64, usize, usize)> {
    let mut pairs = Vec::new();
    for_each_pair_within(ps, r, norm, |i, j, d| pairs.push((d, i, j)));
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs
}

#[inline]
fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Each vertex points at its `k` nearest others; equal distances go to the
/// smaller index.
pub fn build_knn_directed(ps: &PointSet, k: usize, norm: Norm) -> Result<DirectedKnnGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = ps.len();
    let want = k.min(n.saturating_sub(1));
    if want == 0 {
        return Ok(DirectedKnnGraph { k, norm, out: vec![Vec::new(); n] });
    }
    // cells sized so that a few rings typically hold k points
    let side = ps.bounds().side();
    let d = ps.dimension();
    let cell = side * ((want as f64 + 1.0) / n as f64).powf(1.0 / d as f64) * 0.75;
    let grid = BucketGrid::new(ps, cell);
    let h = grid.cell_side();

    let mut out = Vec::with_capacity(n);
    let mut cand: Vec<(f64, usize)> = Vec::new();
    for i in 0..n {
        cand.clear();
        let pi = ps.point(i);
        let mut ring = 0;
        loop {
            grid.for_each_cell_on_ring(i, ring, |c| {
                for &j in grid.items_in(c) {
                    if j != i {
                        cand.push((norm.dist(pi, ps.point(j)), j));
                    }
                }
            });
            let done = grid.ring_covers_all(i, ring);
            if cand.len() >= want {
                cand.select_nth_unstable_by(want - 1, by_distance_then_index);
                let kth = cand[want - 1].0;
                if done || kth < ring as f64 * h {
                    break;
                }
            } else if done {
                break;
            }
            ring += 1;
        }
        cand.truncate(want);
        cand.sort_unstable_by(by_distance_then_index);
        out.push(cand.iter().map(|&(_, j)| j).collect());
    }
    Ok(DirectedKnnGraph { k, norm, out })
}

/// Forgets edge directions.
pub fn undirect(g: &DirectedKnnGraph) -> GeometricGraph {
    let mut lists = vec![Vec::new(); g.vertex_count()];
    for (u, list) in g.out.iter().enumerate() {
        for &v in list {
            lists[u].push(v);
            lists[v].push(u);
        }
    }
    GeometricGraph::from_lists(lists, Provenance::KnnUndirected { k: g.k, norm: g.norm })
}

/// Smallest in-degree; zero for the empty graph.
pub fn min_in_degree(g: &DirectedKnnGraph) -> usize {
    g.in_degrees().into_iter().min().unwrap_or(0)
}
