//! Stage 4: routes every point of a cutoff region onto closed walks that
//! start and end in one sea square.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::decompose::{NonFullComponent, SeaDecomposition, StageError};
use super::tessellation::Tessellation;
use crate::algorithms::disjoint_paths_to_targets;
use crate::graph::GeometricGraph;

/// Which points are still free, with per-square tallies.
#[derive(Debug, Clone)]
pub struct VertexPool {
    used: Vec<bool>,
    unused: Vec<usize>,
    spent: Vec<usize>,
    journal: Vec<usize>,
}

impl VertexPool {
    pub fn new(t: &Tessellation) -> Self {
        Self {
            used: vec![false; t.point_count()],
            unused: t.counts().to_vec(),
            spent: vec![0; t.square_count()],
            journal: Vec::new(),
        }
    }

    pub fn is_used(&self, v: usize) -> bool {
        self.used[v]
    }

    pub fn unused_in(&self, q: usize) -> usize {
        self.unused[q]
    }

    /// Points taken from square `q` by stitching.
    pub fn spent_in(&self, q: usize) -> usize {
        self.spent[q]
    }

    pub fn take(&mut self, t: &Tessellation, v: usize) {
        assert!(!self.used[v], "vertex {v} taken twice");
        self.used[v] = true;
        let q = t.square_of(v);
        self.unused[q] -= 1;
        self.spent[q] += 1;
        self.journal.push(v);
    }

    /// Unused points of `q`, in index order.
    pub fn free_in<'a>(&'a self, t: &'a Tessellation, q: usize) -> impl Iterator<Item = usize> + 'a {
        t.points_in(q).iter().copied().filter(move |&v| !self.used[v])
    }

    pub(crate) fn drain_journal(&mut self) -> Vec<usize> {
        std::mem::take(&mut self.journal)
    }
}

/// A walk whose two ends lie in the same sea square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredWalk {
    pub anchor: usize,
    pub vertices: Vec<usize>,
}

pub(crate) fn check_edges(g: &GeometricGraph, walk: &[usize], what: &str) -> Result<(), StageError> {
    for w in walk.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(StageError(format!("{what}: missing edge {}-{}", w[0], w[1])));
        }
    }
    Ok(())
}

struct Ctx<'a> {
    g: &'a GeometricGraph,
    t: &'a Tessellation,
    dec: &'a SeaDecomposition,
    comp: &'a NonFullComponent,
}

impl Ctx<'_> {
    fn sea_side(&self, q: usize) -> bool {
        self.comp.in_a(q) && self.comp.in_blowup(q) && self.dec.in_sea(q)
    }

    fn meeting_square(&self, v: usize) -> Result<usize, StageError> {
        let q = self.t.square_of(v);
        if !self.sea_side(q) {
            return Err(StageError(format!("meeting point {v} lies in square {q}, outside the sea part of the blow-up")));
        }
        Ok(q)
    }

    /// Fresh vertices leading from `start` (in `from`) through sea squares of
    /// the blow-up to a fresh vertex of `to`, one per square.
    fn lift(&self, pool: &VertexPool, start: usize, from: usize, to: usize) -> Result<Vec<usize>, StageError> {
        if from == to {
            return Ok(Vec::new());
        }
        let mut excluded: Vec<usize> = Vec::new();
        for _ in 0..16 {
            let Some(route) = self.route(pool, from, to, &excluded) else { break };
            let mut out = Vec::with_capacity(route.len() - 1);
            let mut prev = start;
            let mut stuck = None;
            for (i, &q) in route.iter().enumerate().skip(1) {
                match pool.free_in(self.t, q).find(|&v| self.g.has_edge(prev, v) && !out.contains(&v)) {
                    Some(v) => {
                        out.push(v);
                        prev = v;
                    }
                    None => {
                        stuck = Some(if q == to { route[i - 1] } else { q });
                        break;
                    }
                }
            }
            match stuck {
                None => return Ok(out),
                Some(q) if q == from => break,
                Some(q) => excluded.push(q),
            }
        }
        Err(StageError(format!("no sea route from square {from} to square {to} inside the blow-up")))
    }

    fn route(&self, pool: &VertexPool, from: usize, to: usize, excluded: &[usize]) -> Option<Vec<usize>> {
        let mut prev = std::collections::HashMap::new();
        prev.insert(from, from);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                let mut path = vec![to];
                let mut y = to;
                while y != from {
                    y = prev[&y];
                    path.push(y);
                }
                path.reverse();
                return Some(path);
            }
            for y in self.dec.square_graph().neighbours(self.t, x) {
                if prev.contains_key(&y) || excluded.contains(&y) || !self.sea_side(y) || pool.unused_in(y) == 0 {
                    continue;
                }
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
        None
    }
}

/// Closes a pair of disjoint paths (`out` from the first pick, `back` from
/// the second, each ending at a meeting point) into an anchored walk with
/// `middle` between the picks, then lifts the second meeting point back to
/// the first meeting square.
fn close_loop(
    ctx: &Ctx,
    pool: &mut VertexPool,
    out: &[usize],
    middle: &[usize],
    back: &[usize],
    what: &str,
) -> Result<AnchoredWalk, StageError> {
    let (m1, m2) = (*out.last().unwrap(), *back.last().unwrap());
    let (q1, q2) = (ctx.meeting_square(m1)?, ctx.meeting_square(m2)?);
    let mut walk: Vec<usize> = out.iter().rev().copied().collect();
    walk.extend_from_slice(middle);
    let skip = usize::from(out[0] == back[0]);
    walk.extend_from_slice(&back[skip..]);
    let lift = ctx.lift(pool, m2, q2, q1)?;
    for &v in &lift {
        pool.take(ctx.t, v);
    }
    walk.extend(lift);
    check_edges(ctx.g, &walk, what)?;
    Ok(AnchoredWalk { anchor: q1, vertices: walk })
}

fn take_paths(t: &Tessellation, pool: &mut VertexPool, paths: &[Vec<usize>]) {
    for p in paths {
        for &v in p {
            if !pool.is_used(v) {
                pool.take(t, v);
            }
        }
    }
}

/// Stitches one non-full component of the Gilbert construction: one walk
/// through every point of the far squares, and one per close square with
/// points left.
pub fn stitch_component(
    g: &GeometricGraph,
    t: &Tessellation,
    dec: &SeaDecomposition,
    component: usize,
    pool: &mut VertexPool,
) -> Result<Vec<AnchoredWalk>, StageError> {
    let comp = &dec.components[component];
    let ctx = Ctx { g, t, dec, comp };
    let mut walks = Vec::new();

    let far_points: Vec<usize> = comp.far.iter().flat_map(|&q| pool.free_in(t, q).collect::<Vec<_>>()).collect();
    if !far_points.is_empty() {
        let sources: Vec<(usize, u32)> = if far_points.len() == 1 {
            vec![(far_points[0], 2)]
        } else {
            vec![(far_points[0], 1), (far_points[1], 1)]
        };
        let paths = disjoint_paths_to_targets(
            g,
            &sources,
            |v| !pool.is_used(v) && comp.in_a(t.square_of(v)),
            |v| pool.is_used(v),
        );
        if paths.len() < 2 {
            return Err(StageError(format!(
                "far region of component {component}: only {} disjoint paths to the sea side",
                paths.len()
            )));
        }
        take_paths(t, pool, &paths);
        let middle: Vec<usize> = far_points.iter().copied().filter(|&v| !pool.is_used(v)).collect();
        for &v in &middle {
            pool.take(t, v);
        }
        walks.push(close_loop(&ctx, pool, &paths[0], &middle, &paths[1], "far-region walk")?);
    }

    for &p in &comp.close {
        let pts: Vec<usize> = pool.free_in(t, p).collect();
        if pts.is_empty() {
            continue;
        }
        let (x, y) = (pts[0], *pts.last().unwrap());
        let mut options: Vec<usize> = dec
            .square_graph()
            .neighbours(t, p)
            .into_iter()
            .filter(|&q| comp.in_a(q) && dec.in_sea(q))
            .collect();
        options.sort_by_key(|&q| (std::cmp::Reverse(pool.unused_in(q)), q));
        let mut attached = None;
        for q in options {
            let Some(u) = pool.free_in(t, q).find(|&u| g.has_edge(u, x)) else { continue };
            let Some(v) = pool.free_in(t, q).find(|&v| v != u && g.has_edge(v, y)) else { continue };
            attached = Some((q, u, v));
            break;
        }
        let Some((q, u, v)) = attached else {
            return Err(StageError(format!(
                "close square {p} of component {component}: no sea neighbour with two free points joined to it"
            )));
        };
        let mut walk = vec![u];
        walk.extend_from_slice(&pts);
        walk.push(v);
        check_edges(g, &walk, "close-square walk")?;
        for &w in &walk {
            pool.take(t, w);
        }
        walks.push(AnchoredWalk { anchor: q, vertices: walk });
    }
    Ok(walks)
}

/// Stitches one component of the k-nearest-neighbour construction. Two
/// points are picked from every cutoff square with points (a lone point
/// is picked twice) and all their paths to the sea side are found in one
/// flow. Returns the walks and the number of picks.
pub fn stitch_component_knn(
    g: &GeometricGraph,
    t: &Tessellation,
    dec: &SeaDecomposition,
    component: usize,
    pool: &mut VertexPool,
) -> Result<(Vec<AnchoredWalk>, usize), StageError> {
    let comp = &dec.components[component];
    let ctx = Ctx { g, t, dec, comp };
    let mut picks: Vec<(usize, usize, usize)> = Vec::new();
    let mut sources: Vec<(usize, u32)> = Vec::new();
    for &q in &comp.cutoff {
        let mut free = pool.free_in(t, q);
        let Some(x) = free.next() else { continue };
        match free.next() {
            Some(y) => {
                picks.push((q, x, y));
                sources.push((x, 1));
                sources.push((y, 1));
            }
            None => {
                picks.push((q, x, x));
                sources.push((x, 2));
            }
        }
    }
    if picks.is_empty() {
        return Ok((Vec::new(), 0));
    }
    let want: u32 = sources.iter().map(|s| s.1).sum();
    let paths = disjoint_paths_to_targets(
        g,
        &sources,
        |v| !pool.is_used(v) && comp.in_a(t.square_of(v)),
        |v| pool.is_used(v),
    );
    if paths.len() < want as usize {
        return Err(StageError(format!(
            "component {component}: {} of {want} disjoint paths from cutoff picks to the sea side",
            paths.len()
        )));
    }
    take_paths(t, pool, &paths);
    let mut walks = Vec::with_capacity(picks.len());
    for &(q, x, y) in &picks {
        let mut from_x = paths.iter().filter(|p| p[0] == x);
        let out = from_x.next().unwrap();
        let back = if x == y { from_x.next().unwrap() } else { paths.iter().find(|p| p[0] == y).unwrap() };
        let middle: Vec<usize> = pool.free_in(t, q).collect();
        for &v in &middle {
            pool.take(t, v);
        }
        walks.push(close_loop(&ctx, pool, out, &middle, back, "cutoff-square walk")?);
    }
    Ok((walks, sources.iter().map(|s| s.1 as usize).sum()))
}
