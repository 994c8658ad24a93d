//! Stage 5: a doubled spanning tree of the sea squares turned into a
//! Hamilton cycle.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::decompose::{SeaDecomposition, StageError};
use super::stitch::{AnchoredWalk, VertexPool};
use super::tessellation::Tessellation;
use crate::algorithms::{verify_hamilton_cycle, HamiltonCycle};
use crate::graph::GeometricGraph;

#[derive(PartialEq)]
struct Edge(f64, usize, usize);

impl Eq for Edge {}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1)).then(self.2.cmp(&other.2))
    }
}

/// Minimum spanning tree of the sea squares under the square graph, with
/// centre distance as weight. Returns children lists keyed by square
/// (sorted), or `None` if the sea is disconnected.
pub fn sea_spanning_tree(
    t: &Tessellation,
    dec: &SeaDecomposition,
    root: usize,
) -> Option<std::collections::BTreeMap<usize, Vec<usize>>> {
    let mut children: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    let mut in_tree = std::collections::HashSet::new();
    let mut heap = BinaryHeap::new();
    in_tree.insert(root);
    children.insert(root, Vec::new());
    let push_from = |q: usize, heap: &mut BinaryHeap<Reverse<Edge>>, in_tree: &std::collections::HashSet<usize>| {
        for x in dec.square_graph().neighbours(t, q) {
            if dec.in_sea(x) && !in_tree.contains(&x) {
                heap.push(Reverse(Edge(t.centre_distance(q, x), x, q)));
            }
        }
    };
    push_from(root, &mut heap, &in_tree);
    while let Some(Reverse(Edge(_, x, parent))) = heap.pop() {
        if !in_tree.insert(x) {
            continue;
        }
        children.get_mut(&parent).unwrap().push(x);
        children.insert(x, Vec::new());
        push_from(x, &mut heap, &in_tree);
    }
    if in_tree.len() != dec.sea.len() {
        return None;
    }
    for list in children.values_mut() {
        list.sort_unstable();
    }
    Some(children)
}

/// Squares in the order a walk around the doubled tree visits them,
/// starting and ending at `root`.
pub fn tree_tour(children: &std::collections::BTreeMap<usize, Vec<usize>>, root: usize) -> Vec<usize> {
    let mut tour = vec![root];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(top) = stack.last_mut() {
        let kids = &children[&top.0];
        if top.1 < kids.len() {
            let c = kids[top.1];
            top.1 += 1;
            tour.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                tour.push(p);
            }
        }
    }
    tour
}

/// Joins everything into one cycle: walks the doubled spanning tree of the
/// sea, taking one free point per visit, and on the last visit to a square
/// absorbs its remaining points and splices in the walks anchored there.
pub fn build_tree_cycle(
    g: &GeometricGraph,
    t: &Tessellation,
    dec: &SeaDecomposition,
    pool: &mut VertexPool,
    walks: &[AnchoredWalk],
) -> Result<HamiltonCycle, StageError> {
    if dec.sea.is_empty() {
        return Err(StageError("sea empty".into()));
    }
    let root = *dec
        .sea
        .iter()
        .max_by_key(|&&q| (pool.unused_in(q), Reverse(q)))
        .unwrap();
    let children = sea_spanning_tree(t, dec, root)
        .ok_or_else(|| StageError("sea squares are not connected in the square graph".into()))?;
    let tour = tree_tour(&children, root);

    let mut last = std::collections::HashMap::new();
    let mut visits = std::collections::HashMap::new();
    for (i, &q) in tour.iter().enumerate() {
        last.insert(q, i);
        *visits.entry(q).or_insert(0usize) += 1;
    }
    let mut anchored: std::collections::HashMap<usize, Vec<&AnchoredWalk>> = std::collections::HashMap::new();
    for w in walks {
        if !dec.in_sea(w.anchor) {
            return Err(StageError(format!("walk anchored outside the sea, in square {}", w.anchor)));
        }
        anchored.entry(w.anchor).or_default().push(w);
    }
    for (&q, &k) in &visits {
        let need = k - 1 + usize::from(!anchored.contains_key(&q));
        if pool.unused_in(q) < need {
            return Err(StageError(format!(
                "square {q} is visited {k} times but has {} free points",
                pool.unused_in(q)
            )));
        }
    }

    let n = g.vertex_count();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for (i, &q) in tour.iter().enumerate() {
        let cur = order.last().copied();
        let joined = |v: usize| cur.is_none_or(|c| g.has_edge(c, v));
        if last[&q] != i {
            let v = pool
                .free_in(t, q)
                .find(|&v| joined(v))
                .or_else(|| pool.free_in(t, q).next())
                .ok_or_else(|| StageError(format!("square {q} ran out of free points")))?;
            pool.take(t, v);
            order.push(v);
            continue;
        }
        let mut items: Vec<Vec<usize>> = anchored.get(&q).map_or_else(Vec::new, |ws| {
            ws.iter().map(|w| w.vertices.clone()).collect()
        });
        let free: Vec<usize> = pool.free_in(t, q).collect();
        for v in free {
            pool.take(t, v);
            items.push(vec![v]);
        }
        while !items.is_empty() {
            let cur = order.last().copied();
            let joined = |v: usize| cur.is_none_or(|c| g.has_edge(c, v));
            let pick = items
                .iter()
                .position(|it| joined(it[0]))
                .map(|i| (i, false))
                .or_else(|| items.iter().position(|it| joined(*it.last().unwrap())).map(|i| (i, true)))
                .unwrap_or((0, false));
            let mut item = items.swap_remove(pick.0);
            if pick.1 {
                item.reverse();
            }
            order.extend(item);
        }
    }

    if order.len() != n {
        return Err(StageError(format!("tour covers {} of {n} points", order.len())));
    }
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        if !g.has_edge(a, b) {
            return Err(StageError(format!(
                "missing edge {a}-{b} between squares {} and {}",
                t.square_of(a),
                t.square_of(b)
            )));
        }
    }
    let cycle = HamiltonCycle::new(order);
    if !verify_hamilton_cycle(g, &cycle) {
        return Err(StageError("assembled order is not a Hamilton cycle".into()));
    }
    Ok(cycle)
}
