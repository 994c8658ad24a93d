//! Branch and cut for Hamiltonicity: the degree-two LP with subtour cuts,
//! branching on fractional edges.

use microlp::{ComparisonOp, Error as LpError, OptimizationDirection, Problem, SolveOutcome, Solution, Variable};

use super::hamilton::{HamiltonCycle, HamiltonOutcome, SearchStats};
use super::UnionFind;
use crate::graph::GeometricGraph;

const EPS: f64 = 1e-6;
/// Budget units charged per LP node, roughly its cost in backtracking nodes.
pub(super) const LP_NODE_COST: u64 = 100;
/// Largest vertex count for the exact (dense) min-cut separation.
const MIN_CUT_LIMIT: usize = 600;

struct Lp {
    n: usize,
    edges: Vec<(usize, usize)>,
    vars: Vec<Variable>,
    /// Every cut found so far.
    pool: Vec<Cut>,
}

/// `sum coef * x[edge] >= rhs`.
#[derive(Clone)]
struct Cut {
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

impl Cut {
    fn violated(&self, x: &[f64]) -> bool {
        self.terms.iter().map(|&(i, a)| a * x[i]).sum::<f64>() < self.rhs - EPS
    }
}

enum Node {
    Infeasible,
    /// LP failure or budget exhausted.
    Unknown,
    Ready(Solution),
}

/// Decides Hamiltonicity of `g` with the edges in `forced` fixed to one.
pub(super) fn branch_and_cut(g: &GeometricGraph, forced: &[Vec<usize>], limit: u64, stats: &mut SearchStats) -> HamiltonOutcome {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Variable> = edges
        .iter()
        .map(|&(u, v)| {
            let lo = if forced[u].contains(&v) { 1.0 } else { 0.0 };
            problem.add_var(0.0, (lo, 1.0))
        })
        .collect();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        at[u].push(i);
        at[v].push(i);
    }
    for list in &at {
        let expr: Vec<(Variable, f64)> = list.iter().map(|&i| (vars[i], 1.0)).collect();
        problem.add_constraint(expr, ComparisonOp::Eq, 2.0);
    }
    let mut lp = Lp { n, edges, vars, pool: Vec::new() };
    let root = match problem.solve() {
        Ok(SolveOutcome::Solution(s)) => s,
        Ok(SolveOutcome::Interrupted(_)) | Err(LpError::InternalError(_)) => return HamiltonOutcome::Exhausted,
        Err(_) => return HamiltonOutcome::ProvenAbsent,
    };
    let mut stack = vec![root];
    let mut unknown = false;
    while let Some(sol) = stack.pop() {
        stats.nodes += LP_NODE_COST;
        if stats.nodes > limit {
            return HamiltonOutcome::Exhausted;
        }
        let sol = match lp.tighten(sol) {
            Node::Infeasible => continue,
            Node::Unknown => {
                unknown = true;
                continue;
            }
            Node::Ready(s) => s,
        };
        let x = lp.values(&sol);
        let pick = (0..x.len())
            .filter(|&i| x[i] > EPS && x[i] < 1.0 - EPS)
            .min_by(|&a, &b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()));
        let Some(e) = pick else {
            match lp.cycle(&x) {
                Some(c) => return HamiltonOutcome::Found(c),
                None => {
                    // an integral point passed every cut, so it is one cycle
                    unknown = true;
                    continue;
                }
            }
        };
        // the child using the edge is explored first
        for fixed in [sol.clone().fix_var(lp.vars[e], 0.0), sol.fix_var(lp.vars[e], 1.0)] {
            match fixed {
                Ok(SolveOutcome::Solution(s)) => stack.push(s),
                Err(LpError::Infeasible) => {}
                _ => unknown = true,
            }
        }
    }
    if unknown {
        HamiltonOutcome::Exhausted
    } else {
        HamiltonOutcome::ProvenAbsent
    }
}

impl Lp {
    fn values(&self, sol: &Solution) -> Vec<f64> {
        self.vars.iter().map(|&v| sol.var_value_raw(v)).collect()
    }

    /// Adds violated cuts until none is left.
    fn tighten(&mut self, mut sol: Solution) -> Node {
        loop {
            let x = self.values(&sol);
            let mut cuts: Vec<Cut> = self.pool.iter().filter(|c| c.violated(&x)).cloned().collect();
            if cuts.is_empty() {
                cuts = self.separate(&x);
                self.pool.extend(cuts.iter().cloned());
            }
            if cuts.is_empty() {
                return Node::Ready(sol);
            }
            for cut in cuts {
                let expr: Vec<(Variable, f64)> = cut.terms.iter().map(|&(i, a)| (self.vars[i], a)).collect();
                sol = match sol.add_constraint(expr, ComparisonOp::Ge, cut.rhs) {
                    Ok(SolveOutcome::Solution(s)) => s,
                    Err(LpError::Infeasible) => return Node::Infeasible,
                    _ => return Node::Unknown,
                };
            }
        }
    }

    /// Subtour cuts violated by `x` (every component of its support, or else
    /// a global minimum cut of weight below two) and blossom cuts whose
    /// handles are the components of the fractional edges.
    fn separate(&self, x: &[f64]) -> Vec<Cut> {
        let mut cuts = self.subtours(x);
        cuts.extend(self.blossoms(x));
        cuts
    }

    fn subtours(&self, x: &[f64]) -> Vec<Cut> {
        let mut uf = UnionFind::new(self.n);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if x[i] > EPS {
                uf.union(u, v);
            }
        }
        let roots: Vec<usize> = (0..self.n).map(|v| uf.find(v)).collect();
        let mut labels: Vec<usize> = roots.clone();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > 1 {
            return labels
                .iter()
                .map(|&r| self.subtour(&roots.iter().map(|&q| q == r).collect::<Vec<_>>()))
                .collect();
        }
        if self.n > MIN_CUT_LIMIT {
            return Vec::new();
        }
        let (value, side) = min_cut(self.n, &self.edges, x);
        if value < 2.0 - EPS {
            vec![self.subtour(&side)]
        } else {
            Vec::new()
        }
    }

    fn crossing_edges(&self, side: &[bool]) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| side[self.edges[i].0] != side[self.edges[i].1]).collect()
    }

    fn subtour(&self, side: &[bool]) -> Cut {
        Cut { terms: self.crossing_edges(side).into_iter().map(|i| (i, 1.0)).collect(), rhs: 2.0 }
    }

    /// For a handle `H` and an odd set `T` of edges leaving it, integrality
    /// and even degree sums give `x(T) - x(δ(H) \ T) <= |T| - 1`.
    fn blossoms(&self, x: &[f64]) -> Vec<Cut> {
        let mut uf = UnionFind::new(self.n);
        let mut touched = vec![false; self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if x[i] > EPS && x[i] < 1.0 - EPS {
                uf.union(u, v);
                touched[u] = true;
                touched[v] = true;
            }
        }
        let roots: Vec<usize> = (0..self.n).map(|v| uf.find(v)).collect();
        let mut handles: Vec<usize> = (0..self.n).filter(|&v| touched[v]).map(|v| roots[v]).collect();
        handles.sort_unstable();
        handles.dedup();
        let mut cuts = Vec::new();
        for h in handles {
            let side: Vec<bool> = roots.iter().map(|&q| q == h).collect();
            let delta = self.crossing_edges(&side);
            // slack of edge e: 1 - x_e inside T, x_e outside
            let mut teeth: Vec<bool> = delta.iter().map(|&i| x[i] > 0.5).collect();
            let mut slack: f64 = delta.iter().map(|&i| x[i].min(1.0 - x[i])).sum();
            if teeth.iter().filter(|&&t| t).count() % 2 == 0 {
                let Some(j) = (0..delta.len()).min_by(|&a, &b| {
                    let (xa, xb) = (x[delta[a]], x[delta[b]]);
                    (2.0 * xa - 1.0).abs().total_cmp(&(2.0 * xb - 1.0).abs())
                }) else {
                    continue;
                };
                teeth[j] = !teeth[j];
                slack += (2.0 * x[delta[j]] - 1.0).abs();
            }
            if slack < 1.0 - EPS {
                let count = teeth.iter().filter(|&&t| t).count() as f64;
                let terms = delta.iter().zip(&teeth).map(|(&i, &t)| (i, if t { -1.0 } else { 1.0 })).collect();
                cuts.push(Cut { terms, rhs: 1.0 - count });
            }
        }
        cuts
    }

    /// The cycle formed by the edges at one, if they form a single cycle.
    fn cycle(&self, x: &[f64]) -> Option<HamiltonCycle> {
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if x[i] > 0.5 {
                nbrs[u].push(v);
                nbrs[v].push(u);
            }
        }
        if nbrs.iter().any(|l| l.len() != 2) {
            return None;
        }
        let mut order = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (usize::MAX, 0);
        for _ in 0..self.n {
            order.push(cur);
            let next = if nbrs[cur][0] != prev { nbrs[cur][0] } else { nbrs[cur][1] };
            prev = cur;
            cur = next;
        }
        let mut sorted = order.clone();
        sorted.sort_unstable();
        sorted.dedup();
        (cur == 0 && sorted.len() == self.n).then(|| HamiltonCycle::new(order))
    }
}

/// Stoer-Wagner on the weights `x`: the minimum cut value and one side.
fn min_cut(n: usize, edges: &[(usize, usize)], x: &[f64]) -> (f64, Vec<bool>) {
    let mut w = vec![vec![0.0f64; n]; n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        w[u][v] += x[i];
        w[v][u] += x[i];
    }
    // members[v]: original vertices merged into v
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = (f64::INFINITY, Vec::new());
    let mut key = vec![0.0f64; n];
    let mut added = vec![false; n];
    while alive.len() > 1 {
        for &v in &alive {
            key[v] = 0.0;
            added[v] = false;
        }
        let (mut prev, mut last) = (usize::MAX, usize::MAX);
        for _ in 0..alive.len() {
            let v = alive.iter().copied().filter(|&v| !added[v]).max_by(|&a, &b| key[a].total_cmp(&key[b])).unwrap();
            added[v] = true;
            prev = last;
            last = v;
            for &u in &alive {
                if !added[u] {
                    key[u] += w[v][u];
                }
            }
        }
        if key[last] < best.0 {
            best = (key[last], members[last].clone());
        }
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &u in &alive {
            let add = w[last][u];
            w[prev][u] += add;
            w[u][prev] += add;
        }
        w[prev][prev] = 0.0;
        alive.retain(|&v| v != last);
    }
    let mut side = vec![false; n];
    for v in best.1 {
        side[v] = true;
    }
    (best.0, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::fixtures::random_graph;
    use crate::algorithms::{find_hamilton_exact, verify_hamilton_cycle, SearchBudget};

    fn decide(g: &GeometricGraph) -> HamiltonOutcome {
        let none = vec![Vec::new(); g.vertex_count()];
        branch_and_cut(g, &none, u64::MAX, &mut SearchStats::default())
    }

    #[test]
    fn agrees_with_backtracking() {
        for seed in 0..300 {
            let n = 4 + (seed % 9) as usize;
            let g = random_graph(n, 0.45, seed);
            if super::super::min_degree(&g) < 2 {
                continue;
            }
            let lp = decide(&g);
            let exact = find_hamilton_exact(&g, SearchBudget::default());
            assert_eq!(lp.is_found(), exact.is_found(), "seed {seed}");
            assert_ne!(lp, HamiltonOutcome::Exhausted);
            if let HamiltonOutcome::Found(c) = &lp {
                assert!(verify_hamilton_cycle(&g, c));
            }
        }
    }

    #[test]
    fn petersen_graph() {
        let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        let g = GeometricGraph::from_edges(10, &e).unwrap();
        assert_eq!(decide(&g), HamiltonOutcome::ProvenAbsent);
    }

    #[test]
    fn min_cut_of_two_triangles() {
        let edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
        let x = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5];
        let (value, side) = min_cut(6, &edges, &x);
        assert!((value - 0.5).abs() < 1e-12);
        assert_eq!(side[0], side[2]);
        assert_ne!(side[2], side[3]);
    }
}
