//! Rotation-extension search for Hamilton cycles.
//!
//! Grows a path greedily (fewest unvisited neighbours first), inserts stray
//! vertices between consecutive path vertices when possible, and otherwise
//! applies rotations `v0..vi vi+1..vk -> v0..vi vk..vi+1` to move the free
//! end. Never proves absence.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::GeometricGraph;
use crate::rng::{rng_from_seed, SimRng};

const NONE: usize = usize::MAX;

struct State<'a> {
    g: &'a GeometricGraph,
    forced: &'a [Vec<usize>],
    path: Vec<usize>,
    pos: Vec<usize>,
    free: Vec<u32>,
    rng: SimRng,
}

impl<'a> State<'a> {
    fn new(g: &'a GeometricGraph, forced: &'a [Vec<usize>], rng: SimRng) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            forced,
            path: Vec::with_capacity(n),
            pos: vec![NONE; n],
            free: (0..n).map(|v| g.degree(v) as u32).collect(),
            rng,
        }
    }

    fn is_forced(&self, u: usize, v: usize) -> bool {
        self.forced[u].contains(&v)
    }

    fn take(&mut self, v: usize) {
        for &x in self.g.neighbors(v) {
            self.free[x] -= 1;
        }
    }

    fn push(&mut self, v: usize) {
        self.pos[v] = self.path.len();
        self.path.push(v);
        self.take(v);
    }

    fn insert_after(&mut self, i: usize, v: usize) {
        self.path.insert(i + 1, v);
        for j in i + 1..self.path.len() {
            self.pos[self.path[j]] = j;
        }
        self.take(v);
    }

    fn reverse_tail(&mut self, from: usize) {
        self.path[from..].reverse();
        for j in from..self.path.len() {
            self.pos[self.path[j]] = j;
        }
    }

    fn extend(&mut self) -> bool {
        let end = *self.path.last().unwrap();
        let mut best = NONE;
        let mut key = (u32::MAX, u32::MAX);
        for &x in self.g.neighbors(end) {
            if self.pos[x] != NONE {
                continue;
            }
            if self.is_forced(end, x) {
                best = x;
                break;
            }
            let k = (self.free[x], self.rng.gen::<u32>());
            if k < key {
                key = k;
                best = x;
            }
        }
        if best == NONE {
            return false;
        }
        self.push(best);
        true
    }

    /// Puts an unvisited vertex between two adjacent path vertices.
    fn insert_stray(&mut self) -> bool {
        let n = self.g.vertex_count();
        for u in 0..n {
            if self.pos[u] != NONE {
                continue;
            }
            for &a in self.g.neighbors(u) {
                let i = self.pos[a];
                if i == NONE || i + 1 >= self.path.len() {
                    continue;
                }
                let b = self.path[i + 1];
                if !self.is_forced(a, b) && self.g.has_edge(u, b) {
                    self.insert_after(i, u);
                    return true;
                }
            }
        }
        false
    }

    /// Moves the end by one rotation, preferring new ends that satisfy `good`.
    fn rotate(&mut self, good: impl Fn(&Self, usize) -> bool) -> bool {
        let len = self.path.len();
        let end = self.path[len - 1];
        let mut options: Vec<usize> = Vec::new();
        let mut preferred: Vec<usize> = Vec::new();
        for &x in self.g.neighbors(end) {
            let i = self.pos[x];
            if i == NONE || i + 2 >= len {
                continue;
            }
            if self.is_forced(x, self.path[i + 1]) {
                continue;
            }
            options.push(i);
            if good(self, self.path[i + 1]) {
                preferred.push(i);
            }
        }
        let pick = if !preferred.is_empty() { &preferred } else { &options };
        match pick.choose(&mut self.rng) {
            Some(&i) => {
                self.reverse_tail(i + 1);
                true
            }
            None => false,
        }
    }

    fn run(&mut self, start: usize, max_steps: u64, steps: &mut u64) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        self.push(start);
        let stop = *steps + max_steps;
        while *steps < stop {
            *steps += 1;
            if self.extend() {
                continue;
            }
            let len = self.path.len();
            if len == n {
                if self.g.has_edge(self.path[n - 1], self.path[0]) {
                    return Some(std::mem::take(&mut self.path));
                }
                let first = self.path[0];
                if !self.rotate(|s, y| s.g.has_edge(y, first)) || self.rng.gen_ratio(1, 8) {
                    self.reverse_tail(0);
                }
                continue;
            }
            if self.insert_stray() {
                continue;
            }
            if !self.rotate(|s, y| s.free[y] > 0) || self.rng.gen_ratio(1, 16) {
                self.reverse_tail(0);
            }
        }
        None
    }
}

/// Rotation-extension runs of `steps` moves each from varying start
/// vertices, until a cycle is found or `total` moves are spent.
/// `forced[v]` lists edges at `v` that every Hamilton cycle uses.
/// Returns the cycle (if any) and the moves spent.
pub(crate) fn rotation_search(
    g: &GeometricGraph,
    forced: &[Vec<usize>],
    seed: u64,
    steps: u64,
    total: u64,
) -> (Option<Vec<usize>>, u64) {
    let n = g.vertex_count();
    let mut rng = rng_from_seed(seed);
    let start = (0..n).min_by_key(|&v| (g.degree(v), v)).unwrap();
    let mut spent = 0;
    let mut first = true;
    while spent < total {
        let v = if first { start } else { rng.gen_range(0..n) };
        first = false;
        let mut state = State::new(g, forced, rng_from_seed(rng.gen()));
        if let Some(p) = state.run(v, steps.min(total - spent), &mut spent) {
            return (Some(p), spent);
        }
    }
    (None, spent)
}
