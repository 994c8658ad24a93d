//! Grid of small squares (cubes for d > 2) over the box.

use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// Refuses grids larger than this many squares.
pub const MAX_SQUARES: usize = 1 << 25;

/// Partition of a point set into axis-aligned squares of side `s`.
///
/// Squares are indexed row-major with the first axis fastest. The last
/// square on each axis is clipped to the box when `side / s` is not an
/// integer.
#[derive(Debug, Clone)]
pub struct Tessellation {
    side: f64,
    dims: Vec<usize>,
    counts: Vec<usize>,
    square_of_point: Vec<usize>,
    start: Vec<usize>,
    members: Vec<usize>,
}

impl Tessellation {
    /// Tessellates `ps` with squares of side `s`.
    pub fn with_side(ps: &PointSet, s: f64) -> Result<Self> {
        let box_side = ps.bounds().side();
        let d = ps.dimension();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("square side must be positive, got {s}")));
        }
        if box_side / s < 1.0 - 1e-12 {
            return Err(Error::InvalidBox(format!("square side {s} exceeds box side {box_side}")));
        }
        let per_axis = ((box_side / s) - 1e-9).ceil().max(1.0);
        let total = per_axis.powi(d as i32);
        if total > MAX_SQUARES as f64 {
            return Err(Error::InvalidParameter(format!(
                "tessellation would have {total:.3e} squares (limit {MAX_SQUARES})"
            )));
        }
        let per_axis = per_axis as usize;
        let dims = vec![per_axis; d];
        let squares = per_axis.pow(d as u32);

        let mut square_of_point = Vec::with_capacity(ps.len());
        let mut counts = vec![0usize; squares];
        for p in ps.points() {
            let mut q = 0;
            for axis in (0..d).rev() {
                let i = ((p[axis] / s) as usize).min(per_axis - 1);
                q = q * per_axis + i;
            }
            counts[q] += 1;
            square_of_point.push(q);
        }
        let mut start = Vec::with_capacity(squares + 1);
        start.push(0);
        for &c in &counts {
            start.push(start.last().unwrap() + c);
        }
        let mut fill = start.clone();
        let mut members = vec![0; ps.len()];
        for (v, &q) in square_of_point.iter().enumerate() {
            members[fill[q]] = v;
            fill[q] += 1;
        }
        Ok(Self { side: s, dims, counts, square_of_point, start, members })
    }

    /// Square side `s`.
    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn square_count(&self) -> usize {
        self.counts.len()
    }

    pub fn point_count(&self) -> usize {
        self.square_of_point.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, q: usize) -> usize {
        self.counts[q]
    }

    pub fn square_of(&self, v: usize) -> usize {
        self.square_of_point[v]
    }

    /// Points in square `q`, in increasing index order.
    pub fn points_in(&self, q: usize) -> &[usize] {
        &self.members[self.start[q]..self.start[q + 1]]
    }

    /// Integer coordinates of square `q`.
    pub fn coords(&self, q: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut rest = q;
        for &m in &self.dims {
            out.push(rest % m);
            rest /= m;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.dims).rev().fold(0, |acc, (&c, &m)| acc * m + c)
    }

    /// ℓ∞ distance between squares, in squares.
    pub fn linf(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter().zip(&cb).map(|(&x, &y)| x.abs_diff(y)).max().unwrap_or(0)
    }

    /// Euclidean distance between square centres, in units of `s`.
    pub fn centre_distance(&self, a: usize, b: usize) -> f64 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter().zip(&cb).map(|(&x, &y)| (x.abs_diff(y) as f64).powi(2)).sum::<f64>().sqrt()
    }

    /// Squares at the given offset from `q`, if inside the grid.
    pub fn offset(&self, q: usize, delta: &[isize]) -> Option<usize> {
        let mut rest = q;
        let mut idx = 0;
        let mut scale = 1;
        for (&m, &dx) in self.dims.iter().zip(delta) {
            let c = (rest % m) as isize + dx;
            rest /= m;
            if c < 0 || c >= m as isize {
                return None;
            }
            idx += c as usize * scale;
            scale *= m;
        }
        Some(idx)
    }

    /// Calls `f` for every square within ℓ∞ distance `radius` of `q`, `q` included.
    pub fn for_each_within_linf(&self, q: usize, radius: usize, mut f: impl FnMut(usize)) {
        let c = self.coords(q);
        let lo: Vec<usize> = c.iter().map(|&x| x.saturating_sub(radius)).collect();
        let hi: Vec<usize> = c.iter().zip(&self.dims).map(|(&x, &m)| (x + radius).min(m - 1)).collect();
        let mut cur = lo.clone();
        loop {
            f(self.index(&cur));
            let mut axis = 0;
            loop {
                if axis == cur.len() {
                    return;
                }
                if cur[axis] < hi[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = lo[axis];
                axis += 1;
            }
        }
    }
}

/// Adjacency between squares given by a fixed set of offsets.
#[derive(Debug, Clone)]
pub struct SquareGraph {
    offsets: Vec<Vec<isize>>,
}

impl SquareGraph {
    /// Squares whose centres are within Euclidean distance `reach` (in units of `s`).
    pub fn euclidean(d: usize, reach: f64) -> Self {
        let r = reach.floor().max(0.0) as isize;
        let offsets = cube_offsets(d, r)
            .into_iter()
            .filter(|o| o.iter().map(|&x| (x * x) as f64).sum::<f64>() <= reach * reach + 1e-9)
            .collect();
        Self { offsets }
    }

    /// Squares sharing a face: the square lattice.
    pub fn lattice(d: usize) -> Self {
        let offsets = cube_offsets(d, 1)
            .into_iter()
            .filter(|o| o.iter().map(|x| x.unsigned_abs()).sum::<usize>() == 1)
            .collect();
        Self { offsets }
    }

    /// Squares sharing a face or a 2-dimensional diagonal (centre distance ≤ √2).
    pub fn diagonal(d: usize) -> Self {
        let offsets = cube_offsets(d, 1)
            .into_iter()
            .filter(|o| o.iter().map(|x| x.unsigned_abs()).sum::<usize>() <= 2)
            .collect();
        Self { offsets }
    }

    /// All squares within ℓ∞ distance 1 (8 neighbours in the plane).
    pub fn king(d: usize) -> Self {
        Self { offsets: cube_offsets(d, 1) }
    }

    pub fn degree_bound(&self) -> usize {
        self.offsets.len()
    }

    pub fn for_each_neighbour(&self, t: &Tessellation, q: usize, mut f: impl FnMut(usize)) {
        for o in &self.offsets {
            if let Some(x) = t.offset(q, o) {
                f(x);
            }
        }
    }

    pub fn neighbours(&self, t: &Tessellation, q: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.offsets.len());
        self.for_each_neighbour(t, q, |x| out.push(x));
        out
    }
}

/// Non-zero offsets in `[-r, r]^d`.
fn cube_offsets(d: usize, r: isize) -> Vec<Vec<isize>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; d];
    loop {
        if cur.iter().any(|&x| x != 0) {
            out.push(cur.clone());
        }
        let mut axis = 0;
        loop {
            if axis == d {
                return out;
            }
            if cur[axis] < r {
                cur[axis] += 1;
                break;
            }
            cur[axis] = -r;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_poisson, BoxSpec};

    #[test]
    fn counts_partition_the_points() {
        let ps = sample_poisson(BoxSpec::planar(300.0).unwrap(), 4);
        let t = Tessellation::with_side(&ps, 1.3).unwrap();
        assert_eq!(t.counts().iter().sum::<usize>(), ps.len());
        assert_eq!(t.dims(), &[14, 14]);
        for v in 0..ps.len() {
            let q = t.square_of(v);
            assert!(t.points_in(q).contains(&v));
            let c = t.coords(q);
            for (axis, &i) in c.iter().enumerate() {
                let x = ps.point(v)[axis];
                assert!(x >= i as f64 * 1.3 - 1e-12);
                assert!(x <= (i as f64 + 1.0) * 1.3 + 1e-12);
            }
        }
    }

    #[test]
    fn corner_points_share_one_square() {
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![0.01 * i as f64, 0.02]).collect();
        let ps = PointSet::from_points(BoxSpec::planar(100.0).unwrap(), &pts, 0).unwrap();
        let t = Tessellation::with_side(&ps, 1.0).unwrap();
        assert_eq!(t.counts().iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(t.count(0), 7);
    }

    #[test]
    fn rejects_bad_sides() {
        let ps = sample_poisson(BoxSpec::planar(16.0).unwrap(), 1);
        assert!(Tessellation::with_side(&ps, 0.0).is_err());
        assert!(Tessellation::with_side(&ps, 5.0).is_err());
        assert!(Tessellation::with_side(&ps, 1e-6).is_err());
        assert!(Tessellation::with_side(&ps, 4.0).is_ok());
    }

    #[test]
    fn index_round_trip_and_offsets() {
        let ps = sample_poisson(BoxSpec::new(27.0, 3).unwrap(), 2);
        let t = Tessellation::with_side(&ps, 1.0).unwrap();
        assert_eq!(t.square_count(), 27);
        for q in 0..27 {
            assert_eq!(t.index(&t.coords(q)), q);
        }
        assert_eq!(t.offset(0, &[-1, 0, 0]), None);
        assert_eq!(t.offset(0, &[1, 1, 1]), Some(13));
        let mut within = Vec::new();
        t.for_each_within_linf(13, 1, |x| within.push(x));
        assert_eq!(within.len(), 27);
    }

    #[test]
    fn square_graph_degrees() {
        assert_eq!(SquareGraph::lattice(2).degree_bound(), 4);
        assert_eq!(SquareGraph::king(2).degree_bound(), 8);
        assert_eq!(SquareGraph::diagonal(2).degree_bound(), 8);
        assert_eq!(SquareGraph::diagonal(3).degree_bound(), 18);
        // centre distance at most 2: 12 offsets (4 at 1, 4 at √2, 4 at 2)
        assert_eq!(SquareGraph::euclidean(2, 2.0).degree_bound(), 12);
        assert_eq!(SquareGraph::euclidean(2, 0.5).degree_bound(), 0);
    }
}
