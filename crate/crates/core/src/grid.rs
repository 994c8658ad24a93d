//! Uniform bucket grid over a point set.

use crate::geometry::PointSet;

/// Cells hold point indices; lookups enumerate cells by index offsets.
pub(crate) struct BucketGrid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    cell: f64,
    start: Vec<usize>,
    items: Vec<usize>,
    cell_of: Vec<usize>,
}

/// Upper bound on the number of cells relative to the point count.
const MAX_CELLS_PER_POINT: usize = 4;

impl BucketGrid {
    /// Grid with cells of side at least `cell`, at least one cell per axis.
    pub fn new(ps: &PointSet, cell: f64) -> Self {
        let d = ps.dimension();
        let side = ps.bounds().side();
        let max_cells = (ps.len() * MAX_CELLS_PER_POINT).max(1);
        let mut cell = if cell.is_finite() && cell > 0.0 { cell } else { side };
        let per_axis = |cell: f64| ((side / cell).ceil() as usize).max(1);
        while (per_axis(cell) as f64).powi(d as i32) > max_cells as f64 {
            cell *= 1.25;
        }
        let dims = vec![per_axis(cell); d];
        let mut strides = vec![1usize; d];
        for k in 1..d {
            strides[k] = strides[k - 1] * dims[k - 1];
        }
        let total: usize = dims.iter().product();

        let cell_of: Vec<usize> = ps
            .points()
            .map(|p| {
                p.iter()
                    .zip(&dims)
                    .zip(&strides)
                    .map(|((&x, &g), &s)| (((x / cell) as usize).min(g - 1)) * s)
                    .sum()
            })
            .collect();
        let mut start = vec![0usize; total + 1];
        for &c in &cell_of {
            start[c + 1] += 1;
        }
        for i in 0..total {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut items = vec![0usize; ps.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            items[fill[c]] = i;
            fill[c] += 1;
        }
        Self { dims, strides, cell, start, items, cell_of }
    }

    pub fn cell_side(&self) -> f64 {
        self.cell
    }

    fn coords_of(&self, mut c: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = c / self.strides[k];
            c %= self.strides[k];
        }
        out
    }

    pub fn items_in(&self, c: usize) -> &[usize] {
        &self.items[self.start[c]..self.start[c + 1]]
    }

    /// Calls `f` for every cell whose index differs from `point`'s cell by at
    /// most `radius` on every axis.
    pub fn for_each_cell_within(&self, point: usize, radius: usize, mut f: impl FnMut(usize)) {
        let base = self.coords_of(self.cell_of[point]);
        self.visit_box(&base, radius, |c, _| f(c));
    }

    /// Calls `f` for every cell at exactly `ring` in l-infinity cell distance.
    pub fn for_each_cell_on_ring(&self, point: usize, ring: usize, mut f: impl FnMut(usize)) {
        let base = self.coords_of(self.cell_of[point]);
        self.visit_box(&base, ring, |c, linf| {
            if linf == ring {
                f(c)
            }
        });
    }

    /// True once `ring` covers every cell of the grid from `point`.
    pub fn ring_covers_all(&self, point: usize, ring: usize) -> bool {
        let base = self.coords_of(self.cell_of[point]);
        base.iter().zip(&self.dims).all(|(&b, &g)| b <= ring && g - 1 - b <= ring)
    }

    fn visit_box(&self, base: &[usize], radius: usize, mut f: impl FnMut(usize, usize)) {
        let d = base.len();
        let lo: Vec<usize> = base.iter().map(|&b| b.saturating_sub(radius)).collect();
        let hi: Vec<usize> = base.iter().zip(&self.dims).map(|(&b, &g)| (b + radius).min(g - 1)).collect();
        let mut cur = lo.clone();
        loop {
            let idx: usize = cur.iter().zip(&self.strides).map(|(c, s)| c * s).sum();
            let linf = cur.iter().zip(base).map(|(&c, &b)| c.abs_diff(b)).max().unwrap_or(0);
            f(idx, linf);
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }
}
