//! Uniform bucket grid over a cloud, for nearest-point and ball queries.
//!
//! Both queries return exactly what a linear scan would: distances come from
//! [`Point::dist`], ties resolve to the lowest index, and ball members come
//! back in input order.

use alloc::vec;
use alloc::vec::Vec;

use super::geom::Aabb;
use super::point::{Point, MAX_DIM};
use crate::fmath;

const MAX_CELLS_PER_AXIS: usize = 2048;

#[derive(Clone, Debug)]
pub(crate) struct GridIndex {
    dim: usize,
    origin: [f64; MAX_DIM],
    cell: f64,
    inv_cell: f64,
    cells: [usize; MAX_DIM],
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl GridIndex {
    pub(crate) fn build(points: &[Point]) -> GridIndex {
        let dim = points[0].dim();
        let bbox = Aabb::around(points.iter()).expect("nonempty cloud");
        let mut longest: f64 = 0.0;
        let mut active = 0usize;
        for k in 0..dim {
            longest = longest.max(bbox.extent(k));
        }
        for k in 0..dim {
            if bbox.extent(k) > 1.0e-9 * longest {
                active += 1;
            }
        }
        let n = points.len() as f64;
        let cell = if longest > 0.0 && active > 0 {
            // about two points per occupied cell
            let per_axis = fmath::powf(n / 2.0, 1.0 / active as f64).max(1.0);
            longest / per_axis
        } else {
            1.0
        };
        let mut cell = cell
            .max(longest / MAX_CELLS_PER_AXIS as f64)
            .max(f64::MIN_POSITIVE);
        if cell == 0.0 || !cell.is_finite() {
            cell = 1.0;
        }
        let inv_cell = 1.0 / cell;
        let mut cells = [1usize; MAX_DIM];
        for (k, slot) in cells.iter_mut().enumerate().take(dim) {
            *slot =
                (fmath::floor(bbox.extent(k) * inv_cell) as usize + 1).min(MAX_CELLS_PER_AXIS + 1);
        }
        let origin = *bbox.min.raw();
        let total = cells[0] * cells[1] * cells[2];
        let mut index = GridIndex {
            dim,
            origin,
            cell,
            inv_cell,
            cells,
            starts: vec![0; total + 1],
            items: Vec::new(),
        };

        let ids: Vec<usize> = points
            .iter()
            .map(|p| index.linear(index.cell_of(p)))
            .collect();
        for &id in &ids {
            index.starts[id + 1] += 1;
        }
        for i in 0..total {
            index.starts[i + 1] += index.starts[i];
        }
        let mut fill = index.starts.clone();
        index.items = vec![0; points.len()];
        for (i, &id) in ids.iter().enumerate() {
            index.items[fill[id] as usize] = i as u32;
            fill[id] += 1;
        }
        index
    }

    fn cell_coord(&self, v: f64, axis: usize) -> isize {
        fmath::floor((v - self.origin[axis]) * self.inv_cell) as isize
    }

    fn cell_of(&self, p: &Point) -> [usize; MAX_DIM] {
        let mut c = [0usize; MAX_DIM];
        for (k, slot) in c.iter_mut().enumerate().take(self.dim) {
            *slot = self
                .cell_coord(p.coord(k), k)
                .clamp(0, self.cells[k] as isize - 1) as usize;
        }
        c
    }

    #[inline]
    fn linear(&self, c: [usize; MAX_DIM]) -> usize {
        (c[2] * self.cells[1] + c[1]) * self.cells[0] + c[0]
    }

    #[inline]
    fn bucket(&self, c: [usize; MAX_DIM]) -> &[u32] {
        let id = self.linear(c);
        &self.items[self.starts[id] as usize..self.starts[id + 1] as usize]
    }

    /// Nearest point to `q` as (index, distance); ties go to the lower index.
    pub(crate) fn nearest(&self, points: &[Point], q: &Point) -> (usize, f64) {
        let c0 = self.cell_of(q);
        let mut best = f64::INFINITY;
        let mut best_idx = usize::MAX;
        let max_ring = (0..self.dim).map(|k| self.cells[k]).max().unwrap_or(1);
        for ring in 0..=max_ring {
            if ring > 0 && (ring as f64 - 1.0) * self.cell > best {
                break;
            }
            self.for_ring(c0, ring, |ids| {
                for &i in ids {
                    let d = points[i as usize].dist(q);
                    if d < best || (d == best && (i as usize) < best_idx) {
                        best = d;
                        best_idx = i as usize;
                    }
                }
            });
        }
        (best_idx, best)
    }

    /// Visits the buckets at Chebyshev cell distance exactly `ring` from `c0`.
    fn for_ring(&self, c0: [usize; MAX_DIM], ring: usize, mut visit: impl FnMut(&[u32])) {
        let r = ring as isize;
        let lo = |k: usize| {
            if k < self.dim {
                (c0[k] as isize - r).max(0)
            } else {
                0
            }
        };
        let hi = |k: usize| {
            if k < self.dim {
                (c0[k] as isize + r).min(self.cells[k] as isize - 1)
            } else {
                0
            }
        };
        for z in lo(2)..=hi(2) {
            let dz = (z - c0[2] as isize).abs();
            for y in lo(1)..=hi(1) {
                let dy = (y - c0[1] as isize).abs();
                let inner = dz.max(dy) < r;
                if inner {
                    // only the two x-extremes of this row are on the ring
                    for x in [c0[0] as isize - r, c0[0] as isize + r] {
                        if x >= 0 && x < self.cells[0] as isize {
                            visit(self.bucket([x as usize, y as usize, z as usize]));
                        }
                        if r == 0 {
                            break;
                        }
                    }
                } else {
                    for x in lo(0)..=hi(0) {
                        visit(self.bucket([x as usize, y as usize, z as usize]));
                    }
                }
            }
        }
    }

    /// Indices of points strictly inside the open ball, in ascending order.
    pub(crate) fn ball(&self, points: &[Point], center: &Point, radius: f64, out: &mut Vec<u32>) {
        out.clear();
        if radius <= 0.0 || !radius.is_finite() {
            return;
        }
        let mut lo = [0usize; MAX_DIM];
        let mut hi = [0usize; MAX_DIM];
        for k in 0..self.dim {
            let a = self.cell_coord(center.coord(k) - radius, k);
            let b = self.cell_coord(center.coord(k) + radius, k);
            if b < 0 || a >= self.cells[k] as isize {
                return;
            }
            lo[k] = a.max(0) as usize;
            hi[k] = b.min(self.cells[k] as isize - 1) as usize;
        }
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    for &i in self.bucket([x, y, z]) {
                        if points[i as usize].dist(center) < radius {
                            out.push(i);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
    }

    /// Whether any point other than `skip` lies within `radius` (closed) of `q`.
    /// Only meaningful for `radius` below the cell size.
    pub(crate) fn any_near(
        &self,
        points: &[Point],
        q: &Point,
        radius: f64,
        skip: usize,
    ) -> Option<usize> {
        let c0 = self.cell_of(q);
        let mut hit = None;
        for ring in 0..=1 {
            self.for_ring(c0, ring, |ids| {
                for &i in ids {
                    let i = i as usize;
                    if i != skip && hit.is_none() && points[i].dist(q) <= radius {
                        hit = Some(i);
                    }
                }
            });
        }
        hit
    }
}
