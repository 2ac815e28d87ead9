use super::point::{Point, MAX_DIM};
use crate::fmath;

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn around<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Aabb> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut min = *first.raw();
        let mut max = min;
        for p in it {
            for k in 0..MAX_DIM {
                min[k] = min[k].min(p.coord(k));
                max[k] = max[k].max(p.coord(k));
            }
        }
        Some(Aabb {
            min: Point::from_raw(min, first.dim()),
            max: Point::from_raw(max, first.dim()),
        })
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(&self.max)
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max.coord(axis) - self.min.coord(axis)
    }

    pub fn diagonal(&self) -> f64 {
        self.min.dist(&self.max)
    }

    /// Scales the box about its center by `factor`. Axes of zero extent are
    /// given the extent of the diagonal first, so a segment's box still has
    /// interior; a single point's box gets unit extent.
    pub fn inflate(&self, factor: f64) -> Aabb {
        let c = self.center();
        let diag = if self.diagonal() > 0.0 {
            self.diagonal()
        } else {
            1.0
        };
        let mut min = [0.0; MAX_DIM];
        let mut max = [0.0; MAX_DIM];
        for k in 0..self.dim() {
            let half = 0.5 * self.extent(k).max(diag) * factor;
            min[k] = c.coord(k) - half;
            max[k] = c.coord(k) + half;
        }
        Aabb {
            min: Point::from_raw(min, self.dim()),
            max: Point::from_raw(max, self.dim()),
        }
    }

    /// Grows every side by `margin`.
    pub fn pad(&self, margin: f64) -> Aabb {
        let mut min = *self.min.raw();
        let mut max = *self.max.raw();
        for k in 0..self.dim() {
            min[k] -= margin;
            max[k] += margin;
        }
        Aabb {
            min: Point::from_raw(min, self.dim()),
            max: Point::from_raw(max, self.dim()),
        }
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        let mut min = *self.min.raw();
        let mut max = *self.max.raw();
        for k in 0..self.dim() {
            min[k] = min[k].min(other.min.coord(k));
            max[k] = max[k].max(other.max.coord(k));
        }
        Aabb {
            min: Point::from_raw(min, self.dim()),
            max: Point::from_raw(max, self.dim()),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|k| p.coord(k) >= self.min.coord(k) && p.coord(k) <= self.max.coord(k))
    }

    /// Point at fractional position `t` (each component in [0, 1]).
    pub fn at(&self, t: &[f64]) -> Point {
        let mut c = [0.0; MAX_DIM];
        for k in 0..self.dim() {
            c[k] = self.min.coord(k) + t[k] * self.extent(k);
        }
        Point::from_raw(c, self.dim())
    }

    /// Largest distance from `p` to a corner of the box.
    pub fn farthest_corner_distance(&self, p: &Point) -> f64 {
        let mut s = 0.0;
        for k in 0..self.dim() {
            let a = (p.coord(k) - self.min.coord(k)).abs();
            let b = (p.coord(k) - self.max.coord(k)).abs();
            let m = a.max(b);
            s += m * m;
        }
        fmath::sqrt(s)
    }
}

/// A similarity of R^d: `x ↦ scale · rotation · x + translation`. With
/// `scale == 1` it is a rigid motion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub rotation: [[f64; MAX_DIM]; MAX_DIM],
    pub translation: [f64; MAX_DIM],
    pub scale: f64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        translation: [0.0; MAX_DIM],
        scale: 1.0,
    };

    /// Rotation by `angle` radians in the xy-plane, then scaling and translation.
    pub fn planar(angle: f64, tx: f64, ty: f64, scale: f64) -> Isometry {
        let (s, c) = (fmath::sin(angle), fmath::cos(angle));
        Isometry {
            rotation: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
            translation: [tx, ty, 0.0],
            scale,
        }
    }

    /// Rotation about the unit `axis` by `angle` (Rodrigues), then translation.
    pub fn spatial(axis: [f64; 3], angle: f64, translation: [f64; 3]) -> Isometry {
        let n = fmath::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = (fmath::sin(angle), fmath::cos(angle));
        let t = 1.0 - c;
        Isometry {
            rotation: [
                [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
                [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
                [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
            ],
            translation,
            scale: 1.0,
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let v = p.raw();
        let mut out = [0.0; MAX_DIM];
        for (i, row) in self.rotation.iter().enumerate().take(p.dim()) {
            let mut acc = 0.0;
            for j in 0..p.dim() {
                acc += row[j] * v[j];
            }
            out[i] = self.scale * acc + self.translation[i];
        }
        Point::from_raw(out, p.dim())
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Isometry) -> Isometry {
        let mut rotation = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in rotation.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..MAX_DIM)
                    .map(|k| self.rotation[i][k] * first.rotation[k][j])
                    .sum();
            }
        }
        let mut translation = [0.0; MAX_DIM];
        for (i, slot) in translation.iter_mut().enumerate() {
            let rt: f64 = (0..MAX_DIM)
                .map(|k| self.rotation[i][k] * first.translation[k])
                .sum();
            *slot = self.scale * rt + self.translation[i];
        }
        Isometry {
            rotation,
            translation,
            scale: self.scale * first.scale,
        }
    }
}
