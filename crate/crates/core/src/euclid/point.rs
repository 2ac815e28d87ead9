use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fmath;

pub const MAX_DIM: usize = 3;

/// A point of the plane or of space.
///
/// Coordinates beyond `dim` are kept at zero, so arithmetic can run over all
/// three slots without looking at the dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    c: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    pub const fn xy(x: f64, y: f64) -> Self {
        Point {
            c: [x, y, 0.0],
            dim: 2,
        }
    }

    pub const fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point {
            c: [x, y, z],
            dim: 3,
        }
    }

    pub fn new(coords: &[f64]) -> Result<Self> {
        let p = match coords.len() {
            2 => Point::xy(coords[0], coords[1]),
            3 => Point::xyz(coords[0], coords[1], coords[2]),
            n => return Err(Error::UnsupportedDimension(n)),
        };
        if !p.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(p)
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            c: [0.0; MAX_DIM],
            dim: dim as u8,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim as usize]
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> f64 {
        self.c[axis]
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.c[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.c[1]
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.c[2]
    }

    pub(crate) fn raw(&self) -> &[f64; MAX_DIM] {
        &self.c
    }

    pub(crate) fn from_raw(c: [f64; MAX_DIM], dim: usize) -> Self {
        Point { c, dim: dim as u8 }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        fmath::sqrt(self.norm_sq())
    }

    #[inline]
    pub fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.c[0] - other.c[0];
        let dy = self.c[1] - other.c[1];
        let dz = self.c[2] - other.c[2];
        dx * dx + dy * dy + dz * dz
    }

    /// Euclidean distance. Every distance comparison in the crate goes
    /// through this function so that indexed and brute-force searches agree
    /// bit for bit.
    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        fmath::sqrt(self.dist_sq(other))
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        *self + (*other - *self) * t
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        (*self + *other) * 0.5
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        Point {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]],
            dim: self.dim,
        }
    }
}

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        Point {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2]],
            dim: self.dim,
        }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

/// Weighted sum of points; the caller guarantees a nonempty iterator.
pub(crate) fn weighted_sum<'a>(dim: usize, terms: impl Iterator<Item = (&'a Point, f64)>) -> Point {
    let mut acc = [0.0; MAX_DIM];
    for (p, w) in terms {
        acc[0] += w * p.c[0];
        acc[1] += w * p.c[1];
        acc[2] += w * p.c[2];
    }
    Point::from_raw(acc, dim)
}
