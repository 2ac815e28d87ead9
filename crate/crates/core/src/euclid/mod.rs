//! Geometric kernels shared by every construction: distances to clouds,
//! Hausdorff distance, open-ball membership, nearest points of convex hulls
//! and smallest enclosing balls.

mod cloud;
mod geom;
mod hull;
mod index;
mod linalg;
mod miniball;
mod planar;
mod point;

use alloc::vec::Vec;

pub use cloud::PointCloud;
pub use geom::{Aabb, Isometry};
pub use point::{Point, MAX_DIM};

pub(crate) use planar::hull_indices;
pub(crate) use point::weighted_sum;

use crate::error::{Error, Result};

/// Numerical tolerances shared by the kernels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Two points closer than this are the same point.
    pub dup: f64,
    /// Slack for geometric containment checks.
    pub geo: f64,
    /// Accuracy of the distance returned by [`project_to_hull`].
    pub proj: f64,
    /// Weight-sum tolerance of barycentric supports.
    pub weights: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            dup: 1.0e-12,
            geo: 1.0e-9,
            proj: 1.0e-10,
            weights: 1.0e-12,
        }
    }
}

/// Open ball `D(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Ball> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: "must be positive and finite",
            });
        }
        Ok(Ball { center, radius })
    }

    /// Strict membership.
    pub fn contains(&self, p: &Point) -> bool {
        p.dist(&self.center) < self.radius
    }
}

/// A point of a convex hull together with its barycentric certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct HullPoint {
    pub point: Point,
    /// `(index into the cloud, weight)`, indices ascending.
    pub support: Vec<(usize, f64)>,
}

impl HullPoint {
    pub fn vertex(points: &[Point], index: usize) -> HullPoint {
        HullPoint {
            point: points[index],
            support: alloc::vec![(index, 1.0)],
        }
    }

    /// Checks nonnegative weights summing to one and that `point` is their
    /// combination of `points`, both within `tol`.
    pub fn is_certified(&self, points: &[Point], tol: f64) -> bool {
        if self.support.is_empty()
            || self
                .support
                .iter()
                .any(|&(i, w)| w < 0.0 || i >= points.len())
        {
            return false;
        }
        let sum: f64 = self.support.iter().map(|s| s.1).sum();
        let combo = weighted_sum(
            self.point.dim(),
            self.support.iter().map(|&(i, w)| (&points[i], w)),
        );
        let scale = self
            .support
            .iter()
            .map(|&(i, _)| points[i].norm())
            .fold(1.0, f64::max);
        (sum - 1.0).abs() <= tol && combo.dist(&self.point) <= tol * scale
    }
}

/// Chebyshev center and radius of a finite set.
#[derive(Clone, Debug, PartialEq)]
pub struct EnclosingBall {
    pub center: Point,
    pub radius: f64,
    /// Indices of input points on the boundary sphere (at most d + 1).
    pub support: Vec<usize>,
}

/// Distance from `x` to the nearest point of `cloud`.
pub fn dist_to_cloud(x: &Point, cloud: &PointCloud) -> Result<f64> {
    cloud.check_dim(x)?;
    Ok(cloud.distance(x))
}

/// Largest distance from a point of `from` to the set `to`.
pub fn directed_hausdorff(from: &PointCloud, to: &PointCloud) -> Result<f64> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: to.dim(),
        });
    }
    Ok(from
        .points()
        .iter()
        .map(|p| to.distance(p))
        .fold(0.0, f64::max))
}

/// Hausdorff distance between two finite clouds.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Members of `cloud` strictly inside the open ball, in input order.
/// `None` when the intersection is empty.
pub fn members_in_ball(cloud: &PointCloud, ball: &Ball) -> Result<Option<PointCloud>> {
    cloud.check_dim(&ball.center)?;
    Ok(cloud.subset(&cloud.ball_indices(ball)))
}

/// Nearest point to `q` in the convex hull of `set`, with barycentric weights
/// over `set`.
pub fn project_to_hull(q: &Point, set: &PointCloud, tol: &Tolerances) -> Result<HullPoint> {
    set.check_dim(q)?;
    hull::min_norm_point(set.points(), q, tol.proj)
}

/// Same as [`project_to_hull`] over a plain slice (repeats allowed).
pub fn project_to_hull_of(q: &Point, points: &[Point], tol: &Tolerances) -> Result<HullPoint> {
    let first = points.first().ok_or(Error::EmptyCloud)?;
    if first.dim() != q.dim() || points.iter().any(|p| p.dim() != q.dim()) {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            found: first.dim(),
        });
    }
    hull::min_norm_point(points, q, tol.proj)
}

/// Smallest ball containing `set`.
pub fn min_enclosing_ball(set: &PointCloud, tol: &Tolerances) -> EnclosingBall {
    miniball::smallest_ball(set.points(), tol.geo)
}

/// Smallest ball containing a nonempty slice (repeats allowed).
pub fn min_enclosing_ball_of(points: &[Point], tol: &Tolerances) -> Result<EnclosingBall> {
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(miniball::smallest_ball(points, tol.geo))
}

#[cfg(test)]
mod tests;
