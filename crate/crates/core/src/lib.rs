//! Paraconvexity measurement and retraction constructions for finite point
//! clouds in the plane and in space.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs and a seed; file formats, the command line and the
//! verification suite live in the `paraconvex` crate.
//!
//! Module map:
//!
//! - [`euclid`]: points, clouds, nearest-point queries, Hausdorff distance,
//!   projection onto a convex hull and the minimum enclosing ball.
//! - [`paraconvexity`]: the nonconvexity profile of a cloud, paraconvexity
//!   verdicts, the closed-form constants and the two-ball hull proximity check.
//! - [`selection`]: the barycentric selection rule and the shrinking-ball
//!   iteration that turns an approximate selection into an exact one.
//! - [`retraction`]: retractions onto a cloud and their diagnostics.
//! - [`space`]: retractions as points of a sampled sup-metric space:
//!   combinations, reprojection, families and the σ-convex combination.
//! - [`scenes`] and [`oracle`]: deterministic test clouds and a brute-force
//!   planar check of the nonconvexity estimator.
#![no_std]
// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod fmath;
mod sampling;

pub mod euclid;
pub mod oracle;
pub mod paraconvexity;
pub mod retraction;
pub mod scenes;
pub mod selection;
pub mod space;

pub use error::{Error, Result};
pub use euclid::{
    dist_to_cloud, hausdorff_distance, members_in_ball, min_enclosing_ball, project_to_hull, Aabb,
    Ball, EnclosingBall, HullPoint, Isometry, Point, PointCloud, Tolerances,
};
