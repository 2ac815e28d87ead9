//! If `z ∈ conv(P ∩ D)` for an open ball `D = D(c, r)` and `dist(z, P) ≤ α·r`,
//! then `dist(z, P ∩ D) ≤ φ(α)·r`. These routines search for violations.
//!
//! Samples are labelled by where `z` sits in the ball: within `(1 − α)·r` of
//! the center every point of `P` that is `α·r`-close to `z` already lies in
//! `D`; closer to the boundary the bound comes from the cap cut off by the
//! tangent plane at `z`.

use alloc::vec::Vec;

use rand::Rng;

use super::constants::phi;
use super::SamplingPlan;
use crate::error::{Error, Result};
use crate::euclid::{Ball, Point, PointCloud};
use crate::sampling;

/// Slack allowed on `dist(z, P ∩ D) ≤ φ(α)·r`.
pub const PROXIMITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityReport {
    pub samples: usize,
    /// Samples meeting `dist(z, P) ≤ α·r`.
    pub admitted: usize,
    pub violations: usize,
    /// Largest `dist(z, P ∩ D)/r` among admitted samples.
    pub worst_ratio: f64,
    pub bound: f64,
    pub near_center: usize,
    pub near_boundary: usize,
    pub worst_point: Option<Point>,
}

impl ProximityReport {
    /// No sample met the hypothesis; the report says nothing.
    pub fn is_vacuous(&self) -> bool {
        self.admitted == 0
    }
}

/// Samples `plan.hull_sample_count` points per refinement step of the hull
/// of `P ∩ d`, keeps those with `dist(z, P) ≤ α·r` and checks the bound.
pub fn verify_hull_proximity(
    cloud: &PointCloud,
    d: &Ball,
    alpha: f64,
    plan: &SamplingPlan,
) -> Result<ProximityReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must lie in [0, 1)",
        });
    }
    cloud.check_dim(&d.center)?;
    let members = cloud.ball_indices(d);
    let inside = cloud.subset(&members).ok_or(Error::EmptyIntersection {
        center: d.center,
        radius: d.radius,
    })?;
    let r = d.radius;
    let bound = phi(alpha);
    let mut report = ProximityReport {
        samples: 0,
        admitted: 0,
        violations: 0,
        worst_ratio: 0.0,
        bound,
        near_center: 0,
        near_boundary: 0,
        worst_point: None,
    };
    let total = plan.hull_sample_count * plan.refine_steps.max(1);
    let dim = cloud.dim();
    let mut w = [0.0; 4];
    let mut rng = sampling::stream(plan.seed, 0x4c45_4d4d);
    for i in 0..total + inside.len() {
        // every member first, then random combinations
        let z = if i < inside.len() {
            inside.points()[i]
        } else {
            let k = rng.gen_range(1..=dim + 1).min(inside.len());
            sampling::dirichlet(&mut rng, &mut w[..k]);
            let mut z = Point::origin(dim);
            for &wi in &w[..k] {
                z += inside.points()[rng.gen_range(0..inside.len())] * wi;
            }
            z
        };
        report.samples += 1;
        if cloud.distance(&z) > alpha * r {
            continue;
        }
        tally(&mut report, &z, d, alpha, inside.distance(&z));
    }
    Ok(report)
}

fn tally(report: &mut ProximityReport, z: &Point, d: &Ball, alpha: f64, to_inside: f64) {
    report.admitted += 1;
    if z.dist(&d.center) <= (1.0 - alpha) * d.radius {
        report.near_center += 1;
    } else {
        report.near_boundary += 1;
    }
    let ratio = to_inside / d.radius;
    if report.worst_point.is_none() || ratio > report.worst_ratio {
        report.worst_ratio = ratio;
        report.worst_point = Some(*z);
    }
    if to_inside > phi(alpha) * d.radius + PROXIMITY_TOL {
        report.violations += 1;
    }
}

/// Outcome of the randomized counterexample search.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximitySuite {
    pub configurations: usize,
    pub violations: usize,
    pub near_center: usize,
    pub near_boundary: usize,
    /// Largest `dist(z, P ∩ D) − φ(α)·r` seen; negative when all hold.
    pub worst_excess: f64,
}

/// Draws `count` planar configurations `(P, D, z)` meeting the hypothesis
/// with `α = dist(z, P)/r` taken as tight as possible.
pub fn random_proximity_suite(count: usize, seed: u64) -> ProximitySuite {
    let mut suite = ProximitySuite {
        configurations: 0,
        violations: 0,
        near_center: 0,
        near_boundary: 0,
        worst_excess: f64::NEG_INFINITY,
    };
    let mut attempt = 0u64;
    let mut pts: Vec<Point> = Vec::new();
    while suite.configurations < count {
        let mut rng = sampling::stream(seed, attempt);
        attempt += 1;
        let r = rng.gen_range(0.5..2.0);
        let c = Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = rng.gen_range(2..=12);
        pts.clear();
        for _ in 0..n {
            // polar draw biased toward the rim, where the bound is tight
            let rho = r * crate::fmath::sqrt(1.5 * rng.gen::<f64>()).min(1.4);
            let t = rng.gen_range(0.0..core::f64::consts::TAU);
            pts.push(c + Point::xy(rho * crate::fmath::cos(t), rho * crate::fmath::sin(t)));
        }
        let Ok(cloud) = PointCloud::deduplicated("proximity", pts.clone(), 1e-12) else {
            continue;
        };
        let d = Ball {
            center: c,
            radius: r,
        };
        let members = cloud.ball_indices(&d);
        if members.len() < 2 {
            continue;
        }
        let k = rng.gen_range(2..=3).min(members.len());
        let mut w = [0.0; 3];
        sampling::dirichlet(&mut rng, &mut w[..k]);
        let mut z = Point::origin(2);
        for &wi in &w[..k] {
            z += cloud.points()[members[rng.gen_range(0..members.len())] as usize] * wi;
        }
        let alpha = cloud.distance(&z) / r;
        if alpha >= 1.0 {
            continue;
        }
        let inside = cloud.subset(&members).expect("nonempty");
        let to_inside = inside.distance(&z);
        suite.configurations += 1;
        if z.dist(&c) <= (1.0 - alpha) * r {
            suite.near_center += 1;
        } else {
            suite.near_boundary += 1;
        }
        let excess = to_inside - phi(alpha) * r;
        suite.worst_excess = suite.worst_excess.max(excess);
        if excess > PROXIMITY_TOL {
            suite.violations += 1;
        }
    }
    suite
}
