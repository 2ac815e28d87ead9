//! How far a cloud is from convex, measured ball by ball.
//!
//! For a ball `D` of radius `r` the relative precision is the largest
//! `dist(q, P)/r` over `q ∈ conv(P ∩ D)`; the nonconvexity function takes the
//! sup over all balls of radius `r`. Both sups are estimated from below: ball
//! centers come from the cloud, a Halton sequence over the padded bounding box
//! and midpoints of random pairs, and the inner maximum is found by seeded
//! hill climbing over the hull. Every estimate carries its witness.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::euclid::{Ball, HullPoint, Point, PointCloud};
use crate::{fmath, sampling};

pub mod constants;
pub mod proximity;
mod search;

pub use constants::{
    gamma_sequence, hilbert_constant_floor, phi, phi_and_bounds, threshold_root, Bounds,
    GammaSequence,
};
pub use proximity::{
    random_proximity_suite, verify_hull_proximity, ProximityReport, ProximitySuite,
};

pub(crate) use search::{set_key, HullSearch};

/// Absolute tolerance on a verdict's deficit.
pub const TAU_VERDICT: f64 = 1e-6;

const TAG_PERM: u64 = 0x5045_524d;
const TAG_PAIR: u64 = 0x5041_4952;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    /// Halton and pair-midpoint centers per radius.
    pub ball_center_count: usize,
    /// Cloud points used as centers (a seeded subset when the cloud is larger).
    pub point_centers: usize,
    pub radius_grid: Vec<f64>,
    /// Hill-climbing chains per member set.
    pub hull_sample_count: usize,
    /// Conditional-gradient steps per chain.
    pub refine_steps: usize,
    pub seed: u64,
}

impl SamplingPlan {
    pub const DEFAULT_CENTERS: usize = 192;
    pub const DEFAULT_POINT_CENTERS: usize = 1024;
    pub const DEFAULT_CHAINS: usize = 12;
    pub const DEFAULT_STEPS: usize = 16;

    /// Default plan for `cloud`: 24 log-spaced radii from `0.05·diam` to
    /// `1.5·diam`.
    pub fn for_cloud(cloud: &PointCloud, seed: u64) -> SamplingPlan {
        SamplingPlan {
            ball_center_count: Self::DEFAULT_CENTERS,
            point_centers: Self::DEFAULT_POINT_CENTERS,
            radius_grid: default_radii(cloud.diameter()),
            hull_sample_count: Self::DEFAULT_CHAINS,
            refine_steps: Self::DEFAULT_STEPS,
            seed,
        }
    }

    pub fn with_radii(mut self, radii: Vec<f64>) -> SamplingPlan {
        self.radius_grid = radii;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ball_center_count == 0 || self.hull_sample_count == 0 {
            return Err(Error::InvalidParameter {
                name: "sampling plan",
                reason: "counts must be at least 1",
            });
        }
        if self.radius_grid.is_empty()
            || self
                .radius_grid
                .iter()
                .any(|r| !(r.is_finite() && *r > 0.0))
            || self.radius_grid.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidParameter {
                name: "radius_grid",
                reason: "must be nonempty, positive and strictly increasing",
            });
        }
        Ok(())
    }
}

pub fn default_radii(diameter: f64) -> Vec<f64> {
    let d = if diameter > 0.0 { diameter } else { 1.0 };
    log_spaced(0.05 * d, 1.5 * d, 24)
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (fmath::ln(lo), fmath::ln(hi));
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => fmath::exp(a + (b - a) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// A point of the hull of `P ∩ D` and its distance to the target set.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub ball: Ball,
    pub point: HullPoint,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub r: f64,
    /// In `[0, 2)`; zero when absent.
    pub alpha_hat: f64,
    /// `None` when no sampled ball of this radius met the cloud.
    pub witness: Option<Witness>,
}

impl ProfileEntry {
    pub fn is_absent(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonconvexityProfile {
    pub set_label: String,
    pub entries: Vec<ProfileEntry>,
}

impl NonconvexityProfile {
    pub fn max_alpha(&self) -> f64 {
        self.entries.iter().map(|e| e.alpha_hat).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&ProfileEntry> {
        self.entries
            .iter()
            .filter(|e| !e.is_absent())
            .max_by(|a, b| a.alpha_hat.total_cmp(&b.alpha_hat))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Precision {
    pub value: f64,
    pub point: HullPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParaconvexityVerdict {
    pub alpha_claimed: f64,
    pub holds: bool,
    pub strong_variant: bool,
    /// Largest sampled `dist/r − α`.
    pub worst_deficit: f64,
    pub witness: Option<Witness>,
}

/// Evaluates balls against a fixed cloud, memoizing member sets.
pub(crate) struct Estimator<'a> {
    cloud: &'a PointCloud,
    search: HullSearch,
    weak: BTreeMap<u128, search::Found>,
    strong: BTreeMap<u128, search::Found>,
    scratch: Vec<u32>,
    all: Vec<u32>,
    all_key: u128,
}

impl<'a> Estimator<'a> {
    pub(crate) fn new(cloud: &'a PointCloud, plan: &SamplingPlan) -> Self {
        let all: Vec<u32> = (0..cloud.len() as u32).collect();
        let all_key = set_key(&all);
        Estimator {
            cloud,
            search: HullSearch {
                chains: plan.hull_sample_count,
                steps: plan.refine_steps,
                seed: plan.seed,
            },
            weak: BTreeMap::new(),
            strong: BTreeMap::new(),
            scratch: Vec::new(),
            all,
            all_key,
        }
    }

    /// Largest distance found for the ball, or `None` if it misses the cloud.
    pub(crate) fn ball(&mut self, center: &Point, r: f64, strong: bool) -> Option<search::Found> {
        let swallowed = self.cloud.bbox().farthest_corner_distance(center) < r;
        let (key, members) = if swallowed {
            (self.all_key, core::mem::take(&mut self.all))
        } else {
            let mut m = core::mem::take(&mut self.scratch);
            self.cloud.ball_indices_into(center, r, &mut m);
            (set_key(&m), m)
        };
        let out = if members.is_empty() {
            None
        } else if strong {
            // the strong distance dominates the weak one at every hull point, so
            // the weak chains' visited points are strong candidates too
            if !self.strong.contains_key(&key) {
                let inside = self.cloud.subset(&members).expect("nonempty");
                let (weak, shadow) =
                    self.search
                        .run(self.cloud, &members, key, self.cloud, Some(&inside));
                let (own, _) = self.search.run(self.cloud, &members, key, &inside, None);
                let shadow = shadow.expect("shadow requested");
                self.weak.entry(key).or_insert(weak);
                self.strong.insert(
                    key,
                    if shadow.distance > own.distance {
                        shadow
                    } else {
                        own
                    },
                );
            }
            self.strong.get(&key).cloned()
        } else {
            Some(
                self.weak
                    .entry(key)
                    .or_insert_with(|| {
                        self.search
                            .run(self.cloud, &members, key, self.cloud, None)
                            .0
                    })
                    .clone(),
            )
        };
        if swallowed {
            self.all = members;
        } else {
            self.scratch = members;
        }
        out
    }
}

/// Ball centers for radius `r`, in a fixed order whose prefixes are the
/// centers of smaller plans.
pub(crate) fn ball_centers(
    cloud: &PointCloud,
    plan: &SamplingPlan,
    r: f64,
    perm: &[u32],
) -> Vec<Point> {
    let n = plan.ball_center_count;
    let pts = cloud.points();
    let mut out = Vec::with_capacity(3 * n);
    out.extend(
        perm.iter()
            .take(plan.point_centers)
            .map(|&i| pts[i as usize]),
    );
    let padded = cloud.bbox().pad(r);
    for i in 0..n {
        let h = sampling::halton_point(i as u64, cloud.dim());
        out.push(padded.at(&h[..cloud.dim()]));
    }
    if pts.len() > 1 {
        for i in 0..n {
            let mut rng = sampling::stream(plan.seed, sampling::mix(TAG_PAIR, i as u64));
            let a = rng.gen_range(0..pts.len());
            let b = rng.gen_range(0..pts.len());
            out.push(pts[a].midpoint(&pts[b]));
        }
    }
    out
}

pub(crate) fn cloud_permutation(cloud: &PointCloud, seed: u64) -> Vec<u32> {
    sampling::permutation(&mut sampling::stream(seed, TAG_PERM), cloud.len())
}

fn profile(cloud: &PointCloud, plan: &SamplingPlan, strong: bool) -> Result<NonconvexityProfile> {
    plan.validate()?;
    let perm = cloud_permutation(cloud, plan.seed);
    let mut est = Estimator::new(cloud, plan);
    let mut entries = Vec::with_capacity(plan.radius_grid.len());
    for &r in &plan.radius_grid {
        let mut best: Option<Witness> = None;
        for c in ball_centers(cloud, plan, r, &perm) {
            if let Some(found) = est.ball(&c, r, strong) {
                if best.as_ref().is_none_or(|b| found.distance > b.distance) {
                    best = Some(Witness {
                        ball: Ball {
                            center: c,
                            radius: r,
                        },
                        point: found.point,
                        distance: found.distance,
                    });
                }
            }
        }
        let alpha_hat = best.as_ref().map_or(0.0, |w| w.distance / r);
        entries.push(ProfileEntry {
            r,
            alpha_hat,
            witness: best,
        });
    }
    Ok(NonconvexityProfile {
        set_label: String::from(cloud.label()),
        entries,
    })
}

/// Estimate of the relative precision of the ball `d`: the largest
/// `dist(q, P)/r` over sampled `q ∈ conv(P ∩ d)`.
pub fn relative_precision(cloud: &PointCloud, d: &Ball, plan: &SamplingPlan) -> Result<Precision> {
    cloud.check_dim(&d.center)?;
    let mut est = Estimator::new(cloud, plan);
    let found = est
        .ball(&d.center, d.radius, false)
        .ok_or(Error::EmptyIntersection {
            center: d.center,
            radius: d.radius,
        })?;
    Ok(Precision {
        value: found.distance / d.radius,
        point: found.point,
    })
}

/// Sampled nonconvexity function of `cloud` on the plan's radius grid.
pub fn nonconvexity_function(
    cloud: &PointCloud,
    plan: &SamplingPlan,
) -> Result<NonconvexityProfile> {
    profile(cloud, plan, false)
}

/// The same profile with distances measured to `P ∩ D` instead of `P`.
pub fn strong_nonconvexity_function(
    cloud: &PointCloud,
    plan: &SamplingPlan,
) -> Result<NonconvexityProfile> {
    profile(cloud, plan, true)
}

/// Tests `dist(q, P) ≤ α·r` (or `dist(q, P ∩ D) ≤ α·r` when `strong`) on every
/// sampled ball and hull point.
pub fn check_paraconvexity(
    cloud: &PointCloud,
    alpha: f64,
    strong: bool,
    plan: &SamplingPlan,
) -> Result<ParaconvexityVerdict> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must lie in [0, 1)",
        });
    }
    let prof = profile(cloud, plan, strong)?;
    let worst = prof.worst().cloned();
    let worst_deficit = worst.as_ref().map_or(-alpha, |e| e.alpha_hat - alpha);
    Ok(ParaconvexityVerdict {
        alpha_claimed: alpha,
        holds: worst_deficit <= TAU_VERDICT,
        strong_variant: strong,
        worst_deficit,
        witness: worst.and_then(|e| e.witness),
    })
}

#[cfg(test)]
mod tests;
