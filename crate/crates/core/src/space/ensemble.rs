//! Sampled paraconvexity of the set of retractions onto a cloud.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use super::{combine_retractions, reproject_values, sup_of, FunctionOnBox, ProbeGrid};
use crate::error::{Error, Result};
use crate::euclid::{Point, PointCloud};
use crate::paraconvexity::default_radii;
use crate::retraction::{build_retraction, BuildOptions, RetractionOperator};
use crate::sampling;
use crate::selection::SelectionRule;

const KAPPAS: [f64; 3] = [1.0, 2.0, 4.0];
const BETA_STEPS: [f64; 3] = [0.05, 0.15, 0.25];
const COMBINATIONS: usize = 12;

/// One sampled function-space ball and the combination drawn in it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSample {
    /// Ensemble members inside the ball.
    pub members: Vec<usize>,
    pub weights: Vec<f64>,
    /// Radius of the ball.
    pub r: f64,
    pub beta: f64,
    pub sup_distance: f64,
    /// `β/(1 − β)·(max spread + slack)`.
    pub bound: f64,
    pub max_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceEstimate {
    /// Largest `sup_distance(Q, R)/r`.
    pub ratio: f64,
    /// All ensemble members coincide on the probes.
    pub degenerate: bool,
    pub samples: Vec<SpaceSample>,
    pub gamma_slack: f64,
}

/// `α̂ + {0.05, 0.15, 0.25}`; values reaching 1 are replaced by evenly
/// spaced points of `(α̂, 1)`.
pub fn ensemble_betas(alpha_hat: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, b) in out.iter_mut().enumerate() {
        let v = alpha_hat + BETA_STEPS[i];
        *b = if v < 1.0 {
            v
        } else {
            alpha_hat + (1.0 - alpha_hat) * (i + 1) as f64 / 4.0
        };
    }
    if out[2] <= out[1] || out[1] <= out[0] {
        for (i, b) in out.iter_mut().enumerate() {
            *b = alpha_hat + (1.0 - alpha_hat) * (i + 1) as f64 / 4.0;
        }
    }
    out
}

/// `1e-9·diam(P)` plus the larger of the sampling spacing and the smallest
/// default profile radius. `α̂` says nothing about smaller balls, and below
/// the spacing a finite cloud is nearly 1-paraconvex.
pub fn space_slack(cloud: &PointCloud) -> f64 {
    let diam = cloud.diameter();
    1e-9 * diam.max(f64::MIN_POSITIVE) + cloud.spacing().max(default_radii(diam)[0])
}

fn reprojection_beta(alpha_hat: f64) -> f64 {
    let b = alpha_hat + 0.05;
    if b < 1.0 {
        b
    } else {
        alpha_hat + 0.5 * (1.0 - alpha_hat)
    }
}

/// Builds `ensemble` retractions that differ in `β`, `κ` and tilt seed,
/// draws function-space balls around subsets of them, and reprojects a
/// random convex combination from each ball. Returns the largest observed
/// `sup_distance(Q, R)/r`.
pub fn estimate_space_paraconvexity(
    cloud: Arc<PointCloud>,
    alpha_hat: f64,
    ensemble: usize,
    probes: &ProbeGrid,
    seed: u64,
) -> Result<SpaceEstimate> {
    if ensemble < 2 {
        return Err(Error::InvalidParameter {
            name: "ensemble",
            reason: "need at least two retractions",
        });
    }
    if !(0.0..1.0).contains(&alpha_hat) {
        return Err(Error::InvalidParameter {
            name: "alpha_hat",
            reason: "must lie in [0, 1)",
        });
    }
    let betas = ensemble_betas(alpha_hat);
    let bx = crate::euclid::Aabb::around(probes.probes()).map_or(cloud.bbox().inflate(3.0), |b| {
        b.union(&cloud.bbox().inflate(3.0))
    });
    let mut ops: Vec<Arc<RetractionOperator>> = Vec::with_capacity(ensemble);
    for i in 0..ensemble {
        let mut rule = SelectionRule::new(KAPPAS[(i / 3) % 3])?;
        if i >= 9 {
            rule = rule.tilted(sampling::mix(seed, i as u64));
        }
        let opts = BuildOptions::known(alpha_hat).with_rule(rule).with_box(bx);
        ops.push(Arc::new(build_retraction(
            cloud.clone(),
            betas[i % 3],
            &opts,
        )?));
    }
    let values: Vec<Vec<Point>> = ops
        .iter()
        .map(|r| {
            probes
                .probes()
                .iter()
                .map(|x| r.eval(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut pair = alloc::vec![alloc::vec![0.0; ensemble]; ensemble];
    let mut degenerate = true;
    for i in 0..ensemble {
        for j in i + 1..ensemble {
            let d = sup_of(&values[i], &values[j]);
            pair[i][j] = d;
            pair[j][i] = d;
            if d > crate::euclid::Tolerances::default().geo {
                degenerate = false;
            }
        }
    }
    let gamma_slack = space_slack(&cloud);
    let mut estimate = SpaceEstimate {
        ratio: 0.0,
        degenerate,
        samples: Vec::new(),
        gamma_slack,
    };
    if degenerate {
        return Ok(estimate);
    }
    let beta = reprojection_beta(alpha_hat);
    for s in 0..COMBINATIONS {
        let mut rng = sampling::stream(seed, sampling::mix(0x5350_4143, s as u64));
        let k = rng.gen_range(2..=ensemble.min(4));
        let mut members: Vec<usize> = sampling::permutation(&mut rng, ensemble)
            .into_iter()
            .map(|i| i as usize)
            .take(k)
            .collect();
        members.sort_unstable();
        // ball center: a member or the members' mean, whichever needs the smaller radius
        let mut r = f64::INFINITY;
        for &c in &members {
            r = r.min(members.iter().map(|&m| pair[c][m]).fold(0.0, f64::max));
        }
        let mean: Vec<Point> = (0..probes.len())
            .map(|p| {
                let w = 1.0 / k as f64;
                crate::euclid::weighted_sum(
                    values[0][p].dim(),
                    members.iter().map(|&m| (&values[m][p], w)),
                )
            })
            .collect();
        r = r.min(
            members
                .iter()
                .map(|&m| sup_of(&mean, &values[m]))
                .fold(0.0, f64::max),
        );
        if r <= 0.0 {
            continue;
        }
        let r = r * (1.0 + 1e-9);
        let mut weights = alloc::vec![0.0; k];
        sampling::dirichlet(&mut rng, &mut weights);
        let chosen: Vec<Arc<RetractionOperator>> =
            members.iter().map(|&m| ops[m].clone()).collect();
        let q = Arc::new(combine_retractions(&chosen, &weights)?);
        let at_probes: Vec<(Point, f64)> = (0..probes.len())
            .map(|p| {
                let vals: Vec<Point> = members.iter().map(|&m| values[m][p]).collect();
                q.combine(&vals)
            })
            .collect();
        let source: Arc<dyn FunctionOnBox> = q;
        let rep = reproject_values(
            source,
            &at_probes,
            cloud.clone(),
            beta,
            gamma_slack,
            probes,
            bx,
        )?;
        estimate.ratio = estimate.ratio.max(rep.sup_distance / r);
        estimate.samples.push(SpaceSample {
            members,
            weights,
            r,
            beta,
            sup_distance: rep.sup_distance,
            bound: rep.bound,
            max_spread: rep.max_spread,
        });
    }
    Ok(estimate)
}
