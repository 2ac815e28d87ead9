//! Discretely continuous choice of retractions along a family of clouds.
//!
//! The first member gets a direct retraction; each later one repairs the
//! previous operator, which is an approximate retraction onto the new cloud
//! to within the Hausdorff step.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{sup_of, ProbeGrid};
use crate::error::{Error, Result};
use crate::euclid::{hausdorff_distance, Aabb, Point, PointCloud, Tolerances};
use crate::paraconvexity::{nonconvexity_function, threshold_root, SamplingPlan};
use crate::retraction::{
    build_retraction, repair_retraction, BuildOptions, Certificate, RetractionOperator,
};

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOfSets {
    params: Vec<f64>,
    sets: Vec<Arc<PointCloud>>,
    hausdorff_steps: Vec<f64>,
}

impl FamilyOfSets {
    pub fn new(params: Vec<f64>, sets: Vec<PointCloud>) -> Result<FamilyOfSets> {
        if params.len() != sets.len() || sets.is_empty() {
            return Err(Error::LengthMismatch {
                domain: params.len(),
                values: sets.len(),
            });
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter {
                name: "params",
                reason: "must be strictly increasing",
            });
        }
        let hausdorff_steps = sets
            .windows(2)
            .map(|w| hausdorff_distance(&w[0], &w[1]))
            .collect::<Result<_>>()?;
        Ok(FamilyOfSets {
            params,
            sets: sets.into_iter().map(Arc::new).collect(),
            hausdorff_steps,
        })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn sets(&self) -> &[Arc<PointCloud>] {
        &self.sets
    }

    pub fn hausdorff_steps(&self) -> &[f64] {
        &self.hausdorff_steps
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Union of the members' bounding boxes.
    pub fn bbox(&self) -> Aabb {
        self.sets[1..]
            .iter()
            .fold(*self.sets[0].bbox(), |b, s| b.union(s.bbox()))
    }

    /// Probe grid over `working_box` plus every point of every member.
    pub fn probes(&self, working_box: &Aabb, per_axis: usize) -> Result<ProbeGrid> {
        let refs: Vec<&PointCloud> = self.sets.iter().map(|s| s.as_ref()).collect();
        ProbeGrid::over(working_box, per_axis, &refs)
    }
}

#[derive(Debug, Clone)]
pub struct FamilyRetractions {
    pub operators: Vec<Arc<RetractionOperator>>,
    /// Certified `α̂` of each member.
    pub alpha_hat: Vec<f64>,
    /// Human-readable notes on members whose `α̂` exceeds the level at
    /// which a continuous choice is guaranteed.
    pub warnings: Vec<String>,
    pub working_box: Aabb,
}

/// One direct retraction followed by repairs; all operators share the box
/// `options.working_box` or the family's bounding box inflated by
/// `options.box_inflation`.
pub fn build_retraction_family(
    family: &FamilyOfSets,
    beta: f64,
    options: &BuildOptions,
) -> Result<FamilyRetractions> {
    let working_box = options
        .working_box
        .unwrap_or_else(|| family.bbox().inflate(options.box_inflation));
    let mut alpha_hat = Vec::with_capacity(family.len());
    let mut warnings = Vec::new();
    let threshold = threshold_root();
    for (i, set) in family.sets().iter().enumerate() {
        let a = match &options.certificate {
            Certificate::Known(a) => *a,
            Certificate::Sampled(plan) => {
                let plan = SamplingPlan {
                    radius_grid: plan.radius_grid.clone(),
                    ..plan.clone()
                };
                nonconvexity_function(set, &plan)?.max_alpha()
            }
        };
        if beta <= a {
            return Err(Error::FamilyMemberNotParaconvex {
                index: i,
                level: beta,
                deficit: a - beta,
            });
        }
        alpha_hat.push(a);
    }
    // one note per run of members sharing the same alpha_hat
    let mut start = 0;
    while start < alpha_hat.len() {
        let a = alpha_hat[start];
        let end = start + alpha_hat[start..].iter().take_while(|b| **b == a).count();
        let who = if end - start == 1 {
            alloc::format!("member {start}")
        } else {
            alloc::format!("members {start}..{}", end - 1)
        };
        if a >= threshold {
            warnings.push(alloc::format!(
                "{who}: alpha_hat {a:.4} is at or above the cubic threshold {threshold:.6}"
            ));
        } else if a >= 0.5 {
            warnings.push(alloc::format!("{who}: alpha_hat {a:.4} is at or above 1/2"));
        }
        start = end;
    }
    let mut operators: Vec<Arc<RetractionOperator>> = Vec::with_capacity(family.len());
    for (i, set) in family.sets().iter().enumerate() {
        let opts = BuildOptions {
            certificate: Certificate::Known(alpha_hat[i]),
            working_box: Some(working_box),
            ..options.clone()
        };
        let op = if i == 0 {
            build_retraction(set.clone(), beta, &opts)?
        } else {
            repair_retraction(
                operators[i - 1].clone(),
                set.clone(),
                family.hausdorff_steps()[i - 1],
                beta,
                &opts,
            )?
        };
        operators.push(Arc::new(op));
    }
    Ok(FamilyRetractions {
        operators,
        alpha_hat,
        warnings,
        working_box,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusRow {
    /// Hausdorff step between consecutive members.
    pub delta: f64,
    pub sup_dist: f64,
    /// `sup_dist·(1 − α̂)/δ`; zero when both vanish.
    pub ratio: f64,
    pub flagged: bool,
    /// Largest `|x − R_prev(x)|` over probes `x` on the new member. The
    /// repair pins these points, so `sup_dist` is at least this.
    pub prior_displacement: f64,
}

/// Per consecutive pair: the Hausdorff step, the sup distance between the
/// operators and the normalized ratio, flagged above `1 + slack`.
pub fn continuity_modulus(
    family: &FamilyOfSets,
    operators: &[Arc<RetractionOperator>],
    probes: &ProbeGrid,
    alpha_hat: f64,
    slack: f64,
) -> Result<Vec<ModulusRow>> {
    if operators.len() != family.len() {
        return Err(Error::LengthMismatch {
            domain: family.len(),
            values: operators.len(),
        });
    }
    let mut prev: Vec<Point> = Vec::new();
    let mut rows = Vec::with_capacity(family.len().saturating_sub(1));
    for (t, op) in operators.iter().enumerate() {
        let chained = t > 0
            && op
                .prior()
                .is_some_and(|p| Arc::ptr_eq(p, &operators[t - 1]));
        let cur: Vec<Point> = probes
            .probes()
            .iter()
            .enumerate()
            .map(|(k, x)| {
                if chained {
                    op.eval_from_prior(x, prev[k])
                } else {
                    op.eval(x)
                }
            })
            .collect::<Result<_>>()?;
        if t > 0 {
            let delta = family.hausdorff_steps()[t - 1];
            let sup_dist = sup_of(&prev, &cur);
            let ratio = if sup_dist == 0.0 {
                0.0
            } else {
                sup_dist * (1.0 - alpha_hat) / delta
            };
            let set = &family.sets()[t];
            let prior_displacement = probes
                .probes()
                .iter()
                .zip(&prev)
                .filter(|(x, _)| set.distance(x) <= Tolerances::default().dup)
                .map(|(x, y)| x.dist(y))
                .fold(0.0, f64::max);
            rows.push(ModulusRow {
                delta,
                sup_dist,
                ratio,
                flagged: !(ratio <= 1.0 + slack),
                prior_displacement,
            });
        }
        prev = cur;
    }
    Ok(rows)
}
