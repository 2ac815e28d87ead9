//! Retractions of a working box onto a cloud.
//!
//! A direct retraction maps `x ∉ P` by the Banach loop started at `x` with
//! initial radius `2·d(x)`, so `|x − R(x)| ≤ 2·d(x)/(1 − β)`. Repaired and
//! reprojected retractions start the same loop from the value of an older
//! map instead. Every kind returns points of `P` exactly and is the identity
//! on `P`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::euclid::{Aabb, Point, PointCloud, Tolerances};
use crate::paraconvexity::{nonconvexity_function, SamplingPlan};
use crate::selection::{
    iterate_to_member_with, IterationSchedule, SelectionRule, SelectionTrace, TOL_REL,
};
use crate::space::FunctionOnBox;
use crate::{fmath, sampling};

/// How `β` is certified to exceed the nonconvexity of the target.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// A previously measured `α̂`.
    Known(f64),
    /// Measure `α̂` with this plan.
    Sampled(SamplingPlan),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub box_inflation: f64,
    /// Working box to use instead of the inflated bounding box.
    pub working_box: Option<Aabb>,
    pub certificate: Certificate,
    pub rule: SelectionRule,
    pub tol: f64,
    pub n_max: Option<usize>,
}

impl BuildOptions {
    pub fn known(alpha_hat: f64) -> BuildOptions {
        BuildOptions {
            box_inflation: 3.0,
            working_box: None,
            certificate: Certificate::Known(alpha_hat),
            rule: SelectionRule::default(),
            tol: TOL_REL,
            n_max: None,
        }
    }

    pub fn sampled(plan: SamplingPlan) -> BuildOptions {
        BuildOptions {
            certificate: Certificate::Sampled(plan),
            ..BuildOptions::known(0.0)
        }
    }

    pub fn with_rule(mut self, rule: SelectionRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_box(mut self, working_box: Aabb) -> Self {
        self.working_box = Some(working_box);
        self
    }
}

/// Default gap between `β` and the measured `α̂`.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// A repaired operator starts its loop at most this many times
/// `dist(x, P)` away from `x`.
pub const REPAIR_LAG: f64 = 4.0;

#[derive(Clone)]
pub(crate) enum Kind {
    Constant(Point),
    Direct,
    /// Improves `prior`, a retraction onto a nearby set, starting each loop
    /// near `prior(x)` with initial radius `radius`; `lag` bounds the start's
    /// offset from `x` in units of `dist(x, P)`.
    Repaired {
        prior: Arc<RetractionOperator>,
        radius: f64,
        lag: f64,
    },
    /// Pushes `source(x)` onto the target starting from radius
    /// `β·(spread + slack)`.
    Reprojected {
        source: Arc<dyn FunctionOnBox>,
        slack: f64,
    },
}

#[derive(Clone)]
pub struct RetractionOperator {
    label: String,
    target: Arc<PointCloud>,
    schedule: IterationSchedule,
    working_box: Aabb,
    alpha_hat: f64,
    rule: SelectionRule,
    pub(crate) kind: Kind,
}

impl core::fmt::Debug for RetractionOperator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RetractionOperator")
            .field("label", &self.label)
            .field("kind", &self.kind_name())
            .field("beta", &self.schedule.contraction)
            .field("alpha_hat", &self.alpha_hat)
            .field("rule", &self.rule)
            .finish()
    }
}

impl RetractionOperator {
    pub fn target(&self) -> &PointCloud {
        &self.target
    }

    pub fn target_arc(&self) -> &Arc<PointCloud> {
        &self.target
    }

    pub fn schedule(&self) -> &IterationSchedule {
        &self.schedule
    }

    pub fn beta(&self) -> f64 {
        self.schedule.contraction
    }

    pub fn working_box(&self) -> &Aabb {
        &self.working_box
    }

    pub fn alpha_hat(&self) -> f64 {
        self.alpha_hat
    }

    pub fn rule(&self) -> &SelectionRule {
        &self.rule
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `2/(1 − β)` for direct and constant retractions.
    pub fn certified_c(&self) -> Option<f64> {
        match self.kind {
            Kind::Constant(_) | Kind::Direct => Some(2.0 / (1.0 - self.schedule.contraction)),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Constant(_) => "constant",
            Kind::Direct => "direct",
            Kind::Repaired { .. } => "repaired",
            Kind::Reprojected { .. } => "reprojected",
        }
    }

    pub fn prior(&self) -> Option<&Arc<RetractionOperator>> {
        match &self.kind {
            Kind::Repaired { prior, .. } => Some(prior),
            _ => None,
        }
    }

    /// Initial radius of a repair step.
    pub fn repair_radius(&self) -> Option<f64> {
        match self.kind {
            Kind::Repaired { radius, .. } => Some(radius),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        self.eval_traced(x).map(|(p, _)| p)
    }

    /// Value at `x` and the trace of the final loop, if one ran.
    pub fn eval_traced(&self, x: &Point) -> Result<(Point, Option<SelectionTrace>)> {
        self.target.check_dim(x)?;
        if !self.working_box.contains(x) {
            return Err(Error::OutsideWorkingBox { point: *x });
        }
        if let Kind::Constant(p) = self.kind {
            return Ok((p, None));
        }
        let (nearest, d) = self.target.nearest(x);
        if d <= Tolerances::default().dup {
            return Ok((self.target.points()[nearest], None));
        }
        let (start, radius) = match &self.kind {
            Kind::Constant(_) => unreachable!(),
            Kind::Direct => (*x, 2.0 * d),
            Kind::Repaired { prior, radius, lag } => {
                self.repair_start(x, d, prior.eval(x)?, *radius, *lag)
            }
            Kind::Reprojected { source, slack } => {
                let (q, spread) = source.eval_spread(x)?;
                (q, self.schedule.contraction * (spread + slack))
            }
        };
        self.finish(start, radius)
    }

    /// Evaluates a repaired operator given the prior's value at `x`.
    pub(crate) fn eval_from_prior(&self, x: &Point, prior_value: Point) -> Result<Point> {
        let Kind::Repaired { radius, lag, .. } = self.kind else {
            return self.eval(x);
        };
        if !self.working_box.contains(x) {
            return Err(Error::OutsideWorkingBox { point: *x });
        }
        let (nearest, d) = self.target.nearest(x);
        if d <= Tolerances::default().dup {
            return Ok(self.target.points()[nearest]);
        }
        let (start, r) = self.repair_start(x, d, prior_value, radius, lag);
        self.finish(start, r).map(|(p, _)| p)
    }

    /// Start and initial radius of a repair loop at `x`, `d = dist(x, P)`.
    ///
    /// The start is `prior(x)` pulled toward `x` until it is at most
    /// `lag·d` from `x`: `x + μ·(prior(x) − x)`, `μ = min(1, lag·d/|prior(x) − x|)`.
    /// Every repaired operator is then uniform near its target however long
    /// the chain of repairs. The radius `max(μ·radius, (2 − μ)·e)`, `e` the
    /// start's distance to the target, always reaches the target and is
    /// `radius` when `μ = 1`, where `e ≤ radius`.
    fn repair_start(
        &self,
        x: &Point,
        d: f64,
        prior_value: Point,
        radius: f64,
        lag: f64,
    ) -> (Point, f64) {
        let offset = prior_value.dist(x);
        if offset <= lag * d {
            return (prior_value, radius);
        }
        let mu = lag * d / offset;
        let start = *x + (prior_value - *x) * mu;
        let e = self.target.distance(&start);
        (start, (mu * radius).max((2.0 - mu) * e))
    }

    /// Runs the final loop from `start` unless `x` is on the target.
    pub(crate) fn continue_from(&self, x: &Point, start: Point, radius: f64) -> Result<Point> {
        if !self.working_box.contains(x) {
            return Err(Error::OutsideWorkingBox { point: *x });
        }
        let (nearest, d) = self.target.nearest(x);
        if d <= Tolerances::default().dup {
            return Ok(self.target.points()[nearest]);
        }
        self.finish(start, radius).map(|(p, _)| p)
    }

    fn finish(&self, start: Point, radius: f64) -> Result<(Point, Option<SelectionTrace>)> {
        let (p, trace) =
            iterate_to_member_with(&self.target, start, radius, &self.schedule, &self.rule)?;
        Ok((p, Some(trace)))
    }
}

fn degenerate_point(cloud: &PointCloud) -> Option<Point> {
    let first = cloud.points()[0];
    let tau = Tolerances::default().dup;
    cloud
        .points()
        .iter()
        .all(|p| p.dist(&first) <= tau)
        .then_some(first)
}

fn measured_alpha(cloud: &PointCloud, certificate: &Certificate) -> Result<f64> {
    match certificate {
        Certificate::Known(a) => Ok(*a),
        Certificate::Sampled(plan) => Ok(nonconvexity_function(cloud, plan)?.max_alpha()),
    }
}

fn schedule_for(beta: f64, options: &BuildOptions) -> Result<IterationSchedule> {
    let mut s = IterationSchedule::banach(beta)?.with_tol(options.tol);
    if let Some(n) = options.n_max {
        s = s.with_n_max(n);
    }
    s.validate()?;
    Ok(s)
}

fn box_for(cloud: &PointCloud, options: &BuildOptions) -> Result<Aabb> {
    if let Some(b) = options.working_box {
        return Ok(b);
    }
    if !(options.box_inflation >= 2.0) {
        return Err(Error::InvalidParameter {
            name: "box_inflation",
            reason: "must be at least 2",
        });
    }
    Ok(cloud.bbox().inflate(options.box_inflation))
}

/// Builds the direct retraction onto `cloud` with contraction `beta`, which
/// must exceed the certified `α̂`.
pub fn build_retraction(
    cloud: impl Into<Arc<PointCloud>>,
    beta: f64,
    options: &BuildOptions,
) -> Result<RetractionOperator> {
    let target: Arc<PointCloud> = cloud.into();
    let schedule = schedule_for(beta, options)?;
    let working_box = box_for(&target, options)?;
    let label = target.label().into();
    if let Some(p) = degenerate_point(&target) {
        return Ok(RetractionOperator {
            label,
            target,
            schedule,
            working_box,
            alpha_hat: 0.0,
            rule: options.rule,
            kind: Kind::Constant(p),
        });
    }
    let alpha_hat = measured_alpha(&target, &options.certificate)?;
    if beta <= alpha_hat {
        return Err(Error::ContractionNotCertified {
            beta,
            alpha_hat,
            margin: beta - alpha_hat,
        });
    }
    Ok(RetractionOperator {
        label,
        target,
        schedule,
        working_box,
        alpha_hat,
        rule: options.rule,
        kind: Kind::Direct,
    })
}

/// Repairs `prior`, a retraction onto a set within Hausdorff distance
/// `hausdorff_step` of `cloud`, into a retraction onto `cloud`.
///
/// `prior` is an `ε′`-selection of the retraction problem on `cloud` with
/// `ε′ = step·(1 + 1e-6) + τ_geo`; the new map starts each loop at `prior(x)`
/// with initial radius `ε′` and keeps `prior`'s working box.
pub fn repair_retraction(
    prior: Arc<RetractionOperator>,
    cloud: impl Into<Arc<PointCloud>>,
    hausdorff_step: f64,
    beta: f64,
    options: &BuildOptions,
) -> Result<RetractionOperator> {
    let target: Arc<PointCloud> = cloud.into();
    prior.target().check_dim(&target.points()[0])?;
    if !(hausdorff_step >= 0.0 && hausdorff_step.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "hausdorff_step",
            reason: "must be finite and nonnegative",
        });
    }
    let schedule = schedule_for(beta, options)?;
    let label = target.label().into();
    let working_box = prior.working_box;
    if let Some(p) = degenerate_point(&target) {
        return Ok(RetractionOperator {
            label,
            target,
            schedule,
            working_box,
            alpha_hat: 0.0,
            rule: options.rule,
            kind: Kind::Constant(p),
        });
    }
    let alpha_hat = measured_alpha(&target, &options.certificate)?;
    if beta <= alpha_hat {
        return Err(Error::ContractionNotCertified {
            beta,
            alpha_hat,
            margin: beta - alpha_hat,
        });
    }
    let radius = hausdorff_step * (1.0 + 1e-6) + Tolerances::default().geo;
    // the same set again: the prior is already a retraction onto it
    let lag = if hausdorff_step == 0.0 {
        f64::INFINITY
    } else {
        REPAIR_LAG
    };
    Ok(RetractionOperator {
        label,
        target,
        schedule,
        working_box,
        alpha_hat,
        rule: options.rule,
        kind: Kind::Repaired { prior, radius, lag },
    })
}

/// A retraction onto `target` from an arbitrary map: each value `source(x)`
/// is pushed onto the target by the loop with initial radius
/// `β·(spread + slack)`.
pub(crate) fn reprojected(
    source: Arc<dyn FunctionOnBox>,
    target: Arc<PointCloud>,
    working_box: Aabb,
    schedule: IterationSchedule,
    alpha_hat: f64,
    rule: SelectionRule,
) -> RetractionOperator {
    let slack = schedule.slack;
    RetractionOperator {
        label: String::from(source.label()),
        target,
        schedule,
        working_box,
        alpha_hat,
        rule,
        kind: Kind::Reprojected { source, slack },
    }
}

pub fn eval_retraction(r: &RetractionOperator, x: &Point) -> Result<Point> {
    r.eval(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityRow {
    pub eps: f64,
    /// Largest sampled distance below which every displacement is under
    /// `eps`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub rows: Vec<UniformityRow>,
    /// Largest `|R(x₀) − R(x)|/|x₀ − x|` over sampled `x₀ ∈ P`.
    pub lipschitz_at_p_ratio: f64,
    /// Largest `|x − R(x)|/d(x)`.
    pub displacement_ratio: f64,
    pub samples: usize,
}

/// Samples the operator near and away from its target.
///
/// Half of the queries are uniform in the working box, half sit at a
/// log-uniform offset from a random point of the target; the Lipschitz pairs
/// use those target points as `x₀`.
pub fn retraction_diagnostics(
    r: &RetractionOperator,
    eps_grid: &[f64],
    sample_count: usize,
    seed: u64,
) -> Result<UniformityReport> {
    if eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "eps_grid",
            reason: "entries must be positive",
        });
    }
    let pts = r.target().points();
    let bx = r.working_box();
    let dim = r.target().dim();
    let scale = bx.diagonal();
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(sample_count);
    let mut lipschitz: f64 = 0.0;
    let mut displacement: f64 = 0.0;
    for i in 0..sample_count {
        let mut rng = sampling::stream(seed, i as u64);
        let (x, anchor) = if i % 2 == 0 {
            let t: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
            (bx.at(&t), None)
        } else {
            let p = pts[rng.gen_range(0..pts.len())];
            let len = scale * fmath::exp(rng.gen_range(-9.0..-1.5));
            let mut dir = [0.0; 3];
            for d in dir.iter_mut().take(dim) {
                *d = rng.gen_range(-1.0..1.0);
            }
            let u = Point::new(&dir[..dim])?;
            let n = u.norm();
            if n == 0.0 {
                continue;
            }
            let x = p + u * (len / n);
            if !bx.contains(&x) {
                continue;
            }
            (x, Some(p))
        };
        let rx = r.eval(&x)?;
        let d = r.target().distance(&x);
        let e = x.dist(&rx);
        if d > 0.0 {
            displacement = displacement.max(e / d);
        }
        if let Some(p) = anchor {
            let rp = r.eval(&p)?;
            let gap = p.dist(&x);
            if gap > 0.0 {
                lipschitz = lipschitz.max(rp.dist(&rx) / gap);
            }
        }
        samples.push((d, e));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rows = eps_grid
        .iter()
        .map(|&eps| {
            let delta = samples.iter().find(|s| s.1 >= eps).map_or(scale, |s| s.0);
            UniformityRow { eps, delta }
        })
        .collect();
    Ok(UniformityReport {
        rows,
        lipschitz_at_p_ratio: lipschitz,
        displacement_ratio: displacement,
        samples: samples.len(),
    })
}
