//! Retractions as points of a function space with the sup metric, sampled
//! on a finite probe grid.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::euclid::{min_enclosing_ball_of, Aabb, Point, PointCloud, Tolerances};
use crate::retraction::{reprojected, RetractionOperator};
use crate::selection::{IterationSchedule, SelectionRule};

mod ensemble;
mod family;

pub use ensemble::{
    ensemble_betas, estimate_space_paraconvexity, space_slack, SpaceEstimate, SpaceSample,
};
pub use family::{
    build_retraction_family, continuity_modulus, FamilyOfSets, FamilyRetractions, ModulusRow,
};

/// A deterministic map evaluated on a bounded box.
pub trait FunctionOnBox: Send + Sync {
    fn label(&self) -> &str;

    fn eval(&self, x: &Point) -> Result<Point>;

    /// Value at `x` and the radius of the set of values it was formed from;
    /// the radius is zero for maps not built from several values.
    fn eval_spread(&self, x: &Point) -> Result<(Point, f64)> {
        Ok((self.eval(x)?, 0.0))
    }
}

impl FunctionOnBox for RetractionOperator {
    fn label(&self) -> &str {
        RetractionOperator::label(self)
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        RetractionOperator::eval(self, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantMap {
    pub label: String,
    pub value: Point,
}

impl FunctionOnBox for ConstantMap {
    fn label(&self) -> &str {
        &self.label
    }

    fn eval(&self, _x: &Point) -> Result<Point> {
        Ok(self.value)
    }
}

/// Finite stand-in for the sup metric: a grid over a box plus extra points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    probes: Vec<Point>,
    /// Grid points per axis.
    pub density: f64,
}

impl ProbeGrid {
    pub const DEFAULT_PER_AXIS: usize = 40;

    /// `per_axis` points per axis spanning `bx`, followed by every point of
    /// each cloud in `include`.
    pub fn over(bx: &Aabb, per_axis: usize, include: &[&PointCloud]) -> Result<ProbeGrid> {
        if per_axis < 2 {
            return Err(Error::InvalidParameter {
                name: "per_axis",
                reason: "need at least 2 probes per axis",
            });
        }
        let dim = bx.dim();
        let mut probes = Vec::new();
        let n = per_axis;
        let count = n.pow(dim as u32);
        for k in 0..count {
            let mut t = [0.0; 3];
            let mut rest = k;
            for ti in t.iter_mut().take(dim) {
                *ti = (rest % n) as f64 / (n - 1) as f64;
                rest /= n;
            }
            probes.push(bx.at(&t[..dim]));
        }
        for c in include {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
            probes.extend_from_slice(c.points());
        }
        Ok(ProbeGrid {
            probes,
            density: per_axis as f64,
        })
    }

    /// Default grid for a retraction: 40 per axis in the plane, 12 in space,
    /// plus the target.
    pub fn for_operator(r: &RetractionOperator) -> Result<ProbeGrid> {
        let n = if r.target().dim() == 2 {
            Self::DEFAULT_PER_AXIS
        } else {
            12
        };
        ProbeGrid::over(r.working_box(), n, &[r.target()])
    }

    pub fn from_points(probes: Vec<Point>) -> Result<ProbeGrid> {
        if probes.is_empty() {
            return Err(Error::EmptyCloud);
        }
        Ok(ProbeGrid {
            probes,
            density: 0.0,
        })
    }

    pub fn probes(&self) -> &[Point] {
        &self.probes
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

/// `max` over probes of `|f(x) − g(x)|`.
pub fn sup_distance(
    f: &dyn FunctionOnBox,
    g: &dyn FunctionOnBox,
    probes: &ProbeGrid,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in probes.probes() {
        worst = worst.max(f.eval(x)?.dist(&g.eval(x)?));
    }
    Ok(worst)
}

pub(crate) fn sup_of(a: &[Point], b: &[Point]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.dist(q)).fold(0.0, f64::max)
}

/// Pointwise convex combination `Q(x) = Σ wᵢ Rᵢ(x)` of retractions onto a
/// common target.
#[derive(Clone)]
pub struct ConvexCombination {
    label: String,
    operators: Vec<Arc<RetractionOperator>>,
    weights: Vec<f64>,
}

impl ConvexCombination {
    pub fn operators(&self) -> &[Arc<RetractionOperator>] {
        &self.operators
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn target(&self) -> &Arc<PointCloud> {
        self.operators[0].target_arc()
    }

    /// `Q(x)` and the Chebyshev radius of `{Rᵢ(x)}`.
    pub fn eval_with_spread(&self, x: &Point) -> Result<(Point, f64)> {
        let values: Vec<Point> = self
            .operators
            .iter()
            .map(|r| r.eval(x))
            .collect::<Result<_>>()?;
        Ok(self.combine(&values))
    }

    /// Weighted sum and the Chebyshev radius of the values with positive
    /// weight. Equal values combine to themselves exactly.
    pub(crate) fn combine(&self, values: &[Point]) -> (Point, f64) {
        let used: Vec<(&Point, f64)> = values
            .iter()
            .zip(self.weights.iter().copied())
            .filter(|e| e.1 > 0.0)
            .collect();
        let first = *used[0].0;
        if used.iter().all(|e| *e.0 == first) {
            return (first, 0.0);
        }
        let q = crate::euclid::weighted_sum(first.dim(), used.iter().copied());
        let pts: Vec<Point> = used.iter().map(|e| *e.0).collect();
        let spread = min_enclosing_ball_of(&pts, &Tolerances::default()).map_or(0.0, |b| b.radius);
        (q, spread)
    }
}

impl FunctionOnBox for ConvexCombination {
    fn label(&self) -> &str {
        &self.label
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        self.eval_with_spread(x).map(|v| v.0)
    }

    fn eval_spread(&self, x: &Point) -> Result<(Point, f64)> {
        self.eval_with_spread(x)
    }
}

pub(crate) fn check_simplex(weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights);
    }
    Ok(())
}

pub fn combine_retractions(
    operators: &[Arc<RetractionOperator>],
    weights: &[f64],
) -> Result<ConvexCombination> {
    if operators.len() != weights.len() || operators.is_empty() {
        return Err(Error::LengthMismatch {
            domain: operators.len(),
            values: weights.len(),
        });
    }
    check_simplex(weights)?;
    let first = operators[0].target();
    if operators
        .iter()
        .any(|r| !Arc::ptr_eq(r.target_arc(), operators[0].target_arc()) && r.target() != first)
    {
        return Err(Error::MismatchedTargets);
    }
    Ok(ConvexCombination {
        label: String::from("combination"),
        operators: operators.to_vec(),
        weights: weights.to_vec(),
    })
}

/// A reprojected retraction with its certified and measured distance from
/// the source map.
#[derive(Debug, Clone)]
pub struct Reprojection {
    pub operator: RetractionOperator,
    /// `β/(1 − β)·(max spread + slack)`.
    pub bound: f64,
    pub max_spread: f64,
    /// Measured sup distance from the source on the probes.
    pub sup_distance: f64,
}

/// Turns `q` into a retraction onto `target` and measures the displacement.
///
/// Checks `dist(q(x), P) < β·(spread(x) + slack)` at every probe first, then
/// evaluates the new operator on all probes.
pub fn reproject_to_retraction(
    q: Arc<dyn FunctionOnBox>,
    target: Arc<PointCloud>,
    beta: f64,
    gamma_slack: f64,
    probes: &ProbeGrid,
    working_box: Aabb,
) -> Result<Reprojection> {
    if !(gamma_slack > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma_slack",
            reason: "must be positive",
        });
    }
    let values: Vec<(Point, f64)> = probes
        .probes()
        .iter()
        .map(|x| q.eval_spread(x))
        .collect::<Result<_>>()?;
    reproject_values(q, &values, target, beta, gamma_slack, probes, working_box)
}

/// [`reproject_to_retraction`] with `q.eval_spread` already evaluated at
/// every probe.
pub(crate) fn reproject_values(
    q: Arc<dyn FunctionOnBox>,
    values: &[(Point, f64)],
    target: Arc<PointCloud>,
    beta: f64,
    gamma_slack: f64,
    probes: &ProbeGrid,
    working_box: Aabb,
) -> Result<Reprojection> {
    let schedule = IterationSchedule::banach(beta)?.with_slack(gamma_slack);
    let mut max_spread: f64 = 0.0;
    let mut sources = Vec::with_capacity(probes.len());
    for (x, &(qx, spread)) in probes.probes().iter().zip(values) {
        let bound = beta * (spread + gamma_slack);
        let d = target.distance(&qx);
        if target.distance(x) > Tolerances::default().dup && !(d < bound) {
            return Err(Error::ReprojectionPrecondition {
                probe: *x,
                distance: d,
                bound,
            });
        }
        max_spread = max_spread.max(spread);
        sources.push((qx, bound));
    }
    let operator = reprojected(
        q,
        target,
        working_box,
        schedule,
        0.0,
        SelectionRule::default(),
    );
    let mut sup: f64 = 0.0;
    for (x, (qx, radius)) in probes.probes().iter().zip(&sources) {
        sup = sup.max(operator.continue_from(x, *qx, *radius)?.dist(qx));
    }
    Ok(Reprojection {
        operator,
        bound: beta / (1.0 - beta) * (max_spread + gamma_slack),
        max_spread,
        sup_distance: sup,
    })
}

/// `R(Σ wᵢ yᵢ)` for points `yᵢ` of the target.
pub fn sigma_convex_combination(
    r: &RetractionOperator,
    ys: &[Point],
    weights: &[f64],
) -> Result<Point> {
    if ys.len() != weights.len() || ys.is_empty() {
        return Err(Error::LengthMismatch {
            domain: ys.len(),
            values: weights.len(),
        });
    }
    check_simplex(weights)?;
    let tol = Tolerances::default().geo;
    for (i, y) in ys.iter().enumerate() {
        r.target().check_dim(y)?;
        let d = r.target().distance(y);
        if d > tol {
            return Err(Error::NotInTarget {
                index: i,
                distance: d,
            });
        }
    }
    let z = crate::euclid::weighted_sum(ys[0].dim(), ys.iter().zip(weights.iter().copied()));
    r.eval(&z)
}
