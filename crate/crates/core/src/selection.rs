//! Continuous selections of `x ↦ conv(P ∩ D)` and the shrinking-ball
//! iterations built on them.
//!
//! The barycentric rule weights each member of an open ball by
//! `(radius − |p − center|)^κ`. Weights vanish on the sphere, so the selected
//! point moves continuously with the ball. Iterating the rule on balls of
//! geometrically shrinking radius converges to a point of the cloud; the
//! radius schedule is either `β^n·r₀` or the two-phase Hilbert schedule
//! driven by `γ_{n+1} = γ·φ(γ_n)`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::euclid::{Ball, HullPoint, Point, PointCloud};
use crate::paraconvexity::constants::{gamma_sequence, hilbert_constant_floor, phi};
use crate::{fmath, sampling};

/// Relative inflation applied once when a ball misses the cloud.
pub const TAU_INFLATE: f64 = 1e-6;
/// Default stopping tolerance, relative to the initial radius.
pub const TOL_REL: f64 = 1e-8;
pub const DEFAULT_KAPPA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Banach,
    /// Two-phase scheme; `constant` is the displacement factor `C`, which
    /// must exceed `(1 + γ²)/(1 − γ²)`-type floors to leave room for `λ`.
    Hilbert {
        constant: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationSchedule {
    pub mode: Mode,
    /// `β` in Banach mode, `γ` in Hilbert mode.
    pub contraction: f64,
    /// Stop once the distance to the cloud is below `tol·r₀`.
    pub tol: f64,
    pub n_max: usize,
    /// Added to Chebyshev radii during reprojection.
    pub slack: f64,
}

impl IterationSchedule {
    pub fn banach(beta: f64) -> Result<IterationSchedule> {
        let s = IterationSchedule {
            mode: Mode::Banach,
            contraction: beta,
            tol: TOL_REL,
            n_max: default_n_max(beta),
            slack: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// Hilbert schedule for a set whose measured nonconvexity is `alpha`:
    /// `C = (1 + α²)/(1 − α²) + margin` and `γ` halfway between `α` and the
    /// largest value whose fixed point stays below `1 − 1/C`.
    pub fn hilbert_for(alpha: f64, margin: f64) -> Result<IterationSchedule> {
        if !(0.0..1.0).contains(&alpha) || !(margin > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must lie in [0, 1) with a positive margin",
            });
        }
        let constant = hilbert_constant_floor(alpha) + margin;
        let lam = 1.0 - 1.0 / constant;
        let gamma_max = fmath::sqrt(lam / (2.0 - lam));
        let gamma = 0.5 * (alpha + gamma_max);
        IterationSchedule::hilbert(gamma.max(f64::EPSILON), constant)
    }

    pub fn hilbert(gamma: f64, constant: f64) -> Result<IterationSchedule> {
        let s = IterationSchedule {
            mode: Mode::Hilbert { constant },
            contraction: gamma,
            tol: TOL_REL,
            n_max: default_n_max(gamma).max(500),
            slack: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "contraction",
                reason: "must lie in (0, 1)",
            });
        }
        if !(self.tol > 0.0) || self.n_max == 0 || !(self.slack >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "schedule",
                reason: "tol and n_max must be positive",
            });
        }
        if let Mode::Hilbert { constant } = self.mode {
            self.hilbert_plan(constant)?;
        }
        Ok(())
    }

    /// `(N, λ, γ_1..γ_N)` of the two-phase scheme.
    fn hilbert_plan(&self, constant: f64) -> Result<(usize, f64, Vec<f64>)> {
        let gamma = self.contraction;
        let lam_hi = 1.0 - 1.0 / constant;
        if !(constant > 1.0) || 2.0 * gamma * gamma / (1.0 + gamma * gamma) >= lam_hi {
            return Err(Error::InvalidParameter {
                name: "constant",
                reason: "the fixed point 2γ²/(1+γ²) must lie below 1 − 1/C",
            });
        }
        let seq = gamma_sequence(gamma, 100_000)?;
        let n = seq
            .terms
            .iter()
            .position(|&g| g < lam_hi)
            .ok_or(Error::InvalidParameter {
                name: "constant",
                reason: "γ_n does not drop below 1 − 1/C",
            })?
            + 1;
        let lam = 0.5 * (seq.get(n) + lam_hi);
        Ok((n, lam, seq.terms[..n].to_vec()))
    }

    /// The geometric factor of the displacement bound: `1/(1 − β)` or
    /// `1/(1 − λ)`.
    pub fn series_factor(&self) -> f64 {
        match self.mode {
            Mode::Banach => 1.0 / (1.0 - self.contraction),
            Mode::Hilbert { constant } => match self.hilbert_plan(constant) {
                Ok((_, lam, _)) => 1.0 / (1.0 - lam),
                Err(_) => f64::INFINITY,
            },
        }
    }
}

/// `max(200, ⌈30/(−ln β)⌉)`: enough halvings of `β^n` to reach `1e-13`.
pub fn default_n_max(beta: f64) -> usize {
    if !(beta > 0.0 && beta < 1.0) {
        return 200;
    }
    (fmath::ceil(30.0 / -fmath::ln(beta)) as usize).max(200)
}

/// Exponent and optional tilt of the barycentric rule. A tilt seed scales
/// each member's weight by a fixed factor in `[1, 2)` drawn from the seed and
/// the member's index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionRule {
    pub kappa: f64,
    pub tilt: Option<u64>,
}

impl Default for SelectionRule {
    fn default() -> Self {
        SelectionRule {
            kappa: DEFAULT_KAPPA,
            tilt: None,
        }
    }
}

impl SelectionRule {
    pub fn new(kappa: f64) -> Result<SelectionRule> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "must be positive",
            });
        }
        Ok(SelectionRule { kappa, tilt: None })
    }

    pub fn tilted(mut self, seed: u64) -> Self {
        self.tilt = Some(seed);
        self
    }

    fn weight(&self, index: u32, p: &Point, balls: &[(Point, f64)]) -> f64 {
        let mut w = 1.0;
        for (c, r) in balls {
            let gap = r - p.dist(c);
            if gap <= 0.0 {
                return 0.0;
            }
            w *= fmath::pow_kappa(gap / r, self.kappa);
        }
        match self.tilt {
            Some(seed) => w * (1.0 + sampling::unit(sampling::mix(seed, index as u64))),
            None => w,
        }
    }

    /// Weighted point of `members`, which must lie in every ball. Falls back
    /// to the member nearest the first center if all weights underflow.
    fn select(
        &self,
        pts: &[Point],
        members: &[u32],
        balls: &[(Point, f64)],
        support: Option<&mut Vec<(usize, f64)>>,
    ) -> Point {
        let dim = pts[members[0] as usize].dim();
        let mut total = 0.0;
        let mut acc = [0.0; 3];
        let mut weights = support;
        if let Some(w) = weights.as_deref_mut() {
            w.clear();
        }
        for &m in members {
            let p = &pts[m as usize];
            let w = self.weight(m, p, balls);
            if w > 0.0 {
                total += w;
                for (a, c) in acc.iter_mut().zip(p.coords()) {
                    *a += w * c;
                }
                if let Some(s) = weights.as_deref_mut() {
                    s.push((m as usize, w));
                }
            }
        }
        if total > 0.0 && total.is_finite() {
            if let Some(s) = weights {
                s.iter_mut().for_each(|e| e.1 /= total);
            }
            let mut c = [0.0; 3];
            for (ci, a) in c.iter_mut().zip(acc) {
                *ci = a / total;
            }
            Point::new(&c[..dim]).expect("finite")
        } else {
            let center = balls[0].0;
            let m = *members
                .iter()
                .min_by(|&&a, &&b| {
                    pts[a as usize]
                        .dist_sq(&center)
                        .total_cmp(&pts[b as usize].dist_sq(&center))
                        .then(a.cmp(&b))
                })
                .unwrap();
            if let Some(s) = weights {
                s.clear();
                s.push((m as usize, 1.0));
            }
            pts[m as usize]
        }
    }
}

/// Barycentric point of `P ∩ D` with weights `∝ (radius − |p − center|)^κ`.
pub fn bary_select(cloud: &PointCloud, d: &Ball, kappa: f64) -> Result<HullPoint> {
    bary_select_with(cloud, d, &SelectionRule::new(kappa)?)
}

pub fn bary_select_with(cloud: &PointCloud, d: &Ball, rule: &SelectionRule) -> Result<HullPoint> {
    cloud.check_dim(&d.center)?;
    let members = cloud.ball_indices(d);
    if members.is_empty() {
        return Err(Error::EmptyIntersection {
            center: d.center,
            radius: d.radius,
        });
    }
    let mut support = Vec::new();
    let point = rule.select(
        cloud.points(),
        &members,
        &[(d.center, d.radius)],
        Some(&mut support),
    );
    Ok(HullPoint { point, support })
}

/// Record of one run of [`iterate_to_member`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelectionTrace {
    pub iterates: Vec<Point>,
    pub step_norms: Vec<f64>,
    /// Radius of the ball each iterate was selected from.
    pub radii: Vec<f64>,
    /// Hilbert mode: the distance bound `γ_n·ε_k` each iterate carries.
    pub certified: Vec<f64>,
    /// Bound on the total displacement.
    pub certified_bound: f64,
    /// The last iterate was replaced by the nearest member of its ball.
    pub snapped: bool,
}

struct Loop<'a> {
    cloud: &'a PointCloud,
    rule: &'a SelectionRule,
    members: Vec<u32>,
    filtered: Vec<u32>,
}

impl<'a> Loop<'a> {
    /// Members of `balls[0]` that lie in every other ball, inflating every
    /// radius once if that comes out empty.
    fn gather(&mut self, balls: &mut [(Point, f64)]) -> Result<()> {
        for attempt in 0..2 {
            if attempt == 1 {
                balls.iter_mut().for_each(|b| b.1 *= 1.0 + TAU_INFLATE);
            }
            let (c, r) = balls[0];
            self.cloud.ball_indices_into(&c, r, &mut self.members);
            let pts = self.cloud.points();
            self.filtered.clear();
            self.filtered.extend(
                self.members
                    .iter()
                    .copied()
                    .filter(|&m| balls[1..].iter().all(|(c, r)| pts[m as usize].dist(c) < *r)),
            );
            if !self.filtered.is_empty() {
                return Ok(());
            }
        }
        Err(Error::EmptyIntersection {
            center: balls[0].0,
            radius: balls[0].1,
        })
    }

    fn select(&self, balls: &[(Point, f64)]) -> Point {
        self.rule
            .select(self.cloud.points(), &self.filtered, balls, None)
    }

    fn nearest_member(&self, q: &Point) -> Point {
        let pts = self.cloud.points();
        let m = *self
            .filtered
            .iter()
            .min_by(|&&a, &&b| {
                pts[a as usize]
                    .dist_sq(q)
                    .total_cmp(&pts[b as usize].dist_sq(q))
                    .then(a.cmp(&b))
            })
            .unwrap();
        pts[m as usize]
    }
}

/// Runs the shrinking-ball loop from `start` and returns a point of the cloud.
///
/// Banach mode selects `h_{n+1}` from `P ∩ D(h_n, β^n·r₀)`. When the new
/// iterate is within `tol·r₀` of the cloud, or so far that the next ball
/// would miss it, it is replaced by the nearest member of the current ball;
/// the result is then an exact member and every step stays inside its ball.
pub fn iterate_to_member(
    cloud: &PointCloud,
    start: Point,
    initial_radius: f64,
    schedule: &IterationSchedule,
) -> Result<(Point, SelectionTrace)> {
    iterate_to_member_with(
        cloud,
        start,
        initial_radius,
        schedule,
        &SelectionRule::default(),
    )
}

pub fn iterate_to_member_with(
    cloud: &PointCloud,
    start: Point,
    initial_radius: f64,
    schedule: &IterationSchedule,
    rule: &SelectionRule,
) -> Result<(Point, SelectionTrace)> {
    cloud.check_dim(&start)?;
    schedule.validate()?;
    if !start.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    let mut trace = SelectionTrace::default();
    let (nearest, d) = cloud.nearest(&start);
    if d <= crate::euclid::Tolerances::default().dup {
        return Ok((cloud.points()[nearest], trace));
    }
    if !(initial_radius > 0.0 && initial_radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "initial_radius",
            reason: "must be positive",
        });
    }
    let mut lp = Loop {
        cloud,
        rule,
        members: Vec::new(),
        filtered: Vec::new(),
    };
    match schedule.mode {
        Mode::Banach => banach(&mut lp, start, initial_radius, schedule, &mut trace),
        Mode::Hilbert { constant } => hilbert(
            &mut lp,
            start,
            initial_radius,
            schedule,
            constant,
            &mut trace,
        ),
    }
}

fn push(trace: &mut SelectionTrace, from: &Point, to: Point, radius: f64) {
    trace.step_norms.push(from.dist(&to));
    trace.iterates.push(to);
    trace.radii.push(radius);
}

fn banach(
    lp: &mut Loop,
    start: Point,
    r0: f64,
    s: &IterationSchedule,
    trace: &mut SelectionTrace,
) -> Result<(Point, SelectionTrace)> {
    let beta = s.contraction;
    let tol = s.tol * r0;
    trace.certified_bound = r0 / (1.0 - beta);
    let mut h = start;
    let mut radius = r0;
    for _ in 0..s.n_max {
        let mut balls = [(h, radius)];
        lp.gather(&mut balls)?;
        let next = lp.select(&balls);
        let d = lp.cloud.distance(&next);
        let next_radius = radius * beta;
        if d <= tol || d >= next_radius {
            let m = lp.nearest_member(&next);
            push(trace, &h, m, balls[0].1);
            trace.snapped = true;
            return Ok((m, core::mem::take(trace)));
        }
        push(trace, &h, next, balls[0].1);
        h = next;
        radius = next_radius;
    }
    Err(Error::NoConvergence {
        iterations: s.n_max,
        distance: lp.cloud.distance(&h),
    })
}

/// Outer phase `k` works in `D_k = D(g_k, λ^k·ε)`; its inner steps select
/// from `P ∩ D_k ∩ D(f_n, φ(γ_n)·λ^k·ε)`, so `f_n` carries the bound
/// `dist(f_n, P) < γ_n·λ^k·ε`, and `g_{k+1} = f_N`.
fn hilbert(
    lp: &mut Loop,
    start: Point,
    eps: f64,
    s: &IterationSchedule,
    constant: f64,
    trace: &mut SelectionTrace,
) -> Result<(Point, SelectionTrace)> {
    let (n, lam, gammas) = s.hilbert_plan(constant)?;
    let tol = s.tol * eps;
    trace.certified_bound = eps / (1.0 - lam);
    let mut g = start;
    let mut scale = eps;
    let mut budget = s.n_max;
    loop {
        let mut outer = [(g, scale)];
        lp.gather(&mut outer)?;
        let mut f = lp.select(&outer);
        let mut prev = g;
        push(trace, &prev, f, outer[0].1);
        trace.certified.push(gammas[0] * scale);
        for gn in &gammas[..n - 1] {
            if budget == 0 {
                return Err(Error::NoConvergence {
                    iterations: s.n_max,
                    distance: lp.cloud.distance(&f),
                });
            }
            budget -= 1;
            let radius = phi(*gn) * scale;
            let mut balls = [(f, radius), outer[0]];
            if lp.gather(&mut balls).is_err() {
                break;
            }
            prev = f;
            f = lp.select(&balls);
            push(trace, &prev, f, balls[0].1);
            trace.certified.push(s.contraction * phi(*gn) * scale);
        }
        let d = lp.cloud.distance(&f);
        let next = scale * lam;
        if d <= tol || d >= next || budget == 0 {
            // members of D_k are within `scale` of g_k
            lp.gather(&mut outer)?;
            let m = lp.nearest_member(&f);
            let last = trace.iterates.len() - 1;
            let from = if last == 0 {
                start
            } else {
                trace.iterates[last - 1]
            };
            trace.iterates[last] = m;
            trace.step_norms[last] = from.dist(&m);
            trace.snapped = true;
            return Ok((m, core::mem::take(trace)));
        }
        g = f;
        scale = next;
    }
}

/// A set-valued map sampled on a finite domain.
#[derive(Debug, Clone)]
pub struct SetValuedMap {
    pub label: String,
    pub domain: Vec<Point>,
    values: Vec<Arc<PointCloud>>,
}

impl SetValuedMap {
    pub fn constant(
        label: impl Into<String>,
        domain: Vec<Point>,
        value: PointCloud,
    ) -> SetValuedMap {
        let v = Arc::new(value);
        let values = domain.iter().map(|_| v.clone()).collect();
        SetValuedMap {
            label: label.into(),
            domain,
            values,
        }
    }

    pub fn from_fn(
        label: impl Into<String>,
        domain: Vec<Point>,
        mut value_at: impl FnMut(&Point) -> PointCloud,
    ) -> Result<SetValuedMap> {
        let values: Vec<Arc<PointCloud>> = domain.iter().map(|x| Arc::new(value_at(x))).collect();
        if let Some(first) = values.first() {
            if values.iter().any(|v| v.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: 0,
                });
            }
        }
        Ok(SetValuedMap {
            label: label.into(),
            domain,
            values,
        })
    }

    pub fn value(&self, i: usize) -> &PointCloud {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }
}

/// Output of [`improve_epsilon_selection`].
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovedSelection {
    pub values: Vec<Point>,
    /// Largest `dist(f_ε(x), f(x))/ε` over the domain.
    pub max_ratio: f64,
    /// The ratio the construction guarantees: `1/(1 − β)` or `1/(1 − λ)`.
    pub certified_ratio: f64,
}

/// Turns an `ε`-selection of `map` into an exact selection that stays within
/// `certified_ratio·ε` of it.
pub fn improve_epsilon_selection(
    map: &SetValuedMap,
    f_eps: &[Point],
    eps: f64,
    schedule: &IterationSchedule,
) -> Result<ImprovedSelection> {
    if f_eps.len() != map.len() {
        return Err(Error::LengthMismatch {
            domain: map.len(),
            values: f_eps.len(),
        });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must be positive",
        });
    }
    schedule.validate()?;
    for (i, f) in f_eps.iter().enumerate() {
        let d = dist_checked(map.value(i), f)?;
        if !(d < eps) {
            return Err(Error::NotEpsilonSelection {
                index: i,
                distance: d,
                eps,
            });
        }
    }
    let mut values = Vec::with_capacity(f_eps.len());
    let mut max_ratio: f64 = 0.0;
    for (i, f) in f_eps.iter().enumerate() {
        let (p, _) = iterate_to_member(map.value(i), *f, eps, schedule)?;
        max_ratio = max_ratio.max(p.dist(f) / eps);
        values.push(p);
    }
    Ok(ImprovedSelection {
        values,
        max_ratio,
        certified_ratio: schedule.series_factor(),
    })
}

fn dist_checked(cloud: &PointCloud, x: &Point) -> Result<f64> {
    cloud.check_dim(x)?;
    Ok(cloud.distance(x))
}

#[cfg(test)]
mod tests;
