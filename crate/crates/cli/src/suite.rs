//! The acceptance criteria, run in order with per-criterion checks, files
//! and timings.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use paraconvex_core::paraconvexity::{
    gamma_sequence, nonconvexity_function, phi_and_bounds, random_proximity_suite, threshold_root,
};
use paraconvex_core::retraction::{build_retraction, BuildOptions};
use paraconvex_core::scenes::{Generator, Scene, Sweep, SweepParameter};
use paraconvex_core::space::sigma_convex_combination;
use paraconvex_core::{Point, PointCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::artifacts::{field_svg, CriterionRow, Emitter, ProximityRow, SigmaRow};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::experiments::{
    constants_rows, family_run, gamma_rows, modulus_rows, modulus_svg, oracle_rows, profile_rows,
    profile_svg, retraction_rows, space_estimate, space_rows,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub checks: Vec<Check>,
    /// Set when the criterion stopped on an error.
    pub error: Option<String>,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
}

impl CriterionResult {
    pub fn within_time(&self) -> bool {
        self.limit_seconds.is_none_or(|l| self.seconds < l)
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed) && self.within_time()
    }

    /// Failed checks, an error, or a blown time budget, in one line.
    pub fn detail(&self) -> String {
        if let Some(e) = &self.error {
            return format!("error: {e}");
        }
        let mut parts: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        if !self.within_time() {
            parts.push(format!(
                "runtime over {} s",
                self.limit_seconds.unwrap_or(0.0)
            ));
        }
        if parts.is_empty() {
            self.checks
                .iter()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect::<Vec<_>>()
                .join("; ")
        } else {
            parts.join("; ")
        }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:2} {} {}: {}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.detail()
        )
    }
}

pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
    pub files: Emitter,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed())
    }

    pub fn rows(&self) -> Vec<CriterionRow> {
        criterion_rows(&self.criteria)
    }
}

fn criterion_rows(criteria: &[CriterionResult]) -> Vec<CriterionRow> {
    criteria
        .iter()
        .map(|c| CriterionRow {
            id: c.id,
            name: c.name.clone(),
            passed: c.passed(),
            detail: c.detail(),
        })
        .collect()
}

#[derive(Default)]
struct Ctx {
    checks: Vec<Check>,
    files: Emitter,
}

impl Ctx {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

type Body = fn(&RunConfig, &mut Ctx) -> Result<(), CliError>;

pub const CRITERIA: [(usize, &str, Option<f64>); 10] = [
    (1, "constants", Some(1.0)),
    (2, "threshold", Some(1.0)),
    (3, "gamma recursion", Some(1.0)),
    (4, "convexity baseline", Some(120.0)),
    (5, "retraction bound", Some(300.0)),
    (6, "two-ball proximity suite", Some(120.0)),
    (7, "reprojection bound", Some(600.0)),
    (8, "continuity modulus", Some(600.0)),
    (9, "sigma structure", Some(60.0)),
    (10, "determinism", None),
];

const BODIES: [Body; 9] = [
    constants,
    threshold,
    gamma,
    convexity,
    retraction,
    proximity,
    reprojection,
    modulus,
    sigma,
];

fn run_one(id: usize, cfg: &RunConfig, files: &mut Emitter) -> CriterionResult {
    let (_, name, limit) = CRITERIA[id - 1];
    let mut ctx = Ctx::default();
    let t = Instant::now();
    let error = BODIES[id - 1](cfg, &mut ctx).err().map(|e| e.to_string());
    let seconds = t.elapsed().as_secs_f64();
    files.extend(ctx.files);
    CriterionResult {
        id,
        name: name.into(),
        checks: ctx.checks,
        error,
        seconds,
        limit_seconds: limit,
    }
}

/// Criteria 1 to 9 with their files.
pub fn run_criteria(
    cfg: &RunConfig,
    ids: &[usize],
    progress: &mut dyn FnMut(&CriterionResult),
) -> (Vec<CriterionResult>, Emitter) {
    let mut files = Emitter::default();
    let mut out = Vec::new();
    for &id in ids.iter().filter(|&&i| (1..=9).contains(&i)) {
        let r = run_one(id, cfg, &mut files);
        progress(&r);
        out.push(r);
    }
    (out, files)
}

/// Every criterion. The determinism check runs criteria 1 to 9 a second
/// time and compares the CSV bytes.
pub fn run_verification_suite(
    cfg: &RunConfig,
    progress: &mut dyn FnMut(&CriterionResult),
) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    let all: Vec<usize> = (1..=9).collect();
    let (mut criteria, files) = run_criteria(cfg, &all, progress);
    let t = Instant::now();
    let (_, again) = run_criteria(cfg, &all, &mut |_| {});
    let r = CriterionResult {
        id: 10,
        name: CRITERIA[9].1.into(),
        checks: compare_csv(&files, &again),
        error: None,
        seconds: t.elapsed().as_secs_f64(),
        limit_seconds: None,
    };
    progress(&r);
    criteria.push(r);
    Ok(SuiteReport { criteria, files })
}

/// Byte comparison of every CSV in `a` against `b`.
pub fn compare_csv(a: &Emitter, b: &Emitter) -> Vec<Check> {
    let names: Vec<&str> = a.names().filter(|n| n.ends_with(".csv")).collect();
    let other: Vec<&str> = b.names().filter(|n| n.ends_with(".csv")).collect();
    let differing: Vec<&str> = names
        .iter()
        .copied()
        .filter(|n| a.get(n) != b.get(n))
        .collect();
    let detail = if differing.is_empty() {
        "all byte-identical".into()
    } else {
        format!("differ: {}", differing.join(", "))
    };
    vec![
        Check {
            name: "same files".into(),
            passed: names == other,
            detail: format!("{} csv files", names.len()),
        },
        Check {
            name: "identical bytes".into(),
            passed: differing.is_empty(),
            detail,
        },
    ]
}

fn density(cfg: &RunConfig, default: usize) -> usize {
    cfg.density.unwrap_or(default)
}

fn constants(_cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let rows = constants_rows(&grid)?;
    let mut worst: f64 = 0.0;
    let mut ordered = true;
    for (a, row) in grid.iter().zip(&rows) {
        let b = phi_and_bounds(*a)?;
        let phi = (2.0 * a - a * a).sqrt();
        let banach = a / (1.0 - a);
        let hilbert = a * (1.0 + a * a) / (1.0 - a * a);
        worst = worst
            .max((b.phi - phi).abs())
            .max((b.banach - banach).abs())
            .max((b.hilbert - hilbert).abs());
        if *a > 0.0
            && row.hilbert_bound.partial_cmp(&row.banach_bound) != Some(std::cmp::Ordering::Less)
        {
            ordered = false;
        }
    }
    ctx.check(
        "closed forms",
        worst <= 1e-12,
        format!("max error {worst:.2e}"),
    );
    ctx.check(
        "hilbert below banach",
        ordered,
        "for every alpha > 0".into(),
    );
    ctx.files.csv("c1_constants.csv", &rows)?;
    Ok(())
}

fn threshold(_cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let a = threshold_root();
    let residual = (a + a * a + a * a * a - 1.0).abs();
    ctx.check("residual", residual <= 1e-12, format!("{residual:.2e}"));
    ctx.check(
        "bracket",
        a > 0.5436 && a < 0.5438 && a > 0.5,
        format!("root {a:.12}"),
    );
    Ok(())
}

fn gamma(_cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let gammas = [0.3, 0.5, 0.9];
    for g in gammas {
        let s = gamma_sequence(g, 500)?;
        let settled = s.settled_at();
        let decreasing = (1..settled).all(|n| s.get(n + 1) < s.get(n));
        let flat = (settled..500).all(|n| s.get(n + 1) == s.get(n));
        ctx.check(
            &format!("gamma {g} decreasing"),
            decreasing && flat,
            format!("strict decrease through n = {settled}, constant after"),
        );
        let gap = (s.get(500) - s.fixed_point).abs();
        ctx.check(
            &format!("gamma {g} limit"),
            gap <= 1e-9,
            format!("|gamma_500 - fixed point| = {gap:.2e}"),
        );
    }
    ctx.files.csv("c3_gamma.csv", &gamma_rows(&gammas, 500)?)?;
    Ok(())
}

fn convexity(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let scene = Scene::new(
        "hexagon",
        Generator::ConvexPolygon { sides: 6 },
        density(cfg, 30_000),
    );
    let cloud = Arc::new(paraconvex_core::scenes::generate_scene(&scene)?);
    let prof = nonconvexity_function(&cloud, &cfg.plan(&cloud))?;
    let alpha = prof.max_alpha();
    ctx.check(
        "profile",
        alpha <= 0.05,
        format!("max alpha_hat {alpha:.4} over {} radii", prof.entries.len()),
    );
    let radii: Vec<f64> = prof
        .entries
        .iter()
        .rev()
        .step_by(6)
        .take(3)
        .map(|e| e.r)
        .collect();
    let orows = oracle_rows(&scene.name, &cloud, &prof, &radii)?;
    let gap = orows
        .iter()
        .map(|r| (r.alpha_hat - r.oracle).abs())
        .fold(0.0, f64::max);
    ctx.check(
        "oracle",
        gap <= 0.02,
        format!("max |estimate - oracle| {gap:.4} at {} radii", orows.len()),
    );
    let est = space_estimate(cloud.clone(), alpha, cfg, cfg.ensemble)?;
    ctx.check(
        "space",
        est.ratio <= 1e-6,
        format!("space ratio {:.3e}", est.ratio),
    );
    ctx.files
        .csv("c4_profile.csv", &profile_rows(&scene.name, &prof))?;
    ctx.files.csv("c4_oracle.csv", &orows)?;
    ctx.files
        .csv("c4_space.csv", &space_rows(&scene.name, &est))?;
    ctx.files
        .text("c4_profile.svg", profile_svg(&scene.name, &prof));
    Ok(())
}

/// Half uniform in the box, half at log-uniform offsets from the set.
fn queries(bx: &paraconvex_core::Aabb, cloud: &PointCloud, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = cloud.points();
    let diam = cloud.diameter();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = if out.len() % 2 == 0 {
            bx.at(&[rng.gen(), rng.gen()])
        } else {
            let p = pts[rng.gen_range(0..pts.len())];
            let len = diam * 10f64.powf(rng.gen_range(-6.0..-1.0));
            let a = rng.gen_range(0.0..2.0 * PI);
            p + Point::xy(a.cos(), a.sin()) * len
        };
        if bx.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn retraction(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let scenes = [
        Scene::new("semicircle", Generator::Semicircle, density(cfg, 200)),
        Scene::new(
            "sin_reciprocal",
            Generator::SinReciprocal {
                x_min: 0.25,
                x_max: 1.0,
            },
            density(cfg, 400),
        ),
    ];
    for scene in &scenes {
        let cloud = Arc::new(paraconvex_core::scenes::generate_scene(scene)?);
        let alpha = nonconvexity_function(&cloud, &cfg.plan(&cloud))?.max_alpha();
        let beta = cfg.beta.unwrap_or(alpha + 0.05);
        let opts = BuildOptions {
            tol: cfg.tol,
            ..BuildOptions::known(alpha)
        };
        let r = build_retraction(cloud.clone(), beta, &opts)?;
        let c = 2.0 / (1.0 - beta);
        let name = &scene.name;
        let identity = cloud
            .points()
            .iter()
            .all(|p| r.eval(p).is_ok_and(|q| q == *p));
        ctx.check(
            &format!("{name} identity"),
            identity,
            format!("{} points", cloud.len()),
        );
        let xs = queries(r.working_box(), &cloud, 1000, cfg.seed);
        let (mut member, mut bound, mut decay) = (0.0f64, 0.0f64, 0.0f64);
        for x in &xs {
            let (y, trace) = r.eval_traced(x)?;
            member = member.max(cloud.distance(&y));
            let d = cloud.distance(x);
            if d > 0.0 {
                bound = bound.max(x.dist(&y) / (c * d));
            }
            if let Some(t) = trace {
                let r0 = t.radii.first().copied().unwrap_or(0.0);
                for (n, s) in t.step_norms.iter().enumerate() {
                    decay = decay.max(s / (beta.powi(n as i32) * r0));
                }
            }
        }
        let diam = cloud.diameter();
        ctx.check(
            &format!("{name} membership"),
            member <= 1e-6 * diam,
            format!("max dist(R(x), P) {member:.2e}"),
        );
        ctx.check(
            &format!("{name} displacement"),
            bound <= 1.0 + 1e-3,
            format!("max |x - R(x)| / (C d(x)) {bound:.4}, C = {c:.2}, beta {beta:.4}"),
        );
        ctx.check(
            &format!("{name} step decay"),
            decay <= 1.0 + 1e-6,
            format!("max step_n / (beta^n r0) {decay:.4}"),
        );
        let rows = retraction_rows(name, &r, &xs)?;
        ctx.files.csv(&format!("c5_retraction_{name}.csv"), &rows)?;
        let arrows: Vec<(Point, Point)> = crate::experiments::box_probes(&r, 16)
            .into_iter()
            .map(|x| r.eval(&x).map(|y| (x, y)))
            .collect::<Result<_, _>>()?;
        ctx.files.text(
            &format!("c5_retraction_{name}.svg"),
            field_svg(&format!("{name}: x to R(x)"), cloud.points(), &arrows),
        );
    }
    Ok(())
}

fn proximity(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let s = random_proximity_suite(10_000, cfg.seed);
    ctx.check(
        "violations",
        s.violations == 0 && s.configurations == 10_000,
        format!(
            "{} of {} configurations, worst excess {:.2e}",
            s.violations, s.configurations, s.worst_excess
        ),
    );
    let row = ProximityRow {
        configurations: s.configurations,
        near_center: s.near_center,
        near_boundary: s.near_boundary,
        violations: s.violations,
        worst_excess: s.worst_excess,
    };
    ctx.files.csv("c6_proximity.csv", &[row])?;
    Ok(())
}

fn reprojection(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let scene = Scene::new("semicircle", Generator::Semicircle, density(cfg, 200));
    let cloud = Arc::new(paraconvex_core::scenes::generate_scene(&scene)?);
    let alpha = nonconvexity_function(&cloud, &cfg.plan(&cloud))?.max_alpha();
    let est = space_estimate(cloud.clone(), alpha, cfg, cfg.ensemble)?;
    let over = est
        .samples
        .iter()
        .map(|s| s.sup_distance - s.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    ctx.check(
        "certified bound",
        !est.samples.is_empty() && over <= 1e-6,
        format!("{} samples, max sup - bound {over:.3e}", est.samples.len()),
    );
    let limit = alpha / (1.0 - alpha) + 0.1;
    ctx.check(
        "space ratio",
        est.ratio <= limit,
        format!("ratio {:.4} vs {limit:.4}", est.ratio),
    );
    ctx.files
        .csv("c7_space.csv", &space_rows(&scene.name, &est))?;
    Ok(())
}

fn modulus(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let scene = Scene::new("semicircle", Generator::Semicircle, density(cfg, 100));
    let sweep = Sweep {
        parameter: SweepParameter::Rotation,
        from: 0.0,
        to: 0.5,
        steps: 50,
    };
    let base = family_run(&scene, &sweep, cfg, cfg.beta)?;
    let fine = family_run(&scene, &sweep.refined(), cfg, Some(base.beta))?;
    let worst = base.rows.iter().map(|m| m.ratio).fold(0.0, f64::max);
    ctx.check(
        "ratio",
        base.rows.iter().all(|m| m.ratio <= 1.1),
        format!("max sup_dist (1 - alpha_hat) / delta {worst:.4}"),
    );
    let max =
        |r: &crate::experiments::FamilyRun| r.rows.iter().map(|m| m.sup_dist).fold(0.0, f64::max);
    let (a, b) = (max(&base), max(&fine));
    ctx.check(
        "refinement",
        b < a,
        format!("max sup_dist {a:.4e} -> {b:.4e}"),
    );
    let mut rows = modulus_rows(&scene.name, "base", &base);
    rows.extend(modulus_rows(&scene.name, "refined", &fine));
    ctx.files.csv("c8_modulus.csv", &rows)?;
    ctx.files.text(
        "c8_modulus.svg",
        modulus_svg(&scene.name, &[("base", &base), ("refined", &fine)]),
    );
    Ok(())
}

fn sigma(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let scene = Scene::new("semicircle", Generator::Semicircle, density(cfg, 200));
    let cloud = Arc::new(paraconvex_core::scenes::generate_scene(&scene)?);
    let alpha = nonconvexity_function(&cloud, &cfg.plan(&cloud))?.max_alpha();
    let r = build_retraction(
        cloud.clone(),
        cfg.beta_for(alpha),
        &BuildOptions {
            tol: cfg.tol,
            ..BuildOptions::known(alpha)
        },
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5349_474d);
    let pts = cloud.points();
    let mut rows = Vec::with_capacity(1000);
    let (mut failures, mut worst_dist, mut worst_gap, mut hull_cases) =
        (0usize, 0.0f64, 0.0f64, 0usize);
    for draw in 0..1000 {
        let k = rng.gen_range(1..=5);
        // a quarter of the draws repeat one point, so their hull is in P
        let single = rng.gen_range(0..4) == 0;
        let first = rng.gen_range(0..pts.len());
        let ys: Vec<Point> = (0..k)
            .map(|_| {
                if single {
                    pts[first]
                } else {
                    pts[rng.gen_range(0..pts.len())]
                }
            })
            .collect();
        let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let hull_in_set = ys.iter().all(|y| *y == ys[0]);
        match sigma_convex_combination(&r, &ys, &w) {
            Ok(z) => {
                let d = cloud.distance(&z);
                worst_dist = worst_dist.max(d);
                let e = ys
                    .iter()
                    .zip(&w)
                    .fold(Point::xy(0.0, 0.0), |acc, (y, wi)| acc + *y * *wi);
                let gap = z.dist(&e);
                if hull_in_set {
                    hull_cases += 1;
                    worst_gap = worst_gap.max(gap);
                }
                rows.push(SigmaRow {
                    draw,
                    k,
                    zx: z.x(),
                    zy: z.y(),
                    dist_to_set: d,
                    hull_in_set,
                    euclidean_gap: gap,
                });
            }
            Err(_) => failures += 1,
        }
    }
    ctx.check(
        "total",
        failures == 0,
        format!("{failures} of 1000 draws failed"),
    );
    ctx.check(
        "membership",
        worst_dist <= 1e-6,
        format!("max dist to P {worst_dist:.2e}"),
    );
    ctx.check(
        "euclidean when hull in P",
        hull_cases > 0 && worst_gap <= 1e-12,
        format!("{hull_cases} draws, max gap {worst_gap:.2e}"),
    );
    ctx.files.csv("c9_sigma.csv", &rows)?;
    Ok(())
}
