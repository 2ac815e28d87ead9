//! The experiments behind each command. Each returns its CSV/SVG files in
//! an [`Emitter`] plus a JSON summary; nothing here touches the disk.

use std::sync::Arc;

use paraconvex_core::oracle::brute_force_alpha_oracle;
use paraconvex_core::paraconvexity::{
    gamma_sequence, nonconvexity_function, phi_and_bounds, strong_nonconvexity_function,
    threshold_root, NonconvexityProfile,
};
use paraconvex_core::retraction::{
    build_retraction, retraction_diagnostics, BuildOptions, RetractionOperator,
};
use paraconvex_core::scenes::{generate_family, generate_scene, Scene, Sweep};
use paraconvex_core::space::{
    build_retraction_family, continuity_modulus, estimate_space_paraconvexity, FamilyOfSets,
    ModulusRow, ProbeGrid, SpaceEstimate,
};
use paraconvex_core::{Point, PointCloud};
use serde_json::{json, Value};

use crate::artifacts::{
    field_svg, line_svg, ConstantsRow, Emitter, GammaRow, ModulusCsvRow, OracleRow, ProfileRow,
    RetractionRow, SpaceRow, UniformityCsvRow,
};
use crate::config::RunConfig;
use crate::error::CliError;

pub struct Outcome {
    pub files: Emitter,
    pub summary: Value,
}

pub fn cloud_of(scene: &Scene) -> Result<PointCloud, CliError> {
    Ok(generate_scene(scene)?)
}

pub fn profile_rows(scene: &str, prof: &NonconvexityProfile) -> Vec<ProfileRow> {
    prof.entries
        .iter()
        .map(|e| {
            let w = e.witness.as_ref();
            ProfileRow {
                scene: scene.into(),
                r: e.r,
                alpha_hat: e.alpha_hat,
                witness_cx: w.map(|w| w.ball.center.x()),
                witness_cy: w.map(|w| w.ball.center.y()),
                witness_qx: w.map(|w| w.point.point.x()),
                witness_qy: w.map(|w| w.point.point.y()),
            }
        })
        .collect()
}

pub fn profile_svg(scene: &str, prof: &NonconvexityProfile) -> String {
    let pts: Vec<(f64, f64)> = prof.entries.iter().map(|e| (e.r, e.alpha_hat)).collect();
    line_svg(
        &format!("{scene}: nonconvexity profile"),
        "r",
        &[("alpha_hat", pts)],
    )
}

/// Oracle values at `radii`, with a grid step of `r/20`.
pub fn oracle_rows(
    scene: &str,
    cloud: &PointCloud,
    prof: &NonconvexityProfile,
    radii: &[f64],
) -> Result<Vec<OracleRow>, CliError> {
    let mut rows = Vec::new();
    for e in prof.entries.iter().filter(|e| radii.contains(&e.r)) {
        let step = e.r / 20.0;
        let o = brute_force_alpha_oracle(cloud, e.r, step)?;
        rows.push(OracleRow {
            scene: scene.into(),
            r: e.r,
            alpha_hat: e.alpha_hat,
            oracle: o.alpha,
            grid_step: step,
        });
    }
    Ok(rows)
}

pub fn analyze(
    scene: &Scene,
    cfg: &RunConfig,
    radii: Option<Vec<f64>>,
    strong: bool,
    oracle: bool,
) -> Result<Outcome, CliError> {
    let cloud = cloud_of(scene)?;
    let mut plan = cfg.plan(&cloud);
    if let Some(r) = radii {
        plan = plan.with_radii(r);
    }
    plan.validate()?;
    let prof = if strong {
        strong_nonconvexity_function(&cloud, &plan)?
    } else {
        nonconvexity_function(&cloud, &plan)?
    };
    let mut files = Emitter::default();
    files.csv("profile.csv", &profile_rows(&scene.name, &prof))?;
    files.text("profile.svg", profile_svg(&scene.name, &prof));
    let mut oracle_gap = None;
    if oracle {
        if cloud.dim() != 2 {
            return Err(CliError::Input("the oracle is planar only".into()));
        }
        let all: Vec<f64> = plan.radius_grid.clone();
        let rows = oracle_rows(&scene.name, &cloud, &prof, &all)?;
        oracle_gap = Some(
            rows.iter()
                .map(|r| (r.alpha_hat - r.oracle).abs())
                .fold(0.0, f64::max),
        );
        files.csv("oracle.csv", &rows)?;
    }
    let worst = prof.worst();
    let summary = json!({
        "scene": scene.name,
        "points": cloud.len(),
        "strong": strong,
        "alpha_hat": prof.max_alpha(),
        "worst_radius": worst.map(|e| e.r),
        "beta": cfg.beta_for(prof.max_alpha()),
        "oracle_max_gap": oracle_gap,
    });
    Ok(Outcome { files, summary })
}

/// `n`×`n` probes over the working box.
pub fn box_probes(r: &RetractionOperator, n: usize) -> Vec<Point> {
    let bx = r.working_box();
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let t = [(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64];
            out.push(bx.at(&t));
        }
    }
    out
}

pub fn retraction_rows(
    scene: &str,
    r: &RetractionOperator,
    xs: &[Point],
) -> Result<Vec<RetractionRow>, CliError> {
    xs.iter()
        .map(|x| {
            let (y, trace) = r.eval_traced(x)?;
            Ok(RetractionRow {
                scene: scene.into(),
                x: x.x(),
                y: x.y(),
                rx: y.x(),
                ry: y.y(),
                dist_to_set: r.target().distance(x),
                displacement: x.dist(&y),
                steps: trace.map_or(0, |t| t.step_norms.len()),
            })
        })
        .collect()
}

pub fn retract(scene: &Scene, cfg: &RunConfig, beta: Option<f64>) -> Result<Outcome, CliError> {
    let cloud = Arc::new(cloud_of(scene)?);
    if cloud.dim() != 2 {
        return Err(CliError::Input(
            "retract draws planar figures; use a 2D scene".into(),
        ));
    }
    let prof = nonconvexity_function(&cloud, &cfg.plan(&cloud))?;
    let alpha = prof.max_alpha();
    let beta = beta.unwrap_or_else(|| cfg.beta_for(alpha));
    let opts = BuildOptions {
        tol: cfg.tol,
        ..BuildOptions::known(alpha)
    };
    let r = build_retraction(cloud.clone(), beta, &opts)?;
    let probes = box_probes(&r, 20);
    let rows = retraction_rows(&scene.name, &r, &probes)?;
    let eps = [1e-3, 1e-2, 1e-1];
    let diag = retraction_diagnostics(&r, &eps, 1000, cfg.seed)?;
    let mut files = Emitter::default();
    files.csv("retraction.csv", &rows)?;
    let urows: Vec<UniformityCsvRow> = diag
        .rows
        .iter()
        .map(|u| UniformityCsvRow {
            scene: scene.name.clone(),
            eps: u.eps,
            delta: u.delta,
        })
        .collect();
    files.csv("uniformity.csv", &urows)?;
    let arrows: Vec<(Point, Point)> = rows
        .iter()
        .map(|w| (Point::xy(w.x, w.y), Point::xy(w.rx, w.ry)))
        .collect();
    files.text(
        "retraction.svg",
        field_svg(
            &format!("{}: x to R(x), beta {beta:.3}", scene.name),
            cloud.points(),
            &arrows,
        ),
    );
    let worst = rows
        .iter()
        .filter(|w| w.dist_to_set > 0.0)
        .map(|w| w.displacement / w.dist_to_set)
        .fold(0.0, f64::max);
    let summary = json!({
        "scene": scene.name,
        "points": cloud.len(),
        "alpha_hat": alpha,
        "beta": beta,
        "certified_c": r.certified_c(),
        "grid_displacement_ratio": worst,
        "sampled_displacement_ratio": diag.displacement_ratio,
        "lipschitz_at_p_ratio": diag.lipschitz_at_p_ratio,
    });
    Ok(Outcome { files, summary })
}

pub fn space_rows(scene: &str, est: &SpaceEstimate) -> Vec<SpaceRow> {
    est.samples
        .iter()
        .enumerate()
        .map(|(i, s)| SpaceRow {
            scene: scene.into(),
            sample: i,
            members: s
                .members
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            r: s.r,
            beta: s.beta,
            sup_distance: s.sup_distance,
            bound: s.bound,
            max_spread: s.max_spread,
        })
        .collect()
}

pub fn space_estimate(
    cloud: Arc<PointCloud>,
    alpha: f64,
    cfg: &RunConfig,
    ensemble: usize,
) -> Result<SpaceEstimate, CliError> {
    let n = if cloud.dim() == 2 {
        cfg.probe_per_axis
    } else {
        12
    };
    let probes = ProbeGrid::over(&cloud.bbox().inflate(3.0), n, &[&cloud])?;
    Ok(estimate_space_paraconvexity(
        cloud, alpha, ensemble, &probes, cfg.seed,
    )?)
}

pub fn space(scene: &Scene, cfg: &RunConfig, ensemble: usize) -> Result<Outcome, CliError> {
    let cloud = Arc::new(cloud_of(scene)?);
    let alpha = nonconvexity_function(&cloud, &cfg.plan(&cloud))?.max_alpha();
    if alpha >= 1.0 {
        return Err(CliError::Input(format!(
            "alpha_hat {alpha} is not below 1; no retraction is certified"
        )));
    }
    let est = space_estimate(cloud.clone(), alpha, cfg, ensemble)?;
    let mut files = Emitter::default();
    files.csv("space.csv", &space_rows(&scene.name, &est))?;
    let summary = json!({
        "scene": scene.name,
        "alpha_hat": alpha,
        "ratio": est.ratio,
        "banach_bound": alpha / (1.0 - alpha),
        "degenerate": est.degenerate,
        "gamma_slack": est.gamma_slack,
        "samples": est.samples.len(),
    });
    Ok(Outcome { files, summary })
}

pub struct FamilyRun {
    pub family: FamilyOfSets,
    pub alpha_hat: f64,
    pub beta: f64,
    pub rows: Vec<ModulusRow>,
    pub warnings: Vec<String>,
}

/// Builds the retraction family and its modulus table. `α̂` is measured on
/// the first member and reused: every sweep moves the set by a similarity,
/// and the profile's radius grid scales with the diameter.
pub fn family_run(
    scene: &Scene,
    sweep: &Sweep,
    cfg: &RunConfig,
    beta: Option<f64>,
) -> Result<FamilyRun, CliError> {
    let family = generate_family(scene, sweep)?;
    let first = &family.sets()[0];
    let alpha = nonconvexity_function(first, &cfg.plan(first))?.max_alpha();
    let beta = beta.unwrap_or_else(|| cfg.beta_for(alpha));
    let opts = BuildOptions {
        tol: cfg.tol,
        ..BuildOptions::known(alpha)
    };
    let built = build_retraction_family(&family, beta, &opts)?;
    let n = if first.dim() == 2 {
        cfg.probe_per_axis
    } else {
        12
    };
    let probes = family.probes(&built.working_box, n)?;
    let rows = continuity_modulus(&family, &built.operators, &probes, alpha, 0.1)?;
    Ok(FamilyRun {
        family,
        alpha_hat: alpha,
        beta,
        rows,
        warnings: built.warnings,
    })
}

pub fn modulus_rows(scene: &str, grid: &str, run: &FamilyRun) -> Vec<ModulusCsvRow> {
    run.rows
        .iter()
        .enumerate()
        .map(|(i, m)| ModulusCsvRow {
            scene: scene.into(),
            grid: grid.into(),
            step: i + 1,
            t: run.family.params()[i + 1],
            delta: m.delta,
            sup_dist: m.sup_dist,
            ratio: m.ratio,
            prior_displacement: m.prior_displacement,
            flagged: m.flagged,
        })
        .collect()
}

pub fn modulus_svg(scene: &str, runs: &[(&str, &FamilyRun)]) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = runs
        .iter()
        .map(|(name, run)| {
            let pts = run
                .rows
                .iter()
                .enumerate()
                .map(|(i, m)| (run.family.params()[i + 1], m.sup_dist))
                .collect();
            (format!("sup_dist ({name})"), pts)
        })
        .collect();
    let refs: Vec<(&str, Vec<(f64, f64)>)> = series
        .iter()
        .map(|(n, p)| (n.as_str(), p.clone()))
        .collect();
    line_svg(
        &format!("{scene}: distance between consecutive retractions"),
        "t",
        &refs,
    )
}

pub fn family(scene: &Scene, sweep: &Sweep, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let base = family_run(scene, sweep, cfg, None)?;
    let fine = family_run(scene, &sweep.refined(), cfg, Some(base.beta))?;
    let mut rows = modulus_rows(&scene.name, "base", &base);
    rows.extend(modulus_rows(&scene.name, "refined", &fine));
    let mut files = Emitter::default();
    files.csv("modulus.csv", &rows)?;
    files.text(
        "modulus.svg",
        modulus_svg(&scene.name, &[("base", &base), ("refined", &fine)]),
    );
    let max = |r: &FamilyRun| r.rows.iter().map(|m| m.sup_dist).fold(0.0, f64::max);
    let summary = json!({
        "scene": scene.name,
        "members": base.family.len(),
        "alpha_hat": base.alpha_hat,
        "beta": base.beta,
        "max_ratio": base.rows.iter().map(|m| m.ratio).fold(0.0, f64::max),
        "flagged": base.rows.iter().filter(|m| m.flagged).count(),
        "max_sup_dist": max(&base),
        "refined_max_sup_dist": max(&fine),
        "warnings": base.warnings,
    });
    Ok(Outcome { files, summary })
}

pub fn constants_rows(alphas: &[f64]) -> Result<Vec<ConstantsRow>, CliError> {
    let root = threshold_root();
    alphas
        .iter()
        .map(|&a| {
            let b = phi_and_bounds(a)?;
            Ok(ConstantsRow {
                alpha: a,
                phi: b.phi,
                banach_bound: b.banach,
                hilbert_bound: b.hilbert,
                threshold_root: root,
            })
        })
        .collect()
}

pub fn gamma_rows(gammas: &[f64], n_max: usize) -> Result<Vec<GammaRow>, CliError> {
    let mut rows = Vec::new();
    for &g in gammas {
        let s = gamma_sequence(g, n_max)?;
        rows.extend(s.terms.iter().enumerate().map(|(i, &t)| GammaRow {
            gamma: g,
            n: i + 1,
            gamma_n: t,
            fixed_point: s.fixed_point,
        }));
    }
    Ok(rows)
}

pub fn constants(alphas: &[f64]) -> Result<Outcome, CliError> {
    let mut files = Emitter::default();
    files.csv("constants.csv", &constants_rows(alphas)?)?;
    let gammas: Vec<f64> = alphas.iter().copied().filter(|a| *a > 0.0).collect();
    files.csv("gamma.csv", &gamma_rows(&gammas, 60)?)?;
    let summary = json!({ "threshold_root": threshold_root(), "alphas": alphas });
    Ok(Outcome { files, summary })
}
