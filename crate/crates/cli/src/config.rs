use std::path::{Path, PathBuf};

use paraconvex_core::paraconvexity::SamplingPlan;
use paraconvex_core::retraction::DEFAULT_MARGIN;
use paraconvex_core::selection::TOL_REL;
use paraconvex_core::PointCloud;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "PARACONVEX_OUT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    /// Relative stopping tolerance of the selection loop.
    pub tol: f64,
    /// Gap between `β` and the measured `α̂`.
    pub margin: f64,
    /// Overrides the scene's own density when set.
    pub density: Option<usize>,
    /// Forces `β` in the retraction and family runs instead of `α̂ + margin`.
    pub beta: Option<f64>,
    pub sampling: SamplingOverrides,
    /// Probe grid points per axis in the plane.
    pub probe_per_axis: usize,
    pub ensemble: usize,
}

/// Estimator knobs; unset fields keep the per-cloud defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingOverrides {
    pub ball_center_count: Option<usize>,
    pub point_centers: Option<usize>,
    pub hull_sample_count: Option<usize>,
    pub refine_steps: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            out: PathBuf::from("out"),
            tol: TOL_REL,
            margin: DEFAULT_MARGIN,
            density: None,
            beta: None,
            sampling: SamplingOverrides::default(),
            probe_per_axis: 40,
            ensemble: 12,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let c: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Input(m.into()));
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol must lie in (0, 1)");
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return bad("margin must lie in (0, 1)");
        }
        if self.beta.is_some_and(|b| !(b > 0.0 && b < 1.0)) {
            return bad("beta must lie in (0, 1)");
        }
        if self.density == Some(0) {
            return bad("density must be positive");
        }
        if self.probe_per_axis < 2 {
            return bad("probe_per_axis must be at least 2");
        }
        if self.ensemble < 2 {
            return bad("ensemble must be at least 2");
        }
        let s = &self.sampling;
        if [
            s.ball_center_count,
            s.point_centers,
            s.hull_sample_count,
            s.refine_steps,
        ]
        .contains(&Some(0))
        {
            return bad("sampling counts must be positive");
        }
        Ok(())
    }

    pub fn plan(&self, cloud: &PointCloud) -> SamplingPlan {
        let mut p = SamplingPlan::for_cloud(cloud, self.seed);
        let s = &self.sampling;
        p.ball_center_count = s.ball_center_count.unwrap_or(p.ball_center_count);
        p.point_centers = s.point_centers.unwrap_or(p.point_centers);
        p.hull_sample_count = s.hull_sample_count.unwrap_or(p.hull_sample_count);
        p.refine_steps = s.refine_steps.unwrap_or(p.refine_steps);
        p
    }

    /// `β = α̂ + margin`, or halfway to 1 when that would reach 1.
    pub fn beta_for(&self, alpha_hat: f64) -> f64 {
        let b = alpha_hat + self.margin;
        if b < 1.0 {
            b
        } else {
            alpha_hat + 0.5 * (1.0 - alpha_hat)
        }
    }
}
