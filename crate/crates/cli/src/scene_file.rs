//! Scene documents.
//!
//! ```json
//! {
//!   "name": "wiggle",
//!   "generator": "sin_reciprocal",
//!   "params": { "x_min": 0.05, "x_max": 1.0 },
//!   "density": 2000,
//!   "transform": { "angle": 0.3, "translate": [1.0, 0.0], "scale": 1.0 },
//!   "family_sweep": { "parameter": "rotation", "from": 0.0, "to": 0.5, "steps": 50 }
//! }
//! ```
//!
//! `params` keys by generator: `convex_polygon` takes `sides`, `circle_arc`
//! takes `angle`, `sin_reciprocal` takes `x_min` and `x_max`, `spiral` takes
//! `turns`, `custom_points` takes `points` (a list of 2- or 3-element
//! arrays). The other generators take none. `transform` and `family_sweep`
//! are optional. A 3D transform gives `axis`, `angle` and a 3-element
//! `translate`.

use std::f64::consts::PI;
use std::path::Path;

use paraconvex_core::scenes::{Generator, Scene, Sweep, SweepParameter};
use paraconvex_core::{Isometry, Point};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub name: String,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    pub density: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
}

impl Params {
    fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub translate: Vec<f64>,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepKind,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Rotation,
    TranslateX,
    TranslateY,
    Scale,
}

impl SweepSpec {
    pub fn to_sweep(self) -> Sweep {
        let parameter = match self.parameter {
            SweepKind::Rotation => SweepParameter::Rotation,
            SweepKind::TranslateX => SweepParameter::TranslateX,
            SweepKind::TranslateY => SweepParameter::TranslateY,
            SweepKind::Scale => SweepParameter::Scale,
        };
        Sweep {
            parameter,
            from: self.from,
            to: self.to,
            steps: self.steps,
        }
    }

    /// `kind:from:to:steps`, e.g. `rotation:0:0.5:50`.
    pub fn parse(text: &str) -> Result<SweepSpec, CliError> {
        let bad = || CliError::Input(format!("sweep `{text}` is not kind:from:to:steps"));
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let parameter: SweepKind =
            serde_json::from_value(serde_json::Value::String(parts[0].into()))
                .map_err(|_| bad())?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        Ok(SweepSpec {
            parameter,
            from: num(parts[1])?,
            to: num(parts[2])?,
            steps: parts[3].parse().map_err(|_| bad())?,
        })
    }
}

/// Generator names accepted in scene files and as built-in scene names.
pub const GENERATORS: [&str; 9] = [
    "segment",
    "convex_polygon",
    "disk_sample",
    "circle_arc",
    "semicircle",
    "sin_reciprocal",
    "spiral",
    "two_points",
    "custom_points",
];

impl SceneFile {
    pub fn parse(text: &str) -> Result<SceneFile, CliError> {
        let s: SceneFile =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("scene file: {e}")))?;
        s.to_scene()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<SceneFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        SceneFile::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene files serialize")
    }

    /// A generator with its default parameters and the given density.
    pub fn builtin(generator: &str, density: Option<usize>) -> Result<SceneFile, CliError> {
        let mut params = Params::default();
        let default_density = match generator {
            "segment" => 200,
            "convex_polygon" => {
                params.sides = Some(6);
                2000
            }
            "disk_sample" => 2000,
            "circle_arc" => {
                params.angle = Some(PI / 2.0);
                200
            }
            "semicircle" => 200,
            "sin_reciprocal" => {
                params.x_min = Some(0.25);
                params.x_max = Some(1.0);
                400
            }
            "spiral" => {
                params.turns = Some(1.5);
                300
            }
            "two_points" => 2,
            _ => {
                return Err(CliError::Input(format!(
                    "`{generator}` is neither a scene file nor one of: {}",
                    GENERATORS[..8].join(", ")
                )))
            }
        };
        let s = SceneFile {
            name: generator.into(),
            generator: generator.into(),
            params,
            density: density.unwrap_or(default_density),
            transform: None,
            family_sweep: None,
        };
        s.to_scene()?;
        Ok(s)
    }

    /// A path to a scene file, or a generator name.
    pub fn resolve(arg: &str, density: Option<usize>) -> Result<SceneFile, CliError> {
        let path = Path::new(arg);
        if path.is_file() {
            let mut s = SceneFile::load(path)?;
            if let Some(d) = density {
                s.density = d;
            }
            s.to_scene()?;
            Ok(s)
        } else {
            SceneFile::builtin(arg, density)
        }
    }

    pub fn to_scene(&self) -> Result<Scene, CliError> {
        let p = &self.params;
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| CliError::Input(format!("{} needs params.{key}", self.generator)))
        };
        let allowed: &[&str] = match self.generator.as_str() {
            "convex_polygon" => &["sides"],
            "circle_arc" => &["angle"],
            "sin_reciprocal" => &["x_min", "x_max"],
            "spiral" => &["turns"],
            "custom_points" => &["points"],
            _ => &[],
        };
        let given = [
            ("sides", p.sides.is_some()),
            ("angle", p.angle.is_some()),
            ("x_min", p.x_min.is_some()),
            ("x_max", p.x_max.is_some()),
            ("turns", p.turns.is_some()),
            ("points", p.points.is_some()),
        ];
        if let Some((key, _)) = given.iter().find(|(k, set)| *set && !allowed.contains(k)) {
            return Err(CliError::Input(format!(
                "{} does not take params.{key}",
                self.generator
            )));
        }
        let generator = match self.generator.as_str() {
            "segment" => Generator::Segment,
            "convex_polygon" => Generator::ConvexPolygon {
                sides: p
                    .sides
                    .ok_or_else(|| CliError::Input("convex_polygon needs params.sides".into()))?,
            },
            "disk_sample" => Generator::DiskSample,
            "circle_arc" => Generator::CircleArc {
                angle: need(p.angle, "angle")?,
            },
            "semicircle" => Generator::Semicircle,
            "sin_reciprocal" => Generator::SinReciprocal {
                x_min: need(p.x_min, "x_min")?,
                x_max: need(p.x_max, "x_max")?,
            },
            "spiral" => Generator::Spiral {
                turns: need(p.turns, "turns")?,
            },
            "two_points" => Generator::TwoPoints,
            "custom_points" => {
                let raw = p
                    .points
                    .as_ref()
                    .ok_or_else(|| CliError::Input("custom_points needs params.points".into()))?;
                let pts = raw
                    .iter()
                    .map(|c| {
                        Point::new(c)
                            .map_err(|e| CliError::Input(format!("custom point {c:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Generator::CustomPoints(pts)
            }
            other => return Err(CliError::Input(format!("unknown generator `{other}`"))),
        };
        let mut scene = Scene::new(self.name.clone(), generator, self.density);
        if let Some(t) = &self.transform {
            scene = scene.with_transform(t.to_isometry()?);
        }
        // generate once so invalid parameters surface here
        paraconvex_core::scenes::generate_scene(&scene)
            .map_err(|e| CliError::Input(format!("scene `{}`: {e}", self.name)))?;
        Ok(scene)
    }
}

impl TransformSpec {
    pub fn to_isometry(&self) -> Result<Isometry, CliError> {
        let t = &self.translate;
        match self.axis {
            None => {
                let (tx, ty) = match t.len() {
                    0 => (0.0, 0.0),
                    2 => (t[0], t[1]),
                    _ => {
                        return Err(CliError::Input(
                            "planar transform needs a 2-element translate".into(),
                        ))
                    }
                };
                if !(self.scale > 0.0 && self.scale.is_finite()) {
                    return Err(CliError::Input("transform scale must be positive".into()));
                }
                Ok(Isometry::planar(self.angle, tx, ty, self.scale))
            }
            Some(axis) => {
                if axis.iter().all(|a| *a == 0.0) || self.scale != 1.0 {
                    return Err(CliError::Input(
                        "spatial transform needs a nonzero axis and unit scale".into(),
                    ));
                }
                let tr = match t.len() {
                    0 => [0.0; 3],
                    3 => [t[0], t[1], t[2]],
                    _ => {
                        return Err(CliError::Input(
                            "spatial transform needs a 3-element translate".into(),
                        ))
                    }
                };
                Ok(Isometry::spatial(axis, self.angle, tr))
            }
        }
    }
}
