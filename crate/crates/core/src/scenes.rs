//! Deterministic test clouds.
//!
//! Curves are sampled at equal arc length; filled regions on a triangular
//! lattice whose spacing is chosen so the point count is close to `density`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::euclid::{Isometry, Point, PointCloud};
use crate::fmath;
use crate::space::FamilyOfSets;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// From `(-1, 0)` to `(1, 0)`.
    Segment,
    /// Filled regular polygon with circumradius 1.
    ConvexPolygon {
        sides: usize,
    },
    /// Filled unit disk.
    DiskSample,
    /// Arc of the unit circle of the given angle, symmetric about the
    /// positive `y` axis.
    CircleArc {
        angle: f64,
    },
    /// Upper unit half-circle, endpoints included.
    Semicircle,
    /// Graph of `sin(1/x)` over `[x_min, x_max]`.
    SinReciprocal {
        x_min: f64,
        x_max: f64,
    },
    /// Archimedean spiral with radius growing from 0.2 to 1.
    Spiral {
        turns: f64,
    },
    /// `{(-1, 0), (1, 0)}`.
    TwoPoints,
    CustomPoints(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub name: String,
    pub generator: Generator,
    pub density: usize,
    pub transform: Option<Isometry>,
}

impl Scene {
    pub fn new(name: impl Into<String>, generator: Generator, density: usize) -> Scene {
        Scene {
            name: name.into(),
            generator,
            density,
            transform: None,
        }
    }

    pub fn with_transform(mut self, transform: Isometry) -> Scene {
        self.transform = Some(transform);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Angle in radians about the origin.
    Rotation,
    TranslateX,
    TranslateY,
    /// Uniform scale about the origin.
    Scale,
}

/// `steps` equal increments of one transform parameter from `from` to `to`,
/// giving `steps + 1` clouds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn params(&self) -> Vec<f64> {
        (0..=self.steps)
            .map(|i| self.from + (self.to - self.from) * i as f64 / self.steps as f64)
            .collect()
    }

    /// The same sweep with every step halved.
    pub fn refined(&self) -> Sweep {
        Sweep {
            steps: 2 * self.steps,
            ..*self
        }
    }

    pub fn motion(&self, t: f64) -> Isometry {
        match self.parameter {
            SweepParameter::Rotation => Isometry::planar(t, 0.0, 0.0, 1.0),
            SweepParameter::TranslateX => Isometry::planar(0.0, t, 0.0, 1.0),
            SweepParameter::TranslateY => Isometry::planar(0.0, 0.0, t, 1.0),
            SweepParameter::Scale => Isometry::planar(0.0, 0.0, 0.0, t),
        }
    }
}

fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}

pub fn generate_scene(scene: &Scene) -> Result<PointCloud> {
    let n = scene.density;
    if n == 0 {
        return Err(invalid("density", "must be positive"));
    }
    let pts = match &scene.generator {
        Generator::Segment => (0..n)
            .map(|i| Point::xy(-1.0 + 2.0 * frac(i, n), 0.0))
            .collect(),
        Generator::ConvexPolygon { sides } => {
            if *sides < 3 {
                return Err(invalid("sides", "a polygon needs at least 3 sides"));
            }
            let s = *sides as f64;
            let area = 0.5 * s * fmath::sin(TAU / s);
            // inside iff within the inradius along every edge normal
            let apothem = fmath::cos(PI / s);
            let normals: Vec<(f64, f64)> = (0..*sides)
                .map(|k| {
                    let a = (2 * k + 1) as f64 * PI / s + PI / 2.0;
                    (fmath::cos(a), fmath::sin(a))
                })
                .collect();
            lattice(n, area, 1.0, |x, y| {
                normals
                    .iter()
                    .all(|&(nx, ny)| nx * x + ny * y <= apothem + 1e-12)
            })
        }
        Generator::DiskSample => lattice(n, PI, 1.0, |x, y| x * x + y * y <= 1.0 + 1e-12),
        Generator::CircleArc { angle } => {
            if !(*angle > 0.0 && *angle <= TAU) {
                return Err(invalid("angle", "must lie in (0, 2π]"));
            }
            let closed = *angle >= TAU - 1e-12;
            let start = PI / 2.0 - angle / 2.0;
            let denom = if closed || n == 1 {
                n as f64
            } else {
                (n - 1) as f64
            };
            (0..n)
                .map(|i| {
                    let t = if n == 1 {
                        PI / 2.0
                    } else {
                        start + angle * i as f64 / denom
                    };
                    Point::xy(fmath::cos(t), fmath::sin(t))
                })
                .collect()
        }
        Generator::Semicircle => (0..n)
            .map(|i| {
                let t = if n == 1 {
                    PI / 2.0
                } else {
                    PI * i as f64 / (n - 1) as f64
                };
                Point::xy(fmath::cos(t), fmath::sin(t))
            })
            .collect(),
        Generator::SinReciprocal { x_min, x_max } => {
            if !(*x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
                return Err(invalid("sin_reciprocal", "needs 0 < x_min < x_max"));
            }
            let (a, b) = (1.0 / x_min, 1.0 / x_max);
            // uniform in 1/x, which follows the oscillations
            resample(n, |t| {
                let x = 1.0 / (a + (b - a) * t);
                Point::xy(x, fmath::sin(1.0 / x))
            })
        }
        Generator::Spiral { turns } => {
            if !(*turns > 0.0 && turns.is_finite()) {
                return Err(invalid("turns", "must be positive"));
            }
            resample(n, |t| {
                let rho = 0.2 + 0.8 * t;
                let a = TAU * turns * t;
                Point::xy(rho * fmath::cos(a), rho * fmath::sin(a))
            })
        }
        Generator::TwoPoints => alloc::vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)],
        Generator::CustomPoints(p) => p.clone(),
    };
    let cloud = PointCloud::new(scene.name.clone(), pts)?;
    match &scene.transform {
        Some(m) => cloud.transformed(m),
        None => Ok(cloud),
    }
}

/// Clouds along a transform sweep, each the scene followed by the sweep's
/// motion at that parameter.
pub fn generate_family(scene: &Scene, sweep: &Sweep) -> Result<FamilyOfSets> {
    if sweep.steps == 0
        || !(sweep.from.is_finite() && sweep.to.is_finite())
        || sweep.from >= sweep.to
    {
        return Err(invalid(
            "family_sweep",
            "needs from < to and at least one step",
        ));
    }
    let base = generate_scene(scene)?;
    let params = sweep.params();
    let sets = params
        .iter()
        .map(|&t| base.transformed(&sweep.motion(t)))
        .collect::<Result<Vec<_>>>()?;
    FamilyOfSets::new(params, sets)
}

fn frac(i: usize, n: usize) -> f64 {
    if n == 1 {
        0.5
    } else {
        i as f64 / (n - 1) as f64
    }
}

/// Triangular lattice points inside a region of the given area and extent.
fn lattice(n: usize, area: f64, extent: f64, inside: impl Fn(f64, f64) -> bool) -> Vec<Point> {
    let h = fmath::sqrt(area / (n as f64 * fmath::sqrt(3.0) / 2.0));
    let row = h * fmath::sqrt(3.0) / 2.0;
    let rows = fmath::ceil(extent / row) as i64;
    let cols = fmath::ceil(extent / h) as i64 + 1;
    let mut out = Vec::new();
    for j in -rows..=rows {
        let shift = if j.rem_euclid(2) == 1 { 0.5 * h } else { 0.0 };
        for i in -cols..=cols {
            let (x, y) = (i as f64 * h + shift, j as f64 * row);
            if inside(x, y) {
                out.push(Point::xy(x, y));
            }
        }
    }
    out
}

/// `n` points at equal arc length along `curve` on `[0, 1]`.
fn resample(n: usize, curve: impl Fn(f64) -> Point) -> Vec<Point> {
    let fine = (64 * n).max(100_000);
    let nodes: Vec<Point> = (0..=fine).map(|i| curve(i as f64 / fine as f64)).collect();
    let mut cum = Vec::with_capacity(nodes.len());
    cum.push(0.0);
    for w in nodes.windows(2) {
        cum.push(cum.last().unwrap() + w[0].dist(&w[1]));
    }
    let total = *cum.last().unwrap();
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for i in 0..n {
        let s = total * frac(i, n);
        while seg + 1 < fine && cum[seg + 1] < s {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = if len > 0.0 {
            ((s - cum[seg]) / len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(nodes[seg].lerp(&nodes[seg + 1], t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_has_equal_arc_spacing() {
        let c = generate_scene(&Scene::new("s", Generator::Semicircle, 100)).unwrap();
        assert_eq!(c.len(), 100);
        let chord = c.points()[0].dist(&c.points()[1]);
        for w in c.points().windows(2) {
            assert!((w[0].dist(&w[1]) - chord).abs() < 1e-12);
        }
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() < 1e-14 && p.y() >= -1e-15);
        }
    }

    #[test]
    fn two_points_scene() {
        let c = generate_scene(&Scene::new("t", Generator::TwoPoints, 7)).unwrap();
        assert_eq!(c.points(), &[Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]);
    }

    #[test]
    fn sin_reciprocal_lies_on_the_graph() {
        let c = generate_scene(&Scene::new(
            "s",
            Generator::SinReciprocal {
                x_min: 0.05,
                x_max: 1.0,
            },
            2000,
        ))
        .unwrap();
        assert_eq!(c.len(), 2000);
        for p in c.points() {
            assert!(p.x() >= 0.05 - 1e-12 && p.x() <= 1.0 + 1e-12);
        }
        // chords of a fine polyline stay close to the curve
        let worst = c
            .points()
            .iter()
            .map(|p| (p.y() - libm::sin(1.0 / p.x())).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
        assert!(generate_scene(&Scene::new(
            "s",
            Generator::SinReciprocal {
                x_min: 0.0,
                x_max: 1.0
            },
            10
        ))
        .is_err());
    }

    #[test]
    fn lattice_count_tracks_density() {
        for n in [500, 5000] {
            let c =
                generate_scene(&Scene::new("p", Generator::ConvexPolygon { sides: 6 }, n)).unwrap();
            let ratio = c.len() as f64 / n as f64;
            assert!((0.85..1.15).contains(&ratio), "{n}: {}", c.len());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = Scene::new("s", Generator::Spiral { turns: 1.5 }, 300)
            .with_transform(Isometry::planar(0.4, 1.0, 2.0, 1.5));
        assert_eq!(generate_scene(&s).unwrap(), generate_scene(&s).unwrap());
    }
}
