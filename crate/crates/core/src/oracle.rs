//! Brute-force planar nonconvexity: every ball center on a grid, every grid
//! point inside the hull of the members, plus points along the hull edges.
//! Slow and independent of the sampling estimator, which it cross-checks.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::euclid::{Ball, Point, PointCloud};
use crate::fmath;
use crate::paraconvexity::set_key;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    /// Largest `dist(q, P)/r` found.
    pub alpha: f64,
    pub ball: Option<Ball>,
    pub point: Option<Point>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Counterclockwise hull by the monotone chain, collinear points dropped.
fn wrap(pts: &[Point]) -> Vec<Point> {
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    sorted.dedup();
    if sorted.len() < 3 {
        return sorted;
    }
    let chain = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut h: Vec<Point> = Vec::new();
        for p in iter {
            while h.len() >= 2 && cross(&h[h.len() - 2], &h[h.len() - 1], p) <= 0.0 {
                h.pop();
            }
            h.push(*p);
        }
        h.pop();
        h
    };
    let mut hull = chain(&mut sorted.iter());
    hull.extend(chain(&mut sorted.iter().rev()));
    if hull.len() < 3 {
        // collinear: keep the two ends
        return alloc::vec![sorted[0], sorted[sorted.len() - 1]];
    }
    hull
}

fn in_hull(hull: &[Point], q: &Point) -> bool {
    match hull.len() {
        0 => false,
        1 | 2 => false,
        n => (0..n).all(|i| cross(&hull[i], &hull[(i + 1) % n], q) >= -1e-12),
    }
}

/// Grid-search estimate of the nonconvexity function at radius `r`.
///
/// Centers run over the bounding box padded by `r` at spacing `grid_step`;
/// within each ball the candidates are the lattice points of the same
/// spacing inside the members' hull, points every `grid_step` along each hull
/// edge, and each edge midpoint.
pub fn brute_force_alpha_oracle(cloud: &PointCloud, r: f64, grid_step: f64) -> Result<OracleValue> {
    if cloud.dim() != 2 {
        return Err(Error::UnsupportedDimension(cloud.dim()));
    }
    if !(r > 0.0 && grid_step > 0.0 && grid_step <= r / 20.0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter {
            name: "grid_step",
            reason: "must be positive and at most r/20",
        });
    }
    let bbox = cloud.bbox().pad(r);
    let nx = fmath::ceil(bbox.extent(0) / grid_step) as i64;
    let ny = fmath::ceil(bbox.extent(1) / grid_step) as i64;
    let mut seen = BTreeSet::new();
    let mut best = OracleValue {
        alpha: 0.0,
        ball: None,
        point: None,
    };
    let mut members = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let c = Point::xy(
                bbox.min.x() + i as f64 * grid_step,
                bbox.min.y() + j as f64 * grid_step,
            );
            cloud.ball_indices_into(&c, r, &mut members);
            if members.len() < 2 || !seen.insert(set_key(&members)) {
                continue;
            }
            let pts: Vec<Point> = members
                .iter()
                .map(|&k| cloud.points()[k as usize])
                .collect();
            let (d, q) = hull_max(cloud, &pts, grid_step);
            if d / r > best.alpha {
                best = OracleValue {
                    alpha: d / r,
                    ball: Some(Ball {
                        center: c,
                        radius: r,
                    }),
                    point: Some(q),
                };
            }
        }
    }
    Ok(best)
}

/// Grid-search estimate of the largest `dist(q, P)` over `q` in the hull of
/// `pts`.
pub fn brute_force_hull_max(cloud: &PointCloud, pts: &[Point], grid_step: f64) -> (f64, Point) {
    hull_max(cloud, pts, grid_step)
}

fn hull_max(cloud: &PointCloud, pts: &[Point], step: f64) -> (f64, Point) {
    let hull = wrap(pts);
    let mut best = (0.0, hull[0]);
    let mut consider = |q: Point| {
        let d = cloud.distance(&q);
        if d > best.0 {
            best = (d, q);
        }
    };
    let n = hull.len();
    for e in 0..n {
        let (a, b) = (hull[e], hull[(e + 1) % n]);
        if n == 2 && e == 1 {
            break;
        }
        let len = a.dist(&b);
        let k = fmath::ceil(len / step) as usize;
        for s in 0..=k {
            consider(a.lerp(&b, s as f64 / k.max(1) as f64));
        }
        consider(a.midpoint(&b));
    }
    if n >= 3 {
        let (mut lo, mut hi) = (hull[0], hull[0]);
        for p in &hull {
            lo = Point::xy(lo.x().min(p.x()), lo.y().min(p.y()));
            hi = Point::xy(hi.x().max(p.x()), hi.y().max(p.y()));
        }
        let (i0, i1) = (
            fmath::floor(lo.x() / step) as i64,
            fmath::ceil(hi.x() / step) as i64,
        );
        let (j0, j1) = (
            fmath::floor(lo.y() / step) as i64,
            fmath::ceil(hi.y() / step) as i64,
        );
        for j in j0..=j1 {
            for i in i0..=i1 {
                let q = Point::xy(i as f64 * step, j as f64 * step);
                if in_hull(&hull, &q) {
                    consider(q);
                }
            }
        }
    }
    best
}
