use alloc::string::String;
use alloc::vec::Vec;

use super::geom::Aabb;
use super::index::GridIndex;
use super::point::Point;
use super::Ball;
use crate::error::{Error, Result};

/// A finite sample of a closed bounded set.
///
/// Invariants: nonempty, one dimension (2 or 3), finite coordinates, and no
/// two points within the duplicate tolerance of each other.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Vec<Point>,
    label: String,
    bbox: Aabb,
    index: GridIndex,
}

impl PartialEq for PointCloud {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.label == other.label
    }
}

impl PointCloud {
    /// Validates with the default duplicate tolerance.
    pub fn new(label: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        Self::with_tolerance(label, points, super::Tolerances::default().dup)
    }

    pub fn with_tolerance(
        label: impl Into<String>,
        points: Vec<Point>,
        tau_dup: f64,
    ) -> Result<Self> {
        let cloud = Self::unchecked(label, points)?;
        for (i, p) in cloud.points.iter().enumerate() {
            if let Some(j) = cloud.index.any_near(&cloud.points, p, tau_dup, i) {
                return Err(Error::DuplicatePoint {
                    first: i.min(j),
                    second: i.max(j),
                });
            }
        }
        Ok(cloud)
    }

    /// Drops every point that lies within `tau_dup` of an earlier one.
    pub fn deduplicated(
        label: impl Into<String>,
        points: Vec<Point>,
        tau_dup: f64,
    ) -> Result<Self> {
        let probe = Self::unchecked("", points)?;
        let mut keep = Vec::with_capacity(probe.points.len());
        let mut dropped = alloc::vec![false; probe.points.len()];
        for (i, p) in probe.points.iter().enumerate() {
            if dropped[i] {
                continue;
            }
            keep.push(*p);
            let mut members = Vec::new();
            probe.index.ball(
                &probe.points,
                p,
                tau_dup * (1.0 + 1e-12) + f64::MIN_POSITIVE,
                &mut members,
            );
            for &j in &members {
                if j as usize > i && probe.points[j as usize].dist(p) <= tau_dup {
                    dropped[j as usize] = true;
                }
            }
        }
        Self::with_tolerance(label, keep, tau_dup)
    }

    fn unchecked(label: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyCloud)?;
        let dim = first.dim();
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        let bbox = Aabb::around(points.iter()).expect("nonempty");
        let index = GridIndex::build(&points);
        Ok(PointCloud {
            points,
            label: label.into(),
            bbox,
            index,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn bbox(&self) -> &Aabb {
        &self.bbox
    }

    /// Largest pairwise distance. Exact (quadratic) up to 4096 points,
    /// otherwise the bounding-box diagonal, which is within a factor √d.
    pub fn diameter(&self) -> f64 {
        if self.points.len() <= 4096 {
            let mut best: f64 = 0.0;
            for (i, p) in self.points.iter().enumerate() {
                for q in &self.points[i + 1..] {
                    best = best.max(p.dist(q));
                }
            }
            best
        } else {
            self.bbox.diagonal()
        }
    }

    /// Largest distance from a point to its nearest neighbour; zero for a
    /// single point.
    pub fn spacing(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        let start = self.bbox.diagonal().max(1e-300) / crate::fmath::sqrt(n as f64);
        let mut out = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            let mut r = start;
            loop {
                self.ball_indices_into(p, r, &mut out);
                let d = out
                    .iter()
                    .filter(|&&j| j as usize != i)
                    .map(|&j| self.points[j as usize].dist(p))
                    .fold(f64::INFINITY, f64::min);
                if d.is_finite() {
                    worst = worst.max(d);
                    break;
                }
                r *= 2.0;
            }
        }
        worst
    }

    pub(crate) fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(())
    }

    /// Index of the nearest point and its distance; ties resolve to the
    /// lowest index.
    pub fn nearest(&self, q: &Point) -> (usize, f64) {
        self.index.nearest(&self.points, q)
    }

    pub fn distance(&self, q: &Point) -> f64 {
        self.nearest(q).1
    }

    /// Indices of the points strictly inside `ball`, ascending.
    pub fn ball_indices(&self, ball: &Ball) -> Vec<u32> {
        let mut out = Vec::new();
        self.ball_indices_into(&ball.center, ball.radius, &mut out);
        out
    }

    pub(crate) fn ball_indices_into(&self, center: &Point, radius: f64, out: &mut Vec<u32>) {
        if self.bbox.farthest_corner_distance(center) < radius {
            // the open ball swallows the whole box; a scan keeps the strict test
            out.clear();
            for (i, p) in self.points.iter().enumerate() {
                if p.dist(center) < radius {
                    out.push(i as u32);
                }
            }
            return;
        }
        self.index.ball(&self.points, center, radius, out);
    }

    /// Applies a similarity to every point.
    pub fn transformed(&self, motion: &super::Isometry) -> Result<PointCloud> {
        PointCloud::unchecked(
            self.label.clone(),
            self.points.iter().map(|p| motion.apply(p)).collect(),
        )
    }

    /// The subset of points inside `ball`, as a cloud. `None` when empty.
    pub fn subset(&self, indices: &[u32]) -> Option<PointCloud> {
        if indices.is_empty() {
            return None;
        }
        let pts = indices.iter().map(|&i| self.points[i as usize]).collect();
        PointCloud::unchecked(self.label.clone(), pts).ok()
    }
}
