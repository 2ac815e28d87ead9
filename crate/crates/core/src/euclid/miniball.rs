//! Smallest enclosing ball by move-to-front Welzl recursion. No shuffling:
//! the result depends only on the input order.

use alloc::vec::Vec;

use super::linalg::{self, MAX_N};
use super::point::Point;
use super::EnclosingBall;

pub(crate) fn smallest_ball(points: &[Point], tau_geo: f64) -> EnclosingBall {
    let dim = points[0].dim();
    let mut list: Vec<Point> = points.to_vec();
    let mut boundary: Vec<Point> = Vec::with_capacity(dim + 1);
    let scale = points
        .iter()
        .map(|p| p.dist(&points[0]))
        .fold(0.0, f64::max)
        .max(1.0e-300);
    let (center, radius) = mtf(&mut list, points.len(), &mut boundary, dim, scale);
    let radius = radius.max(0.0);
    let mut support = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if support.len() <= dim && p.dist(&center) >= radius - tau_geo {
            support.push(i);
        }
    }
    EnclosingBall {
        center,
        radius,
        support,
    }
}

fn mtf(
    list: &mut [Point],
    end: usize,
    boundary: &mut Vec<Point>,
    dim: usize,
    scale: f64,
) -> (Point, f64) {
    let mut ball = ball_through(boundary, dim, scale);
    if boundary.len() == dim + 1 {
        return ball;
    }
    let mut i = 0;
    while i < end {
        let p = list[i];
        if !inside(&ball, &p, scale) {
            boundary.push(p);
            ball = mtf(list, i, boundary, dim, scale);
            boundary.pop();
            list[..=i].rotate_right(1);
        }
        i += 1;
    }
    ball
}

fn inside(ball: &(Point, f64), p: &Point, scale: f64) -> bool {
    ball.1 >= 0.0 && p.dist(&ball.0) <= ball.1 + 1.0e-12 * scale
}

/// Smallest ball with every boundary point on its sphere: the circumcenter
/// inside the affine hull of the boundary set.
fn ball_through(boundary: &[Point], dim: usize, scale: f64) -> (Point, f64) {
    match boundary.len() {
        0 => (Point::origin(dim), -1.0),
        1 => (boundary[0], 0.0),
        n => {
            let p0 = boundary[0];
            let v: Vec<Point> = boundary[1..].iter().map(|p| *p - p0).collect();
            let k = n - 1;
            let mut a = [[0.0; MAX_N]; MAX_N];
            let mut b = [0.0; MAX_N];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = v[i].dot(&v[j]);
                }
                b[i] = 0.5 * v[i].norm_sq();
            }
            match linalg::solve(&mut a, &mut b, k, 1.0e-14 * scale * scale) {
                Some(t) => {
                    let mut c = p0;
                    for i in 0..k {
                        c += v[i] * t[i];
                    }
                    let r = boundary.iter().map(|p| p.dist(&c)).fold(0.0, f64::max);
                    (c, r)
                }
                None => {
                    // degenerate boundary: fall back to its farthest pair
                    let mut best = (boundary[0], boundary[0], 0.0);
                    for (i, p) in boundary.iter().enumerate() {
                        for q in &boundary[i + 1..] {
                            let d = p.dist(q);
                            if d > best.2 {
                                best = (*p, *q, d);
                            }
                        }
                    }
                    (best.0.midpoint(&best.1), 0.5 * best.2)
                }
            }
        }
    }
}
