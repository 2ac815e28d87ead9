//! Nearest point of a convex hull, by Wolfe's minimum-norm-point method.
//!
//! The search runs on the translated set `S - q`. Each major step adds the
//! point minimizing `<x, p>` (lowest index on ties) to the active "corral";
//! minor steps move toward the affine minimizer of the corral and drop points
//! whose weight reaches zero. The method terminates finitely.

use alloc::vec::Vec;

use super::linalg::{self, MAX_N};
use super::point::{weighted_sum, Point};
use super::HullPoint;
use crate::error::{Error, Result};
use crate::fmath;

const WEIGHT_EPS: f64 = 1.0e-14;

pub(crate) fn min_norm_point(points: &[Point], q: &Point, tau_proj: f64) -> Result<HullPoint> {
    let dim = q.dim();
    let shifted: Vec<Point> = points.iter().map(|p| *p - *q).collect();
    let scale2 = shifted
        .iter()
        .map(Point::norm_sq)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let mut start = 0;
    for (i, p) in shifted.iter().enumerate() {
        if p.norm_sq() < shifted[start].norm_sq() {
            start = i;
        }
    }
    let mut corral: Vec<usize> = alloc::vec![start];
    let mut lambda: Vec<f64> = alloc::vec![1.0];
    let mut x = shifted[start];

    let budget = 50 * (points.len() + dim + 1);
    let mut converged = false;
    for _ in 0..budget {
        let xx = x.norm_sq();
        let mut j = 0;
        let mut best = f64::INFINITY;
        for (i, p) in shifted.iter().enumerate() {
            let v = p.dot(&x);
            if v < best {
                best = v;
                j = i;
            }
        }
        let gap = xx - best;
        let floor = 1.0e-15 * scale2;
        if gap <= (0.5 * tau_proj * fmath::sqrt(xx)).max(floor) || corral.contains(&j) {
            converged = true;
            break;
        }
        if corral.len() == MAX_N || corral.len() > dim {
            // a full-dimensional corral already spans the space; numerical stall
            converged = true;
            break;
        }
        corral.push(j);
        lambda.push(0.0);

        loop {
            let Some(mu) = affine_minimizer(&shifted, &corral, scale2) else {
                // affinely dependent corral: undo the insertion and stop
                corral.pop();
                lambda.pop();
                converged = true;
                break;
            };
            if mu.iter().all(|&m| m > WEIGHT_EPS) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= WEIGHT_EPS {
                    let denom = l - m;
                    if denom > 0.0 {
                        theta = theta.min(l / denom);
                    }
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let mut k = 0;
            while k < corral.len() {
                if lambda[k] <= WEIGHT_EPS && corral.len() > 1 {
                    corral.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            normalize(&mut lambda);
            if corral.len() == 1 {
                break;
            }
        }
        if converged {
            break;
        }
        let next = weighted_sum(
            dim,
            corral
                .iter()
                .map(|&i| &shifted[i])
                .zip(lambda.iter().copied()),
        );
        if next.norm_sq() >= xx - floor {
            // no progress at machine precision
            converged = true;
            break;
        }
        x = next;
    }
    if !converged {
        return Err(Error::ProjectionNoConvergence { iterations: budget });
    }
    normalize(&mut lambda);
    let mut support: Vec<(usize, f64)> = corral.into_iter().zip(lambda).collect();
    support.sort_by_key(|s| s.0);
    let point = weighted_sum(dim, support.iter().map(|&(i, w)| (&points[i], w)));
    Ok(HullPoint { point, support })
}

fn normalize(w: &mut [f64]) {
    for v in w.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for v in w.iter_mut() {
            *v /= s;
        }
    }
}

/// Barycentric weights of the minimum-norm point of the affine hull of the
/// corral; `None` if the corral is affinely dependent.
fn affine_minimizer(pts: &[Point], corral: &[usize], scale2: f64) -> Option<Vec<f64>> {
    let k = corral.len() - 1;
    let p0 = pts[corral[0]];
    if k == 0 {
        return Some(alloc::vec![1.0]);
    }
    let mut a = [[0.0; MAX_N]; MAX_N];
    let mut b = [0.0; MAX_N];
    let v: Vec<Point> = corral[1..].iter().map(|&i| pts[i] - p0).collect();
    for i in 0..k {
        for j in 0..k {
            a[i][j] = v[i].dot(&v[j]);
        }
        b[i] = -v[i].dot(&p0);
    }
    let t = linalg::solve(&mut a, &mut b, k, 1.0e-13 * scale2)?;
    let mut mu = Vec::with_capacity(k + 1);
    mu.push(1.0 - t[..k].iter().sum::<f64>());
    mu.extend_from_slice(&t[..k]);
    Some(mu)
}
