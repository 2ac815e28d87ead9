//! Lower estimates of `max { dist(q, T) : q ∈ conv(M) }` for a member set `M`
//! of a cloud, with `T` either the whole cloud or `M` itself.
//!
//! Each chain starts from a point of the hull and climbs by conditional
//! gradient steps: the direction away from the current nearest target point
//! selects a hull vertex, and a short line search toward it keeps the best
//! distance seen. Chain `c` draws from the stream keyed by the member set and
//! `c`, so adding chains or steps never lowers the result. A shadow target
//! records the best distance to a second set over every visited point.

use alloc::vec::Vec;

use rand::Rng;

use crate::euclid::{hull_indices, HullPoint, Point, PointCloud};
use crate::sampling;

const LINE_STEPS: [f64; 6] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125];

#[derive(Debug, Clone)]
pub(crate) struct Found {
    pub distance: f64,
    pub point: HullPoint,
}

pub(crate) struct HullSearch {
    pub chains: usize,
    pub steps: usize,
    pub seed: u64,
}

/// 128-bit fingerprint of a sorted index list.
pub(crate) fn set_key(members: &[u32]) -> u128 {
    let (mut a, mut b) = (
        0x243f_6a88_85a3_08d3u64,
        0x1319_8a2e_0370_7344u64 ^ members.len() as u64,
    );
    for &m in members {
        a = sampling::mix(a, m as u64);
        b = sampling::splitmix(b ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    ((a as u128) << 64) | b as u128
}

#[derive(Clone)]
struct Chain {
    point: Point,
    weights: Vec<(u32, f64)>,
}

impl Chain {
    fn step_toward(&mut self, v: u32, vp: &Point, t: f64) {
        self.point = self.point + (*vp - self.point) * t;
        let mut found = false;
        for (i, w) in self.weights.iter_mut() {
            *w *= 1.0 - t;
            if *i == v {
                *w += t;
                found = true;
            }
        }
        if !found {
            self.weights.push((v, t));
        }
        self.weights.retain(|&(_, w)| w > 0.0);
    }

    fn to_hull_point(&self) -> HullPoint {
        let mut support: Vec<(usize, f64)> =
            self.weights.iter().map(|&(i, w)| (i as usize, w)).collect();
        support.sort_by_key(|s| s.0);
        let total: f64 = support.iter().map(|s| s.1).sum();
        support.iter_mut().for_each(|s| s.1 /= total);
        HullPoint {
            point: self.point,
            support,
        }
    }
}

impl HullSearch {
    /// `members` index into `cloud` and must be nonempty; `target` is the
    /// set distances are measured to. With a `shadow`, also returns the
    /// visited point farthest from it.
    pub(crate) fn run(
        &self,
        cloud: &PointCloud,
        members: &[u32],
        key: u128,
        target: &PointCloud,
        shadow: Option<&PointCloud>,
    ) -> (Found, Option<Found>) {
        let pts = cloud.points();
        let pool: Vec<u32> = if cloud.dim() == 2 && members.len() > 3 {
            hull_indices(pts, members)
        } else {
            members.to_vec()
        };
        let first = pool[0];
        let vertex = Found {
            distance: 0.0,
            point: HullPoint::vertex(pts, first as usize),
        };
        let mut best = vertex.clone();
        let mut shadow_best = shadow.map(|s| Found {
            distance: s.distance(&pts[first as usize]),
            ..vertex
        });
        if pool.len() == 1 {
            return (best, shadow_best);
        }
        let dist = |q: &Point| target.nearest(q).1;
        let mut track = |chain: &Chain| {
            if let (Some(s), Some(b)) = (shadow, shadow_best.as_mut()) {
                let d = s.distance(&chain.point);
                if d > b.distance {
                    *b = Found {
                        distance: d,
                        point: chain.to_hull_point(),
                    };
                }
            }
        };
        let key_hi = (key >> 64) as u64;
        let key_lo = key as u64;

        for c in 0..self.chains {
            let mut rng = sampling::stream(
                self.seed,
                sampling::mix(key_hi, sampling::mix(key_lo, c as u64)),
            );
            let mut chain = if c == 0 {
                let a = farthest(pts, &pool, &pts[first as usize]);
                let b = farthest(pts, &pool, &pts[a as usize]);
                if a == b {
                    continue;
                }
                Chain {
                    point: pts[a as usize].midpoint(&pts[b as usize]),
                    weights: alloc::vec![(a, 0.5), (b, 0.5)],
                }
            } else {
                let k = rng.gen_range(2..=cloud.dim() + 1).min(pool.len());
                let mut w = [0.0; 4];
                sampling::dirichlet(&mut rng, &mut w[..k]);
                let mut chain = Chain {
                    point: Point::origin(cloud.dim()),
                    weights: Vec::with_capacity(k),
                };
                for &wi in &w[..k] {
                    let v = pool[rng.gen_range(0..pool.len())];
                    chain.point += pts[v as usize] * wi;
                    match chain.weights.iter_mut().find(|e| e.0 == v) {
                        Some(e) => e.1 += wi,
                        None => chain.weights.push((v, wi)),
                    }
                }
                chain
            };
            let mut d = dist(&chain.point);
            track(&chain);
            for _ in 0..self.steps {
                let (ni, _) = target.nearest(&chain.point);
                let mut u = chain.point - target.points()[ni];
                if u.norm_sq() == 0.0 {
                    let v = pool[rng.gen_range(0..pool.len())];
                    u = pts[v as usize] - chain.point;
                    if u.norm_sq() == 0.0 {
                        continue;
                    }
                }
                let v = pool
                    .iter()
                    .copied()
                    .max_by(|&a, &b| {
                        pts[a as usize]
                            .dot(&u)
                            .total_cmp(&pts[b as usize].dot(&u))
                            .then(b.cmp(&a))
                    })
                    .unwrap();
                let vp = pts[v as usize];
                let mut pick = None;
                let mut pick_d = d;
                for &t in &LINE_STEPS {
                    let q = chain.point + (vp - chain.point) * t;
                    let dq = dist(&q);
                    if dq > pick_d {
                        pick_d = dq;
                        pick = Some(t);
                    }
                }
                match pick {
                    Some(t) => {
                        chain.step_toward(v, &vp, t);
                        d = pick_d;
                        track(&chain);
                    }
                    None => break,
                }
            }
            if d > best.distance {
                best = Found {
                    distance: d,
                    point: chain.to_hull_point(),
                };
            }
        }
        (best, shadow_best)
    }
}

fn farthest(pts: &[Point], pool: &[u32], from: &Point) -> u32 {
    let mut best = (pool[0], -1.0);
    for &i in pool {
        let d = pts[i as usize].dist_sq(from);
        if d > best.1 {
            best = (i, d);
        }
    }
    best.0
}
