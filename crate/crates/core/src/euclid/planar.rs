use alloc::vec::Vec;

use super::Point;

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Vertices of the planar convex hull of `points[idx]`, counterclockwise,
/// collinear points dropped. Returns at most two indices for collinear input.
pub(crate) fn hull_indices(points: &[Point], idx: &[u32]) -> Vec<u32> {
    let mut order: Vec<u32> = idx.to_vec();
    order.sort_by(|&a, &b| {
        let (p, q) = (&points[a as usize], &points[b as usize]);
        p.x()
            .total_cmp(&q.x())
            .then(p.y().total_cmp(&q.y()))
            .then(a.cmp(&b))
    });
    if order.len() <= 2 {
        return order;
    }
    let mut hull: Vec<u32> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: &mut dyn Iterator<Item = &u32> = if pass == 0 {
            &mut order.iter()
        } else {
            &mut order.iter().rev()
        };
        for &i in seq {
            while hull.len() >= start + 2 {
                let n = hull.len();
                let (o, a) = (&points[hull[n - 2] as usize], &points[hull[n - 1] as usize]);
                if cross(o, a, &points[i as usize]) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.is_empty() {
        // all points coincide along one line: keep the extremes
        hull.push(order[0]);
        hull.push(*order.last().unwrap());
    }
    hull
}
