use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

fn cloud(pts: &[(f64, f64)]) -> PointCloud {
    PointCloud::new("t", pts.iter().map(|&(x, y)| Point::xy(x, y)).collect()).unwrap()
}

fn brute_nearest(points: &[Point], q: &Point) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (i, p) in points.iter().enumerate() {
        let d = p.dist(q);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

#[test]
fn dist_to_cloud_examples() {
    assert_eq!(
        dist_to_cloud(&Point::xy(0.0, 0.0), &cloud(&[(3.0, 4.0)])).unwrap(),
        5.0
    );
    let p = cloud(&[(0.5, 0.25), (2.0, -1.0)]);
    assert_eq!(dist_to_cloud(&Point::xy(2.0, -1.0), &p).unwrap(), 0.0);
    assert_eq!(
        dist_to_cloud(&Point::xy(1.0, 0.0), &cloud(&[(0.0, 0.0), (2.0, 0.0)])).unwrap(),
        1.0
    );
}

#[test]
fn dimension_mismatch_is_an_error() {
    let p = cloud(&[(0.0, 0.0)]);
    assert!(matches!(
        dist_to_cloud(&Point::xyz(0.0, 0.0, 0.0), &p),
        Err(Error::DimensionMismatch {
            expected: 2,
            found: 3
        })
    ));
    let q = PointCloud::new("3d", vec![Point::xyz(0.0, 0.0, 1.0)]).unwrap();
    assert!(hausdorff_distance(&p, &q).is_err());
}

#[test]
fn cloud_invariants_are_enforced() {
    assert!(matches!(
        PointCloud::new("e", vec![]),
        Err(Error::EmptyCloud)
    ));
    assert!(matches!(
        PointCloud::new(
            "d",
            vec![
                Point::xy(0.0, 0.0),
                Point::xy(1.0, 0.0),
                Point::xy(0.0, 1e-13)
            ]
        ),
        Err(Error::DuplicatePoint {
            first: 0,
            second: 2
        })
    ));
    assert!(PointCloud::new("n", vec![Point::xy(f64::NAN, 0.0)]).is_err());
    assert!(PointCloud::new("m", vec![Point::xy(0.0, 0.0), Point::xyz(1.0, 0.0, 0.0)]).is_err());
    let dedup = PointCloud::deduplicated(
        "d",
        vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(0.0, 1e-13),
        ],
        1e-12,
    )
    .unwrap();
    assert_eq!(dedup.len(), 2);
}

#[test]
fn hausdorff_examples() {
    let o = cloud(&[(0.0, 0.0)]);
    assert_eq!(hausdorff_distance(&o, &o).unwrap(), 0.0);
    assert_eq!(hausdorff_distance(&o, &cloud(&[(3.0, 4.0)])).unwrap(), 5.0);
    assert_eq!(
        hausdorff_distance(&cloud(&[(0.0, 0.0), (1.0, 0.0)]), &o).unwrap(),
        1.0
    );
}

#[test]
fn members_in_ball_examples() {
    let p = cloud(&[(0.0, 0.0), (5.0, 0.0)]);
    let m = members_in_ball(&p, &Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap())
        .unwrap()
        .unwrap();
    assert_eq!(m.points(), &[Point::xy(0.0, 0.0)]);
    let all = members_in_ball(&p, &Ball::new(Point::xy(1.0, 1.0), 20.0).unwrap())
        .unwrap()
        .unwrap();
    assert_eq!(all.points(), p.points());
    let boundary = cloud(&[(1.0, 0.0)]);
    assert!(
        members_in_ball(&boundary, &Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap())
            .unwrap()
            .is_none()
    );
}

#[test]
fn project_to_hull_examples() {
    let tol = Tolerances::default();
    let s = cloud(&[(1.0, 0.0), (0.0, 1.0)]);
    let h = project_to_hull(&Point::xy(0.0, 0.0), &s, &tol).unwrap();
    assert!(h.point.dist(&Point::xy(0.5, 0.5)) < 1e-12);
    assert!(h.is_certified(s.points(), 1e-12));

    let single = cloud(&[(2.0, -3.0)]);
    let h = project_to_hull(&Point::xy(7.0, 1.0), &single, &tol).unwrap();
    assert_eq!(h.point, Point::xy(2.0, -3.0));

    let tri = cloud(&[(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (1.0, 1.0)]);
    let q = Point::xy(1.0, 2.0);
    let h = project_to_hull(&q, &tri, &tol).unwrap();
    assert!(h.point.dist(&q) < 1e-12, "{:?}", h.point);
    assert!(h.is_certified(tri.points(), 1e-12));
}

#[test]
fn project_to_hull_in_space() {
    let tol = Tolerances::default();
    let tet = PointCloud::new(
        "tet",
        vec![
            Point::xyz(0.0, 0.0, 0.0),
            Point::xyz(1.0, 0.0, 0.0),
            Point::xyz(0.0, 1.0, 0.0),
            Point::xyz(0.0, 0.0, 1.0),
        ],
    )
    .unwrap();
    // nearest point of the face x+y+z=1 to (1,1,1) is its centroid
    let h = project_to_hull(&Point::xyz(1.0, 1.0, 1.0), &tet, &tol).unwrap();
    assert!(h.point.dist(&Point::xyz(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)) < 1e-12);
    let inside = Point::xyz(0.1, 0.2, 0.3);
    assert!(
        project_to_hull(&inside, &tet, &tol)
            .unwrap()
            .point
            .dist(&inside)
            < 1e-12
    );
}

#[test]
fn enclosing_ball_examples() {
    let tol = Tolerances::default();
    let b = min_enclosing_ball(&cloud(&[(0.0, 0.0), (2.0, 0.0)]), &tol);
    assert!(b.center.dist(&Point::xy(1.0, 0.0)) < 1e-15 && (b.radius - 1.0).abs() < 1e-15);
    let b = min_enclosing_ball(&cloud(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]), &tol);
    assert!(b.center.dist(&Point::xy(1.0, 0.0)) < 1e-15 && (b.radius - 1.0).abs() < 1e-15);
    assert_eq!(b.support.len(), 3);
}

/// Minimax center by nested grid refinement: the smallest over candidate
/// centers of the largest distance to the set.
fn grid_chebyshev_radius(points: &[Point]) -> f64 {
    let (mut cx, mut cy, mut half) = (0.5, 0.5, 1.0);
    let mut best = f64::INFINITY;
    for _ in 0..12 {
        let n = 40;
        let (mut bx, mut by) = (cx, cy);
        for i in 0..=n {
            for j in 0..=n {
                let c = Point::xy(
                    cx - half + 2.0 * half * i as f64 / n as f64,
                    cy - half + 2.0 * half * j as f64 / n as f64,
                );
                let r = points.iter().map(|p| p.dist(&c)).fold(0.0, f64::max);
                if r < best {
                    best = r;
                    bx = c.x();
                    by = c.y();
                }
            }
        }
        cx = bx;
        cy = by;
        half *= 0.2;
    }
    best
}

#[test]
fn equilateral_triangle_radius_matches_grid_oracle() {
    let h = libm::sqrt(3.0) / 2.0;
    let pts = [(0.0, 0.0), (1.0, 0.0), (0.5, h)];
    let oracle = grid_chebyshev_radius(
        &pts.iter()
            .map(|&(x, y)| Point::xy(x, y))
            .collect::<Vec<_>>(),
    );
    // frozen from the oracle above
    assert!((oracle - 0.577_350_269).abs() < 1e-8, "{oracle}");
    let b = min_enclosing_ball(&cloud(&pts), &Tolerances::default());
    assert!((b.radius - 0.577_350_269).abs() < 1e-8);
    assert!((b.radius - oracle).abs() < 1e-8);
}

#[test]
fn enclosing_ball_in_space() {
    let pts = vec![
        Point::xyz(1.0, 0.0, 0.0),
        Point::xyz(-1.0, 0.0, 0.0),
        Point::xyz(0.0, 1.0, 0.0),
        Point::xyz(0.0, 0.0, 1.0),
        Point::xyz(0.1, 0.1, 0.1),
    ];
    let b = min_enclosing_ball_of(&pts, &Tolerances::default()).unwrap();
    assert!(b.center.norm() < 1e-12 && (b.radius - 1.0).abs() < 1e-12);
}

#[test]
fn isometries_compose() {
    let a = Isometry::planar(0.3, 1.0, -2.0, 1.0);
    let b = Isometry::planar(-1.1, 0.5, 0.25, 1.0);
    let p = Point::xy(0.7, -0.4);
    assert!(b.compose(&a).apply(&p).dist(&b.apply(&a.apply(&p))) < 1e-15);
}

fn simplex(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().map(|x| x + 1e-3).sum();
    w.iter().map(|x| (x + 1e-3) / total).collect()
}

fn pt2() -> impl Strategy<Value = Point> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Point::xy(x, y))
}

fn pt3() -> impl Strategy<Value = Point> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Point::xyz(x, y, z))
}

fn cloud2(max: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(pt2(), 1..max)
        .prop_map(|v| PointCloud::deduplicated("p", v, 1e-12).unwrap())
}

fn cloud3(max: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(pt3(), 1..max)
        .prop_map(|v| PointCloud::deduplicated("p", v, 1e-12).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn indexed_nearest_matches_scan(p in cloud2(60), q in pt2(), far in 0.0..50.0f64) {
        let q = q * (1.0 + far);
        let (i, d) = p.nearest(&q);
        let (bi, bd) = brute_nearest(p.points(), &q);
        prop_assert_eq!(d, bd);
        prop_assert_eq!(i, bi);
    }

    #[test]
    fn indexed_nearest_matches_scan_3d(p in cloud3(60), q in pt3()) {
        prop_assert_eq!(p.nearest(&q), brute_nearest(p.points(), &q));
    }

    #[test]
    fn indexed_ball_matches_scan(p in cloud3(80), c in pt3(), r in 0.01..8.0f64) {
        let got = p.ball_indices(&Ball::new(c, r).unwrap());
        let want: Vec<u32> = (0..p.len() as u32).filter(|&i| p.points()[i as usize].dist(&c) < r).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dist_zero_iff_member(p in cloud2(30), pick in 0usize..30, q in pt2()) {
        let m = p.points()[pick % p.len()];
        prop_assert_eq!(dist_to_cloud(&m, &p).unwrap(), 0.0);
        let d = dist_to_cloud(&q, &p).unwrap();
        prop_assert_eq!(d <= 1e-12, p.points().iter().any(|x| x.dist(&q) <= 1e-12));
    }

    #[test]
    fn hausdorff_is_a_metric(a in cloud2(25), b in cloud2(25), c in cloud2(25)) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn projection_beats_every_hull_point(s in cloud3(12), q in pt3(), w in prop::collection::vec(0.0..1.0f64, 12)) {
        let tol = Tolerances::default();
        let h = project_to_hull(&q, &s, &tol).unwrap();
        prop_assert!(h.is_certified(s.points(), 1e-10));
        let d = h.point.dist(&q);
        for p in s.points() {
            prop_assert!(d <= p.dist(&q) + 1e-10);
        }
        let combo = weighted_sum(3, s.points().iter().zip(simplex(&w[..s.len()])));
        prop_assert!(d <= combo.dist(&q) + 1e-10);
    }

    #[test]
    fn projection_beats_every_hull_point_2d(s in cloud2(15), q in pt2(), w in prop::collection::vec(0.0..1.0f64, 15)) {
        let tol = Tolerances::default();
        let h = project_to_hull(&q, &s, &tol).unwrap();
        let d = h.point.dist(&q);
        let combo = weighted_sum(2, s.points().iter().zip(simplex(&w[..s.len()])));
        prop_assert!(d <= combo.dist(&q) + 1e-10);
    }

    #[test]
    fn enclosing_ball_properties(s in cloud3(20), h in pt3(), slack in 0.01..1.0f64) {
        let tol = Tolerances::default();
        let b = min_enclosing_ball(&s, &tol);
        for p in s.points() {
            prop_assert!(p.dist(&b.center) <= b.radius + tol.geo);
        }
        prop_assert!(b.radius <= s.diameter() + 1e-12);
        prop_assert!(!b.support.is_empty() && b.support.len() <= 4);
        // any open ball around h holding the set is strictly larger
        let r = s.points().iter().map(|p| p.dist(&h)).fold(0.0, f64::max) + slack;
        prop_assert!(b.radius < r);
    }

    #[test]
    fn kernels_are_rigid_motion_invariant(
        s in cloud2(15), t in cloud2(15), q in pt2(),
        angle in -3.2..3.2f64, tx in -10.0..10.0f64, ty in -10.0..10.0f64,
    ) {
        let tol = Tolerances::default();
        let m = Isometry::planar(angle, tx, ty, 1.0);
        let (ms, mt, mq) = (s.transformed(&m).unwrap(), t.transformed(&m).unwrap(), m.apply(&q));
        prop_assert!((dist_to_cloud(&q, &s).unwrap() - dist_to_cloud(&mq, &ms).unwrap()).abs() < 1e-9);
        prop_assert!((hausdorff_distance(&s, &t).unwrap() - hausdorff_distance(&ms, &mt).unwrap()).abs() < 1e-9);
        let (b, mb) = (min_enclosing_ball(&s, &tol), min_enclosing_ball(&ms, &tol));
        prop_assert!((b.radius - mb.radius).abs() < 1e-9);
        prop_assert!(m.apply(&b.center).dist(&mb.center) < 1e-9);
        let (h, mh) = (project_to_hull(&q, &s, &tol).unwrap(), project_to_hull(&mq, &ms, &tol).unwrap());
        prop_assert!(m.apply(&h.point).dist(&mh.point) < 1e-9);
    }

    #[test]
    fn kernels_are_rigid_motion_invariant_3d(
        s in cloud3(15), q in pt3(), axis in (0.1..1.0f64, -1.0..1.0f64, -1.0..1.0f64), angle in -3.2..3.2f64,
    ) {
        let tol = Tolerances::default();
        let m = Isometry::spatial([axis.0, axis.1, axis.2], angle, [1.0, -2.0, 0.5]);
        let (ms, mq) = (s.transformed(&m).unwrap(), m.apply(&q));
        prop_assert!((dist_to_cloud(&q, &s).unwrap() - dist_to_cloud(&mq, &ms).unwrap()).abs() < 1e-9);
        let (b, mb) = (min_enclosing_ball(&s, &tol), min_enclosing_ball(&ms, &tol));
        prop_assert!((b.radius - mb.radius).abs() < 1e-9);
        let (h, mh) = (project_to_hull(&q, &s, &tol).unwrap(), project_to_hull(&mq, &ms, &tol).unwrap());
        prop_assert!(m.apply(&h.point).dist(&mh.point) < 1e-9);
    }
}
