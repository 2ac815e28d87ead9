use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::euclid::Isometry;
use crate::paraconvexity::{nonconvexity_function, SamplingPlan};
use crate::scenes::{generate_scene, Generator, Scene};

fn scene(g: Generator, density: usize) -> PointCloud {
    generate_scene(&Scene::new("s", g, density)).unwrap()
}

fn semicircle_alpha(p: &PointCloud) -> f64 {
    nonconvexity_function(p, &SamplingPlan::for_cloud(p, 1))
        .unwrap()
        .max_alpha()
}

fn check_trace(trace: &SelectionTrace, start: &Point, r0: f64, beta: f64) {
    let mut bound = r0;
    for s in &trace.step_norms {
        assert!(*s <= bound * (1.0 + 1e-9), "step {s} over {bound}");
        bound *= beta;
    }
    let total: f64 = trace.step_norms.iter().sum();
    assert!(total <= r0 / (1.0 - beta) * (1.0 + 1e-6));
    let mut prev = *start;
    for (x, s) in trace.iterates.iter().zip(&trace.step_norms) {
        assert!((prev.dist(x) - s).abs() < 1e-12);
        prev = *x;
    }
}

#[test]
fn bary_single_member_and_symmetry() {
    let p = PointCloud::new("p", vec![Point::xy(0.3, 0.1), Point::xy(5.0, 5.0)]).unwrap();
    let h = bary_select(&p, &Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap(), 2.0).unwrap();
    assert_eq!(h.point, Point::xy(0.3, 0.1));
    assert_eq!(h.support, vec![(0, 1.0)]);

    let q = PointCloud::new(
        "q",
        vec![
            Point::xy(-0.4, 0.0),
            Point::xy(0.4, 0.0),
            Point::xy(3.0, 0.0),
        ],
    )
    .unwrap();
    let h = bary_select(&q, &Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap(), 3.0).unwrap();
    assert!(h.point.norm() < 1e-15);
    assert!((h.support[0].1 - 0.5).abs() < 1e-15);
}

#[test]
fn bary_errors() {
    let p = PointCloud::new("p", vec![Point::xy(0.0, 0.0)]).unwrap();
    assert!(matches!(
        bary_select(&p, &Ball::new(Point::xy(3.0, 0.0), 1.0).unwrap(), 2.0),
        Err(Error::EmptyIntersection { .. })
    ));
    assert!(bary_select(&p, &Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap(), 0.0).is_err());
    assert!(bary_select(&p, &Ball::new(Point::xyz(0.0, 0.0, 0.0), 1.0).unwrap(), 2.0).is_err());
}

#[test]
fn tilt_is_fixed_per_seed() {
    let p = scene(Generator::DiskSample, 300);
    let d = Ball::new(Point::xy(0.1, -0.2), 0.6).unwrap();
    let plain = bary_select_with(&p, &d, &SelectionRule::default()).unwrap();
    let a = bary_select_with(&p, &d, &SelectionRule::default().tilted(3)).unwrap();
    let b = bary_select_with(&p, &d, &SelectionRule::default().tilted(3)).unwrap();
    let c = bary_select_with(&p, &d, &SelectionRule::default().tilted(4)).unwrap();
    assert_eq!(a, b);
    assert!(a.point.dist(&plain.point) > 1e-6);
    assert!(a.point.dist(&c.point) > 1e-6);
    assert!(a.is_certified(p.points(), 1e-12));
}

#[test]
fn schedule_validation() {
    assert!(IterationSchedule::banach(0.0).is_err());
    assert!(IterationSchedule::banach(1.0).is_err());
    assert!(IterationSchedule::banach(0.5)
        .unwrap()
        .with_tol(0.0)
        .validate()
        .is_err());
    assert!(IterationSchedule::banach(0.5)
        .unwrap()
        .with_n_max(0)
        .validate()
        .is_err());
    // fixed point 2γ²/(1+γ²) = 0.4 against 1 − 1/C = 0.2
    assert!(IterationSchedule::hilbert(0.5, 1.25).is_err());
    assert!(IterationSchedule::hilbert(0.5, 2.0).is_ok());
    assert!(IterationSchedule::hilbert_for(1.0, 0.05).is_err());
    assert!(IterationSchedule::hilbert_for(0.5, 0.0).is_err());
}

#[test]
fn n_max_defaults() {
    assert_eq!(default_n_max(0.5), 200);
    assert_eq!(default_n_max(0.95), 585);
    assert_eq!(IterationSchedule::banach(0.5).unwrap().n_max, 200);
}

#[test]
fn hilbert_for_sits_inside_its_window() {
    for alpha in [0.0, 0.2, 0.5, 0.9, 0.97] {
        let s = IterationSchedule::hilbert_for(alpha, 0.05).unwrap();
        let Mode::Hilbert { constant } = s.mode else {
            panic!()
        };
        let floor = hilbert_constant_floor(alpha);
        assert!((constant - floor - 0.05).abs() < 1e-12);
        assert!(s.contraction > alpha || alpha == 0.0);
        let fp = 2.0 * s.contraction * s.contraction / (1.0 + s.contraction * s.contraction);
        assert!(fp < 1.0 - 1.0 / constant);
        let factor = s.series_factor();
        assert!(factor > 1.0 && factor < constant, "{factor} vs {constant}");
    }
}

#[test]
fn start_in_cloud_is_returned() {
    let p = scene(Generator::Semicircle, 50);
    let s = IterationSchedule::banach(0.5).unwrap();
    let (x, t) = iterate_to_member(&p, p.points()[7], 1.0, &s).unwrap();
    assert_eq!(x, p.points()[7]);
    assert!(t.iterates.is_empty());
}

#[test]
fn segment_bound() {
    let p = scene(Generator::Segment, 1001);
    let beta = 0.3;
    let s = IterationSchedule::banach(beta).unwrap();
    for start in [
        Point::xy(0.2, 0.5),
        Point::xy(-0.77, -0.1),
        Point::xy(1.5, 0.3),
    ] {
        let d = p.distance(&start);
        let (x, t) = iterate_to_member(&p, start, 2.0 * d, &s).unwrap();
        assert!(p.distance(&x) == 0.0);
        assert!(start.dist(&x) <= 2.0 * d / (1.0 - beta) + s.tol * 2.0 * d);
        check_trace(&t, &start, 2.0 * d, beta);
        assert!((t.certified_bound - 2.0 * d / (1.0 - beta)).abs() < 1e-12);
    }
}

#[test]
fn semicircle_from_center() {
    let p = scene(Generator::Semicircle, 200);
    let alpha = semicircle_alpha(&p);
    let beta = alpha + 0.05;
    let s = IterationSchedule::banach(beta).unwrap();
    let start = Point::xy(0.0, 0.0);
    let (x, t) = iterate_to_member(&p, start, 2.0, &s).unwrap();
    assert!(p.distance(&x) == 0.0);
    assert!((x.norm() - 1.0).abs() < 1e-12);
    check_trace(&t, &start, 2.0, beta);
    assert!(t.snapped);
    assert!(t
        .radii
        .windows(2)
        .all(|w| (w[1] / w[0] - beta).abs() < 1e-12));
}

#[test]
fn missing_ball_is_an_error() {
    let p = PointCloud::new("p", vec![Point::xy(0.0, 0.0)]).unwrap();
    let s = IterationSchedule::banach(0.5).unwrap();
    assert!(matches!(
        iterate_to_member(&p, Point::xy(2.0, 0.0), 1.0, &s),
        Err(Error::EmptyIntersection { .. })
    ));
}

#[test]
fn hilbert_certified_radii_follow_gamma_sequence() {
    let p = scene(Generator::Semicircle, 400);
    let s = IterationSchedule::hilbert(0.6, 4.0).unwrap();
    let eps = 1.5;
    let (x, t) = iterate_to_member(&p, Point::xy(0.0, 0.1), eps, &s).unwrap();
    assert!(p.distance(&x) == 0.0);
    let seq = gamma_sequence(0.6, t.certified.len()).unwrap();
    let (n, _, _) = s.hilbert_plan(4.0).unwrap();
    for (i, c) in t.certified.iter().take(n).enumerate() {
        assert!(
            (c - seq.terms[i] * eps).abs() < 1e-12,
            "n={} {} vs {}",
            i + 1,
            c,
            seq.terms[i] * eps
        );
    }
    assert!(x.dist(&Point::xy(0.0, 0.1)) <= t.certified_bound * (1.0 + 1e-9));
}

#[test]
fn improve_rejects_bad_inputs() {
    let p = scene(Generator::Segment, 11);
    let map = SetValuedMap::constant("seg", vec![Point::xy(0.0, 0.0), Point::xy(1.0, 1.0)], p);
    let s = IterationSchedule::banach(0.2).unwrap();
    assert!(matches!(
        improve_epsilon_selection(&map, &[Point::xy(0.0, 0.5), Point::xy(0.0, 0.01)], 0.1, &s),
        Err(Error::NotEpsilonSelection { index: 0, .. })
    ));
    assert!(matches!(
        improve_epsilon_selection(&map, &[Point::xy(0.0, 0.0)], 0.1, &s),
        Err(Error::LengthMismatch { .. })
    ));
    assert!(
        improve_epsilon_selection(&map, &[Point::xy(0.0, 0.0), Point::xy(0.0, 0.0)], 0.0, &s)
            .is_err()
    );
}

#[test]
fn improve_keeps_exact_selections() {
    let p = scene(Generator::Semicircle, 60);
    let f: Vec<Point> = p.points()[..10].to_vec();
    let map = SetValuedMap::constant("semi", f.clone(), p);
    let out = improve_epsilon_selection(&map, &f, 0.1, &IterationSchedule::banach(0.99).unwrap())
        .unwrap();
    assert_eq!(out.values, f);
    assert_eq!(out.max_ratio, 0.0);
}

#[test]
fn improve_on_segment_moves_about_eps() {
    let p = scene(Generator::Segment, 2001);
    let eps = 0.1;
    let domain: Vec<Point> = (0..20)
        .map(|i| Point::xy(-0.9 + 0.09 * i as f64, 0.0))
        .collect();
    let f: Vec<Point> = domain
        .iter()
        .map(|x| *x + Point::xy(0.0, 0.99 * eps))
        .collect();
    let map = SetValuedMap::constant("seg", domain, p.clone());
    let out = improve_epsilon_selection(&map, &f, eps, &IterationSchedule::banach(0.05).unwrap())
        .unwrap();
    for (a, b) in f.iter().zip(&out.values) {
        assert!(p.distance(b) == 0.0);
        assert!(a.dist(b) <= eps * (1.0 + 1e-6), "{}", a.dist(b));
    }
    assert!(out.max_ratio <= 1.0 + 1e-6);
}

#[test]
fn improve_semicircle_hilbert_within_constant() {
    let p = scene(Generator::Semicircle, 200);
    let alpha = semicircle_alpha(&p);
    let s = IterationSchedule::hilbert_for(alpha, 0.05).unwrap();
    let Mode::Hilbert { constant } = s.mode else {
        panic!()
    };
    let eps = 0.2;
    let domain: Vec<Point> = (0..40)
        .map(|i| Point::xy(-1.2 + 0.06 * i as f64, 0.3))
        .collect();
    let f: Vec<Point> = (0..40)
        .map(|i| {
            let t = core::f64::consts::PI * (i as f64 + 0.5) / 40.0;
            Point::xy(0.9 * crate::fmath::cos(t), 0.9 * crate::fmath::sin(t))
        })
        .collect();
    let map = SetValuedMap::constant("semi", domain, p.clone());
    let out = improve_epsilon_selection(&map, &f, eps, &s).unwrap();
    assert!(out.values.iter().all(|v| p.distance(v) == 0.0));
    assert!(
        out.max_ratio <= constant,
        "{} vs {}",
        out.max_ratio,
        constant
    );
    assert!(out.max_ratio <= out.certified_ratio * (1.0 + 1e-9));
}

fn arb_disk_ball() -> impl Strategy<Value = (Point, f64)> {
    ((-1.2..1.2f64, -1.2..1.2f64), 0.15..1.5f64).prop_map(|((x, y), r)| (Point::xy(x, y), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bary_weights_are_a_simplex((c, r) in arb_disk_ball(), kappa in 0.5..4.0f64, tilt in prop::option::of(0u64..50)) {
        let p = scene(Generator::DiskSample, 200);
        let d = Ball::new(c, r).unwrap();
        let rule = SelectionRule { kappa, tilt };
        if let Ok(h) = bary_select_with(&p, &d, &rule) {
            let total: f64 = h.support.iter().map(|s| s.1).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(h.support.iter().all(|s| s.1 >= 0.0 && d.contains(&p.points()[s.0])));
            prop_assert!(h.is_certified(p.points(), 1e-9));
        }
    }

    #[test]
    fn bary_is_continuous_in_the_ball((c, r) in arb_disk_ball(), dir in 0.0..6.3f64, dr in -1.0..1.0f64) {
        let p = scene(Generator::Semicircle, 300);
        let d = Ball::new(c, r).unwrap();
        prop_assume!(!p.ball_indices(&d).is_empty());
        let base = bary_select(&p, &d, 2.0).unwrap().point;
        for eta in [1e-4 * r, 1e-6 * r] {
            let moved = Ball::new(
                c + Point::xy(crate::fmath::cos(dir), crate::fmath::sin(dir)) * eta,
                r + dr * eta,
            ).unwrap();
            if let Ok(h) = bary_select(&p, &moved, 2.0) {
                // empirical Lipschitz constant
                prop_assert!(h.point.dist(&base) <= 50.0 * eta / r.min(1.0) + 1e-12,
                    "eta {} moved {}", eta, h.point.dist(&base));
            }
        }
    }

    #[test]
    fn banach_traces_obey_the_series(x in -1.5..1.5f64, y in -0.5..1.5f64, beta in 0.95..0.99f64) {
        let p = scene(Generator::Semicircle, 200);
        let start = Point::xy(x, y);
        let d = p.distance(&start);
        prop_assume!(d > 1e-6);
        let s = IterationSchedule::banach(beta).unwrap();
        let (out, t) = iterate_to_member(&p, start, 2.0 * d, &s).unwrap();
        prop_assert!(p.distance(&out) == 0.0);
        prop_assert!(t.step_norms.len() <= s.n_max);
        check_trace(&t, &start, 2.0 * d, beta);
        prop_assert!(start.dist(&out) <= 2.0 * d / (1.0 - beta) + s.tol * 2.0 * d);
    }

    #[test]
    fn iteration_is_motion_equivariant(
        x in -1.5..1.5f64, y in -0.5..1.5f64,
        angle in 0.0..6.3f64, tx in -3.0..3.0f64, ty in -3.0..3.0f64,
    ) {
        let p = scene(Generator::Semicircle, 120);
        let m = Isometry::planar(angle, tx, ty, 1.0);
        let q = p.transformed(&m).unwrap();
        let start = Point::xy(x, y);
        let d = p.distance(&start);
        prop_assume!(d > 1e-3);
        let s = IterationSchedule::banach(0.97).unwrap();
        let (a, _) = iterate_to_member(&p, start, 2.0 * d, &s).unwrap();
        let (b, _) = iterate_to_member(&q, m.apply(&start), 2.0 * d, &s).unwrap();
        prop_assert!(m.apply(&a).dist(&b) <= 1e-9, "{:?} vs {:?}", m.apply(&a), b);
    }
}
