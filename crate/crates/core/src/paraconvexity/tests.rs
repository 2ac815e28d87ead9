use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::proximity::PROXIMITY_TOL;
use super::*;
use crate::euclid::Isometry;
use crate::oracle::brute_force_hull_max;
use crate::scenes::{generate_scene, Generator, Scene};

fn two_points() -> PointCloud {
    PointCloud::new("two", vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]).unwrap()
}

fn scene(g: Generator, density: usize) -> PointCloud {
    generate_scene(&Scene::new("s", g, density)).unwrap()
}

fn plan(radii: Vec<f64>) -> SamplingPlan {
    SamplingPlan {
        ball_center_count: 32,
        point_centers: 64,
        radius_grid: radii,
        hull_sample_count: 6,
        refine_steps: 12,
        seed: 11,
    }
}

#[test]
fn plan_validation() {
    assert!(plan(vec![0.5, 1.0]).validate().is_ok());
    assert!(plan(vec![]).validate().is_err());
    assert!(plan(vec![1.0, 1.0]).validate().is_err());
    assert!(plan(vec![-1.0]).validate().is_err());
    let mut p = plan(vec![1.0]);
    p.hull_sample_count = 0;
    assert!(p.validate().is_err());
}

#[test]
fn default_radii_span() {
    let r = default_radii(2.0);
    assert_eq!(r.len(), 24);
    assert_eq!(r[0], 0.1);
    assert_eq!(r[23], 3.0);
    assert!(r.windows(2).all(|w| w[1] > w[0]));
    let ratio = r[1] / r[0];
    assert!(r.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-12));
}

#[test]
fn two_point_precision_is_the_midpoint() {
    let p = two_points();
    let d = Ball::new(Point::xy(0.0, 0.0), 1.1).unwrap();
    let got = relative_precision(&p, &d, &plan(vec![1.0])).unwrap();
    assert!((got.value - 1.0 / 1.1).abs() < 1e-12);
    assert!(got.point.point.dist(&Point::xy(0.0, 0.0)) < 1e-12);
    assert!(got.point.is_certified(p.points(), 1e-12));
}

#[test]
fn empty_ball_is_an_error() {
    let d = Ball::new(Point::xy(5.0, 5.0), 1.0).unwrap();
    assert!(matches!(
        relative_precision(&two_points(), &d, &plan(vec![1.0])),
        Err(Error::EmptyIntersection { .. })
    ));
}

#[test]
fn semicircle_precision_matches_grid_oracle() {
    let p = scene(Generator::Semicircle, 200);
    let d = Ball::new(Point::xy(0.0, 0.0), 1.05).unwrap();
    let got = relative_precision(&p, &d, &SamplingPlan::for_cloud(&p, 3)).unwrap();
    let (oracle, _) = brute_force_hull_max(&p, p.points(), 1.05 / 200.0);
    // frozen from the grid oracle
    assert!((oracle / 1.05 - 0.952381).abs() < 1e-6);
    assert!((got.value - oracle / 1.05).abs() < 1e-3);
}

#[test]
fn convex_square_profile_is_small() {
    let p = scene(Generator::ConvexPolygon { sides: 4 }, 2000);
    let prof = nonconvexity_function(&p, &plan(vec![1.0, 1.5, 2.0, 3.0])).unwrap();
    assert!(prof.max_alpha() <= 0.05, "{}", prof.max_alpha());
    assert!(
        check_paraconvexity(&p, 0.05, false, &plan(vec![1.0, 2.0]))
            .unwrap()
            .holds
    );
}

#[test]
fn two_point_profile_approaches_one() {
    let p = two_points();
    let radii = vec![0.5, 1.001, 1.01, 1.1, 2.0];
    let prof = nonconvexity_function(&p, &plan(radii.clone())).unwrap();
    assert_eq!(prof.entries[0].alpha_hat, 0.0);
    assert!(!prof.entries[0].is_absent());
    for e in &prof.entries[1..] {
        assert!(
            (e.alpha_hat - 1.0 / e.r).abs() < 1e-9,
            "r={} got {}",
            e.r,
            e.alpha_hat
        );
    }
    assert!(prof.entries[1].alpha_hat > 0.998);
}

#[test]
fn two_point_verdict_fails_at_midpoint() {
    let v = check_paraconvexity(&two_points(), 0.5, false, &plan(vec![1.01, 1.5, 2.0])).unwrap();
    assert!(!v.holds);
    assert!((v.worst_deficit - (1.0 / 1.01 - 0.5)).abs() < 1e-9);
    let w = v.witness.unwrap();
    assert!(w.point.point.dist(&Point::xy(0.0, 0.0)) < 1e-9);
    assert!(w.ball.contains(&Point::xy(-1.0, 0.0)) && w.ball.contains(&Point::xy(1.0, 0.0)));
}

#[test]
fn verdict_rejects_bad_alpha() {
    assert!(check_paraconvexity(&two_points(), 1.0, false, &plan(vec![1.0])).is_err());
    assert!(check_paraconvexity(&two_points(), -0.1, false, &plan(vec![1.0])).is_err());
}

#[test]
fn witnesses_realize_their_values() {
    let p = scene(
        Generator::SinReciprocal {
            x_min: 0.25,
            x_max: 1.0,
        },
        200,
    );
    let prof = nonconvexity_function(&p, &plan(default_radii(p.diameter()))).unwrap();
    for e in &prof.entries {
        assert!((0.0..2.0).contains(&e.alpha_hat));
        let w = e.witness.as_ref().unwrap();
        assert!(p.distance(&w.point.point) >= e.alpha_hat * e.r - 1e-9);
        let members = p.ball_indices(&w.ball);
        assert!(w
            .point
            .support
            .iter()
            .all(|(i, _)| members.contains(&(*i as u32))));
        assert!(w.point.is_certified(p.points(), 1e-9));
    }
}

#[test]
fn strong_dominates_weak() {
    for g in [Generator::Semicircle, Generator::Spiral { turns: 1.5 }] {
        let p = scene(g, 150);
        let pl = plan(default_radii(p.diameter()));
        let weak = nonconvexity_function(&p, &pl).unwrap();
        let strong = profile(&p, &pl, true).unwrap();
        for (a, b) in weak.entries.iter().zip(&strong.entries) {
            assert!(
                b.alpha_hat >= a.alpha_hat,
                "r={} weak {} strong {}",
                a.r,
                a.alpha_hat,
                b.alpha_hat
            );
        }
        for alpha in [0.3, 0.6, 0.9, 0.99] {
            let s = check_paraconvexity(&p, alpha, true, &pl).unwrap();
            let w = check_paraconvexity(&p, alpha, false, &pl).unwrap();
            assert!(!s.holds || w.holds);
            assert!(s.worst_deficit >= w.worst_deficit);
        }
    }
}

#[test]
fn semicircle_strong_verdict_holds_above_profile() {
    let p = scene(Generator::Semicircle, 200);
    let pl = SamplingPlan::for_cloud(&p, 5);
    let strong = profile(&p, &pl, true).unwrap().max_alpha();
    let v = check_paraconvexity(&p, (strong + 0.02).min(0.999), true, &pl).unwrap();
    assert!(v.holds);
    let weak = nonconvexity_function(&p, &pl).unwrap().max_alpha();
    // strong value cannot exceed the two-ball bound
    assert!(strong <= phi(weak) + 1e-9, "strong {strong} weak {weak}");
}

#[test]
fn profiles_are_seed_deterministic() {
    let p = scene(Generator::Spiral { turns: 1.0 }, 120);
    let pl = plan(default_radii(p.diameter()));
    assert_eq!(
        nonconvexity_function(&p, &pl).unwrap(),
        nonconvexity_function(&p, &pl).unwrap()
    );
}

#[test]
fn hull_proximity_on_convex_and_single_members() {
    let p = scene(Generator::DiskSample, 600);
    let d = Ball::new(Point::xy(0.2, 0.1), 0.5).unwrap();
    let rep = verify_hull_proximity(&p, &d, 0.05, &plan(vec![1.0])).unwrap();
    assert!(!rep.is_vacuous());
    assert_eq!(rep.violations, 0);
    assert!(rep.worst_ratio <= phi(0.05) + PROXIMITY_TOL);

    // z at the center with its nearest point inside the ball
    let q = PointCloud::new(
        "q",
        vec![
            Point::xy(0.3, 0.0),
            Point::xy(-0.3, 0.0),
            Point::xy(3.0, 0.0),
        ],
    )
    .unwrap();
    let d = Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap();
    let rep = verify_hull_proximity(&q, &d, 0.3, &plan(vec![1.0])).unwrap();
    assert_eq!(rep.violations, 0);
    assert!(rep.near_center > 0);
    assert!(verify_hull_proximity(
        &q,
        &Ball::new(Point::xy(9.0, 9.0), 1.0).unwrap(),
        0.3,
        &plan(vec![1.0])
    )
    .is_err());
}

#[test]
fn random_proximity_suite_small() {
    let s = random_proximity_suite(500, 4);
    assert_eq!(s.configurations, 500);
    assert_eq!(s.violations, 0);
    assert!(s.near_center + s.near_boundary == 500);
    assert!(s.worst_excess <= PROXIMITY_TOL);
    assert_eq!(s, random_proximity_suite(500, 4));
}

fn arb_cloud() -> impl Strategy<Value = PointCloud> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2..30).prop_filter_map("duplicates", |v| {
        PointCloud::deduplicated(
            "p",
            v.into_iter().map(|(x, y)| Point::xy(x, y)).collect(),
            1e-9,
        )
        .ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enlarging_the_plan_never_lowers_estimates(
        p in arb_cloud(),
        seed in 0u64..1000,
        extra_centers in 0usize..40,
        extra_chains in 0usize..6,
        extra_steps in 0usize..10,
    ) {
        let small = SamplingPlan {
            ball_center_count: 8,
            point_centers: 8,
            radius_grid: default_radii(p.diameter().max(1e-3)),
            hull_sample_count: 3,
            refine_steps: 4,
            seed,
        };
        let big = SamplingPlan {
            ball_center_count: 8 + extra_centers,
            point_centers: 8 + extra_centers,
            hull_sample_count: 3 + extra_chains,
            refine_steps: 4 + extra_steps,
            ..small.clone()
        };
        for strong in [false, true] {
            let a = profile(&p, &small, strong).unwrap();
            let b = profile(&p, &big, strong).unwrap();
            for (x, y) in a.entries.iter().zip(&b.entries) {
                prop_assert!(y.alpha_hat >= x.alpha_hat, "strong={} r={} {} -> {}", strong, x.r, x.alpha_hat, y.alpha_hat);
            }
        }
    }

    #[test]
    fn profile_is_rigid_motion_invariant_on_the_two_point_set(
        angle in 0.0..6.3f64,
        tx in -5.0..5.0f64,
        ty in -5.0..5.0f64,
    ) {
        let m = Isometry::planar(angle, tx, ty, 1.0);
        let p = two_points().transformed(&m).unwrap();
        let prof = nonconvexity_function(&p, &plan(vec![1.05, 1.5])).unwrap();
        for e in &prof.entries {
            prop_assert!((e.alpha_hat - 1.0 / e.r).abs() < 1e-9);
        }
    }

    #[test]
    fn alpha_hat_stays_in_codomain(p in arb_cloud(), seed in 0u64..100) {
        let pl = plan(default_radii(p.diameter().max(1e-3)));
        let pl = SamplingPlan { seed, ..pl };
        for e in nonconvexity_function(&p, &pl).unwrap().entries {
            prop_assert!((0.0..2.0).contains(&e.alpha_hat));
        }
    }
}
