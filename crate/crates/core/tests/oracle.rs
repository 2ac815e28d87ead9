use paraconvex_core::oracle::brute_force_alpha_oracle;
use paraconvex_core::paraconvexity::{nonconvexity_function, SamplingPlan};
use paraconvex_core::scenes::{generate_scene, Generator, Scene};
use paraconvex_core::{Point, PointCloud};
use proptest::prelude::*;

/// Two points at distance `d`: a ball of radius `r` holds both only when
/// `r > d/2`, and then the midpoint is `d/2` from both.
fn two_point_alpha(d: f64, r: f64) -> f64 {
    if r > d / 2.0 {
        d / (2.0 * r)
    } else {
        0.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_points_match_the_closed_form(d in 0.1f64..3.0, angle in 0.0f64..std::f64::consts::TAU, ox in -5.0f64..5.0, oy in -5.0f64..5.0) {
        let a = Point::xy(ox, oy);
        let b = a + Point::xy(angle.cos(), angle.sin()) * d;
        let cloud = PointCloud::new("pair", vec![a, b]).unwrap();
        let radii = vec![0.3 * d, 0.55 * d, 0.8 * d, 1.5 * d, 4.0 * d];
        let plan = SamplingPlan { radius_grid: radii.clone(), ..SamplingPlan::for_cloud(&cloud, 1) };
        let prof = nonconvexity_function(&cloud, &plan).unwrap();
        for (e, r) in prof.entries.iter().zip(&radii) {
            prop_assert!((e.alpha_hat - two_point_alpha(d, *r)).abs() <= 1e-6, "r {} got {}", r, e.alpha_hat);
        }
    }
}

fn compare(scene: Scene, tol: f64) {
    let cloud = generate_scene(&scene).unwrap();
    let plan = SamplingPlan::for_cloud(&cloud, 1);
    let prof = nonconvexity_function(&cloud, &plan).unwrap();
    let pick = [4, 12, 20];
    for &i in &pick {
        let e = &prof.entries[i];
        let o = brute_force_alpha_oracle(&cloud, e.r, e.r / 20.0).unwrap();
        assert!(
            (e.alpha_hat - o.alpha).abs() <= tol,
            "{} r {}: estimate {} oracle {}",
            scene.name,
            e.r,
            e.alpha_hat,
            o.alpha
        );
    }
}

#[test]
fn estimator_agrees_with_oracle_on_semicircle() {
    compare(Scene::new("semicircle", Generator::Semicircle, 200), 0.05);
}

#[test]
fn estimator_agrees_with_oracle_on_sin_reciprocal() {
    compare(
        Scene::new(
            "sin",
            Generator::SinReciprocal {
                x_min: 0.25,
                x_max: 1.0,
            },
            300,
        ),
        0.05,
    );
}

#[test]
fn estimator_agrees_with_oracle_on_spiral() {
    compare(
        Scene::new("spiral", Generator::Spiral { turns: 1.5 }, 300),
        0.05,
    );
}

#[test]
fn oracle_on_a_square_corner_set() {
    // four corners of a unit square; a ball holding all four has the center
    // of the square at distance √2/2
    let pts = vec![
        Point::xy(0.0, 0.0),
        Point::xy(1.0, 0.0),
        Point::xy(1.0, 1.0),
        Point::xy(0.0, 1.0),
    ];
    let cloud = PointCloud::new("square", pts).unwrap();
    let r = 2.0;
    let o = brute_force_alpha_oracle(&cloud, r, r / 40.0).unwrap();
    assert!((o.alpha - 0.5f64.sqrt() / r).abs() < 1e-9, "{}", o.alpha);
    assert!(brute_force_alpha_oracle(&cloud, r, r / 10.0).is_err());
}
