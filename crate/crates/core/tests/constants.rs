use paraconvex_core::paraconvexity::{
    gamma_sequence, hilbert_constant_floor, phi, phi_and_bounds, threshold_root,
};

// The cubic root is the reciprocal of the tribonacci constant.
fn tribonacci_reciprocal() -> f64 {
    let s = 33f64.sqrt();
    let t = (1.0 + (19.0 + 3.0 * s).cbrt() + (19.0 - 3.0 * s).cbrt()) / 3.0;
    1.0 / t
}

#[test]
fn phi_is_the_half_chord_of_the_unit_circle() {
    for i in 0..=100 {
        let a = i as f64 / 100.0;
        let chord = (1.0 - (1.0 - a) * (1.0 - a)).sqrt();
        assert!((phi(a) - chord).abs() < 1e-12, "alpha {a}");
    }
    assert_eq!(phi(0.0), 0.0);
    assert_eq!(phi(1.0), 1.0);
}

#[test]
fn bounds_on_the_tenth_grid() {
    for i in 0..10 {
        let a = i as f64 / 10.0;
        let b = phi_and_bounds(a).unwrap();
        let banach: f64 = (1..4000).map(|k| a.powi(k)).sum();
        assert!((b.banach - banach).abs() < 1e-12, "alpha {a}");
        assert!((b.hilbert - a * hilbert_constant_floor(a)).abs() < 1e-12);
        assert!((b.hilbert - (b.banach - a * a / (1.0 + a))).abs() < 1e-12);
        if a > 0.0 {
            assert!(b.hilbert < b.banach);
        } else {
            assert_eq!(b.hilbert, b.banach);
        }
    }
    assert!(phi_and_bounds(1.0).is_err());
    assert!(phi_and_bounds(-0.01).is_err());
}

#[test]
fn threshold_matches_the_tribonacci_form() {
    let a = threshold_root();
    let oracle = tribonacci_reciprocal();
    assert!((a - oracle).abs() < 1e-14, "{a} vs {oracle}");
    assert!((a + a * a + a * a * a - 1.0).abs() <= 1e-12);
    assert!(a > 0.5436 && a < 0.5438);
}

#[test]
fn gamma_recursion_reaches_its_fixed_point() {
    for g in [0.3, 0.5, 0.9] {
        let s = gamma_sequence(g, 500).unwrap();
        assert_eq!(s.terms.len(), 500);
        assert_eq!(s.get(1), g);
        let settled = s.settled_at();
        assert!(settled > 2 && settled <= 500);
        for n in 1..settled {
            assert!(s.get(n + 1) < s.get(n), "gamma {g} n {n}");
        }
        // the fixed point solves x = g·phi(x) with x > 0
        let fp = s.fixed_point;
        assert!((fp - g * phi(fp)).abs() < 1e-15);
        assert!(
            (s.get(500) - fp).abs() < 1e-9,
            "gamma {g}: {} vs {fp}",
            s.get(500)
        );
        assert!(s.terms.iter().all(|&t| t >= fp - 1e-15));
    }
    assert!(gamma_sequence(0.0, 5).is_err());
    assert!(gamma_sequence(1.0, 5).is_err());
    assert!(gamma_sequence(0.5, 0).is_err());
}
