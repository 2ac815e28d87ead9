//! Closed-form constants and the contraction recursion of the Hilbert-space
//! selection scheme.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;

/// `φ(α) = √(2α − α²)`, the distance bound inside a ball after one
/// paraconvexity step. Defined on `[0, 1]`.
pub fn phi(alpha: f64) -> f64 {
    fmath::sqrt((2.0 * alpha - alpha * alpha).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub phi: f64,
    /// Paraconvexity level of the retraction set in a Banach space.
    pub banach: f64,
    /// The same level in a Hilbert space.
    pub hilbert: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must lie in [0, 1)",
        })
    }
}

pub fn phi_and_bounds(alpha: f64) -> Result<Bounds> {
    check_alpha(alpha)?;
    let a2 = alpha * alpha;
    Ok(Bounds {
        phi: phi(alpha),
        banach: alpha / (1.0 - alpha),
        hilbert: alpha * (1.0 + a2) / (1.0 - a2),
    })
}

/// Lower end of the admissible constants in the Hilbert-space repair:
/// any `C > (1 + α²)/(1 − α²)` works.
pub fn hilbert_constant_floor(alpha: f64) -> f64 {
    (1.0 + alpha * alpha) / (1.0 - alpha * alpha)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSequence {
    /// `γ_1, …, γ_n`.
    pub terms: Vec<f64>,
    /// `2γ²/(1 + γ²)`.
    pub fixed_point: f64,
}

impl GammaSequence {
    /// `γ_n` with 1-based `n`.
    pub fn get(&self, n: usize) -> f64 {
        self.terms[n - 1]
    }

    /// Index of the last strict decrease. Past it the terms sit at the
    /// floating-point fixed point of the recursion.
    pub fn settled_at(&self) -> usize {
        let mut last = 1;
        for (i, w) in self.terms.windows(2).enumerate() {
            if w[1] < w[0] {
                last = i + 2;
            }
        }
        last
    }
}

/// `γ_1 = γ`, `γ_{n+1} = γ·φ(γ_n)`.
pub fn gamma_sequence(gamma: f64, n_max: usize) -> Result<GammaSequence> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "must lie in (0, 1)",
        });
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: "must be positive",
        });
    }
    let mut terms = Vec::with_capacity(n_max);
    let mut g = gamma;
    terms.push(g);
    for _ in 1..n_max {
        g = gamma * phi(g);
        terms.push(g);
    }
    Ok(GammaSequence {
        terms,
        fixed_point: 2.0 * gamma * gamma / (1.0 + gamma * gamma),
    })
}

/// The real root of `α + α² + α³ = 1`, by bisection on `[0, 1]`.
pub fn threshold_root() -> f64 {
    let f = |a: f64| a + a * a + a * a * a - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if -f(lo) <= f(hi) {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_examples() {
        assert_eq!(
            phi_and_bounds(0.0).unwrap(),
            Bounds {
                phi: 0.0,
                banach: 0.0,
                hilbert: 0.0
            }
        );
        let b = phi_and_bounds(0.5).unwrap();
        assert!((b.phi - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((b.banach - 1.0).abs() < 1e-15);
        assert!((b.hilbert - 0.5 * 1.25 / 0.75).abs() < 1e-15);
        assert!((b.hilbert - 0.833_33).abs() < 1e-5);
        let b = phi_and_bounds(1.0 / 3.0).unwrap();
        assert!((b.phi - 5f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((b.phi - 0.745_36).abs() < 1e-5);
        assert!((b.banach - 0.5).abs() < 1e-15);
        assert!((b.hilbert - 5.0 / 12.0).abs() < 1e-15);
        assert!(phi_and_bounds(1.0).is_err());
        assert!(phi_and_bounds(-0.1).is_err());
    }

    #[test]
    fn gamma_examples() {
        let s = gamma_sequence(0.5, 2).unwrap();
        assert_eq!(s.fixed_point, 0.4);
        assert!((s.get(2) - 0.433_01).abs() < 1e-5);
        let s = gamma_sequence(0.9, 200).unwrap();
        assert!((s.get(200) - 2.0 * 0.81 / 1.81).abs() < 1e-9);
        assert!((s.fixed_point - 0.895_03).abs() < 1e-5);
        assert!(gamma_sequence(1e-8, 3).unwrap().fixed_point < 1e-15);
        assert!(gamma_sequence(1.0, 3).is_err());
        assert!(gamma_sequence(0.0, 3).is_err());
    }

    #[test]
    fn threshold_examples() {
        let a = threshold_root();
        assert!((a + a * a + a * a * a - 1.0).abs() <= 1e-12);
        assert!(a > 0.543_689 && a < 0.543_690);
        assert!(a > 0.5);
    }
}
