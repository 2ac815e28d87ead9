// Explicit libm calls: the crate has no std float methods, and going through
// one implementation keeps results identical across targets.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `x^k` for the common integral exponents, `powf` otherwise.
#[inline]
pub(crate) fn pow_kappa(x: f64, kappa: f64) -> f64 {
    if kappa == 1.0 {
        x
    } else if kappa == 2.0 {
        x * x
    } else if kappa == 4.0 {
        let s = x * x;
        s * s
    } else {
        powf(x, kappa)
    }
}
