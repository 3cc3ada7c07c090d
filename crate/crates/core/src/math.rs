//! Thin wrappers over `libm` so the numerics read the same with or without std.

#[inline]
pub(crate) fn powi(x: f64, n: i64) -> f64 {
    libm::pow(x, n as f64)
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
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
