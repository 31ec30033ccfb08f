//! Float helpers routed through `libm` so results are identical with and
//! without `std`.

pub(crate) use core::f64::consts::LN_2;

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `log2(1 + x)` for `x >= 0`.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    libm::log1p(x) / LN_2
}
