//! Float helpers over `libm` (no `std` float intrinsics in `core`).

/// Values below this are flushed to exactly zero.
pub(crate) const FLUSH_THRESHOLD: f64 = 1e-300;

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `x^(-exponent) / scale`, with the power formed as `exp(-exponent * ln x)`.
///
/// Returns the term and whether it fell below [`FLUSH_THRESHOLD`] and was
/// flushed to zero. The true value is always positive for positive inputs,
/// so a flushed term is an underflow, never a sign change.
#[inline]
pub(crate) fn power_term(x: f64, exponent: f64, scale: f64) -> (f64, bool) {
    let v = exp(-exponent * ln(x)) / scale;
    if v < FLUSH_THRESHOLD {
        (0.0, true)
    } else {
        (v, false)
    }
}
