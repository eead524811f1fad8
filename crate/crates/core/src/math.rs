//! Scalar helpers shared by the environments and policies.

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// Binary KL divergence `d(p, q)` with the convention `0 ln 0 = 0`.
///
/// `q` must lie strictly inside (0, 1).
pub fn binary_kl(p: f64, q: f64) -> f64 {
    let mut d = 0.0;
    if p > 0.0 {
        d += p * libm::log(p / q);
    }
    if p < 1.0 {
        d += (1.0 - p) * libm::log((1.0 - p) / (1.0 - q));
    }
    d.max(0.0)
}
