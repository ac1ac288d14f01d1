//! Standard normal PDF/CDF helpers used throughout the entropy computations.
//!
//! CDF values are computed through the complementary error function so that
//! tail masses keep full relative accuracy, and interval masses pick the
//! complementary branch when both endpoints lie in the same tail.

/// ln(sqrt(2*pi*e)), the differential entropy of a unit Gaussian.
pub const LN_SQRT_2PI_E: f64 = 1.418_938_533_204_672_7;

/// sqrt(2*pi)
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// `x * pdf(x)` with the limit 0 at both infinities.
#[inline]
pub fn x_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        x * pdf(x)
    }
}

/// Standard normal CDF.
#[inline]
pub fn cdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function `1 - cdf(x)`, accurate in the upper tail.
#[inline]
pub fn ccdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal quantile function.
///
/// Bisection bracket followed by Newton polish on [`cdf`]; the quantile sits
/// on cold paths only, so the extra CDF evaluations are irrelevant.
pub fn quantile(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "quantile needs p in [0,1]");
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        return -quantile(1.0 - p);
    }
    let (mut lo, mut hi) = (-40.0f64, 0.0f64);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = pdf(x);
        if d > 0.0 {
            x -= (cdf(x) - p) / d;
        }
    }
    x
}

/// `P(lo < X <= hi)` for a standard normal, with `lo = -inf` allowed.
///
/// When both bounds sit in the same tail the difference of CDFs cancels
/// catastrophically, so the computation switches to the survival function.
#[inline]
pub fn mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo >= 0.0 {
        (ccdf(lo) - ccdf(hi)).max(0.0)
    } else {
        (cdf(hi) - cdf(lo)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Reference values computed with 30-digit arithmetic.
    const PHI_03: f64 = 0.617_911_422_188_952_637_3;
    const PHI_1: f64 = 0.841_344_746_068_542_948_6;
    const PHI_2: f64 = 0.977_249_868_051_820_792_8;
    const PHI_M5: f64 = 2.866_515_718_791_939_1e-7;

    #[test]
    fn cdf_matches_reference_to_1e12() {
        assert_abs_diff_eq!(cdf(0.3), PHI_03, epsilon = 1e-12);
        assert_abs_diff_eq!(cdf(1.0), PHI_1, epsilon = 1e-12);
        assert_abs_diff_eq!(cdf(2.0), PHI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(cdf(-5.0), PHI_M5, epsilon = 1e-12);
        assert_abs_diff_eq!(cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(ccdf(5.0), PHI_M5, epsilon = 1e-18);
    }

    #[test]
    fn tail_mass_avoids_cancellation() {
        // P(8 < X <= 9) computed naively as cdf(9)-cdf(8) would be 0.
        let m = mass(8.0, 9.0);
        let expected = ccdf(8.0) - ccdf(9.0);
        assert!(m > 0.0);
        assert_abs_diff_eq!(m, expected, epsilon = 1e-30);
        // Symmetric lower-tail case goes through the CDF branch.
        assert_abs_diff_eq!(mass(-9.0, -8.0), m, epsilon = m * 1e-10);
    }

    #[test]
    fn mass_handles_infinite_bounds() {
        assert_abs_diff_eq!(mass(f64::NEG_INFINITY, f64::INFINITY), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mass(f64::NEG_INFINITY, 0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(mass(0.0, f64::INFINITY), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn quantile_round_trips() {
        assert_abs_diff_eq!(quantile(0.75), 0.674_489_750_196_081_7, epsilon = 1e-12);
        for &p in &[1e-6, 0.1, 0.5, 0.5625, 0.9, 1.0 - 1e-6] {
            assert_abs_diff_eq!(cdf(quantile(p)), p, epsilon = 1e-12);
        }
    }

    #[test]
    fn x_pdf_limits() {
        assert_eq!(x_pdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(x_pdf(f64::INFINITY), 0.0);
        assert_abs_diff_eq!(x_pdf(1.0), pdf(1.0), epsilon = 1e-15);
    }
}
