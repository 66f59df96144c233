//! Standard normal CDF and its inverse.

use crate::error::{Error, Result};

const SQRT_2: f64 = core::f64::consts::SQRT_2;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// `Φ⁻¹(y)` for `0 < y < 1`.
///
/// Acklam's rational approximation (relative error below `1.15e-9`) followed
/// by one Halley step against the `erfc`-based `Φ`.
pub fn normal_cdf_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "normal quantile needs 0 < y < 1, got {y}"
        )));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if y < LOW {
        tail(libm::sqrt(-2.0 * libm::log(y)))
    } else if y <= 1.0 - LOW {
        let q = y - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(libm::sqrt(-2.0 * libm::log1p(-y)))
    };

    let e = normal_cdf(x) - y;
    let u = e * SQRT_2PI * libm::exp(0.5 * x * x);
    Ok(x - u / (1.0 + 0.5 * x * u))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on `Φ`, independent of the rational approximation.
    fn bisect(y: f64) -> f64 {
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn known_values() {
        assert_eq!(normal_cdf_inv(0.5).unwrap(), 0.0);
        assert!((normal_cdf_inv(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((normal_cdf_inv(0.05).unwrap() + 1.644_853_626_951_472_2).abs() < 1e-12);
    }

    #[test]
    fn inverse_property() {
        for y in [0.01, 0.1, 0.5, 0.9] {
            assert!((normal_cdf(normal_cdf_inv(y).unwrap()) - y).abs() < 1e-9);
        }
        for k in 1..1000 {
            let y = k as f64 / 1000.0;
            assert!((normal_cdf_inv(y).unwrap() - bisect(y)).abs() < 1e-9, "y={y}");
        }
        for y in [1e-12, 1e-6, 1.0 - 1e-9] {
            assert!((normal_cdf_inv(y).unwrap() - bisect(y)).abs() < 1e-8, "y={y}");
        }
    }

    #[test]
    fn rejects_boundaries() {
        assert!(normal_cdf_inv(0.0).is_err());
        assert!(normal_cdf_inv(1.0).is_err());
        assert!(normal_cdf_inv(f64::NAN).is_err());
    }
}
