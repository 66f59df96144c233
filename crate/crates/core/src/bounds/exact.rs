//! Closed-form bounds for the erasure and depolarizing channels in exact
//! rational arithmetic.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::binom::{binom_cdf, binom_cdf_ext, binomial_row, floor_frac, inverse_from_knots};
use super::BoundResult;
use crate::error::{Error, Result};
use crate::rational::{check_probability, from_biguint, pow2, powu, ratio};

fn check_m(m: u64, max: u64) -> Result<()> {
    if m > max {
        return Err(Error::InvalidParameter(alloc::format!(
            "m = {m} exceeds the maximum {max}"
        )));
    }
    Ok(())
}

/// Bounds for `n` independent erasure channels with erasure probability
/// `delta` and `m` syndrome bits (`m ≤ 2n`).
pub fn erasure_bounds(n: u64, delta: &BigRational, m: u64) -> Result<BoundResult<BigRational>> {
    check_probability(delta, "delta")?;
    check_m(m, 2 * n)?;
    let one = BigRational::one();
    let two_m = pow2(m as i64);
    let h = (m / 2) as i64;
    let top = n as i64 - h - 1;
    let q = (ratio(4, 1) - ratio(3, 1) * delta) / ratio(4, 1);
    let f1 = binom_cdf(n, &(&one - delta), top);
    let f2 = binom_cdf(n, &((ratio(4, 1) - ratio(4, 1) * delta) / (ratio(4, 1) - ratio(3, 1) * delta)), top);
    let qn = powu(&q, n);
    let p_conv = &f1 - &two_m * &qn * &f2;

    let inv = (&two_m * ratio(2, 1)).recip();
    let spread = ratio(1, 1) + ratio(3, 1) * delta;
    let f3 = binom_cdf(n, &(ratio(4, 1) * delta / &spread), h);
    let p_ach = (&one + &inv) * &f1 - &inv - (&two_m + &one) / ratio(2, 1) * &qn * &f2
        + powu(&spread, n) * &inv * f3;
    Ok(BoundResult {
        n,
        m,
        p_conv,
        p_ach,
    })
}

/// `N_i = |{u : |u| ≤ i}| = Σ_{k ≤ i} C(n,k) 3^k` for `i = 0, …, n`.
pub(crate) fn depolarizing_counts(n: u64) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    let mut three = BigUint::one();
    binomial_row(n)
        .into_iter()
        .map(|c| {
            acc += c * &three;
            three *= 3u32;
            acc.clone()
        })
        .collect()
}

/// `ℓ = F⁻¹(n, 3/4, j/4^n)` from the cumulative counts.
fn ell(counts: &[BigUint], n: u64, j: &BigUint) -> BigRational {
    let total = BigUint::one() << (2 * n);
    let mut knots = Vec::with_capacity(counts.len() + 1);
    knots.push(BigRational::zero());
    knots.extend(counts.iter().map(|c| BigRational::new(c.clone().into(), total.clone().into())));
    inverse_from_knots(&knots, &BigRational::new(j.clone().into(), total.into()))
}

/// Bounds for `n` independent depolarizing channels with parameter `delta`
/// and `m` syndrome bits (`m ≤ 2n`).
pub fn depolarizing_bounds(n: u64, delta: &BigRational, m: u64) -> Result<BoundResult<BigRational>> {
    check_probability(delta, "delta")?;
    check_m(m, 2 * n)?;
    let one = BigRational::one();
    let counts = depolarizing_counts(n);
    let two_m_int = BigUint::one() << m;
    let l = ell(&counts, n, &two_m_int);
    let p_conv = binom_cdf_ext(n, &(&one - delta), &(BigRational::from_integer((n as i64 - 1).into()) - &l));

    if *delta == one {
        // The closed form divides by 1 - δ; sum over weight classes instead.
        let p_ach = block_sum_ach(n, delta, m, &counts);
        return Ok(BoundResult {
            n,
            m,
            p_conv,
            p_ach,
        });
    }

    let two_m = pow2(m as i64);
    let inv = (&two_m * ratio(2, 1)).recip();
    let fl = floor_frac(&l).0.to_u64().expect("ell is in [0, n]");
    let r = delta / (ratio(3, 1) - ratio(3, 1) * delta);
    let four_n = BigRational::from_integer(BigInt::one() << (2 * n));
    let mut sum = BigRational::zero();
    let mut r_pow = BigRational::one();
    for c in counts.iter().take(fl as usize + 1) {
        let f = from_biguint(c.clone()) / &four_n;
        sum += &r_pow * &f * &f;
        r_pow *= &r;
    }
    let p_ach = (&one + &inv) * &p_conv - &inv
        + &two_m / ratio(2, 1) * powu(&(&one - delta), n) * powu(&r, fl + 1)
        + powu(&(ratio(16, 1) - ratio(16, 1) * delta), n) * &inv
            * ((ratio(3, 1) - ratio(4, 1) * delta) / (ratio(3, 1) - ratio(3, 1) * delta))
            * sum;
    Ok(BoundResult {
        n,
        m,
        p_conv,
        p_ach,
    })
}

/// `P_ach` by summing over weight classes: each vector of weight `i` has
/// probability `w_i = (δ/3)^i (1-δ)^{n-i}` and occupies the ranks
/// `N_{i-1}+1 ..= N_i`.
fn block_sum_ach(n: u64, delta: &BigRational, m: u64, counts: &[BigUint]) -> BigRational {
    let one = BigRational::one();
    let big_m = BigUint::one() << m;
    let third = delta / ratio(3, 1);
    let mut total = BigRational::zero();
    let mut prev = BigUint::zero();
    // Σ_{t < x} t.
    let tri = |x: &BigUint| -> BigUint {
        if x.is_zero() {
            BigUint::zero()
        } else {
            x * (x - 1u32) / 2u32
        }
    };
    for (i, c) in counts.iter().enumerate() {
        let w = powu(&third, i as u64) * powu(&(&one - delta), n - i as u64);
        if !w.is_zero() {
            let inside_hi = c.clone().min(big_m.clone());
            let below = if inside_hi > prev {
                tri(&inside_hi) - tri(&prev)
            } else {
                BigUint::zero()
            };
            let above = if *c > big_m {
                c - prev.clone().max(big_m.clone())
            } else {
                BigUint::zero()
            };
            total += &w
                * (from_biguint(above) + from_biguint(below) / from_biguint(big_m.clone()));
        }
        prev = c.clone();
    }
    total
}

/// `P(J ≤ j) = F(n, δ, F⁻¹(n, 3/4, j/4^n))` for the depolarizing channel.
pub fn j_cdf_depolarizing(n: u64, delta: &BigRational, j: &BigUint) -> Result<BigRational> {
    check_probability(delta, "delta")?;
    let total = BigUint::one() << (2 * n);
    if *j > total {
        return Err(Error::InvalidParameter("j exceeds 4^n".into()));
    }
    let counts = depolarizing_counts(n);
    Ok(binom_cdf_ext(n, delta, &ell(&counts, n, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> BigRational {
        ratio(a, b)
    }

    #[test]
    fn erasure_spot_values() {
        for d in [r(1, 10), r(1, 4), r(1, 2), r(1, 1)] {
            let b = erasure_bounds(1, &d, 0).unwrap();
            assert_eq!(b.p_conv, &d * r(3, 4));
        }
        for m in 0..=6 {
            let b = erasure_bounds(3, &r(0, 1), m).unwrap();
            assert!(b.p_conv.is_zero() && b.p_ach.is_zero());
        }
    }

    #[test]
    fn depolarizing_spot_values() {
        for d in [r(1, 10), r(3, 10), r(1, 2), r(1, 1)] {
            let b = depolarizing_bounds(1, &d, 1).unwrap();
            assert_eq!(b.p_conv, &d * r(2, 3));
        }
        for m in 0..=6 {
            let b = depolarizing_bounds(3, &r(0, 1), m).unwrap();
            assert!(b.p_conv.is_zero() && b.p_ach.is_zero());
        }
    }

    #[test]
    fn closed_form_matches_block_sum() {
        for n in 1..=5 {
            let counts = depolarizing_counts(n);
            for m in 0..=2 * n {
                for d in [r(1, 10), r(1, 3), r(3, 4), r(9, 10)] {
                    let b = depolarizing_bounds(n, &d, m).unwrap();
                    assert_eq!(b.p_ach, block_sum_ach(n, &d, m, &counts), "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn j_cdf_examples() {
        assert_eq!(
            j_cdf_depolarizing(1, &r(3, 10), &BigUint::from(1u32)).unwrap(),
            r(7, 10)
        );
        for n in 1..=4 {
            let top = BigUint::one() << (2 * n);
            assert_eq!(j_cdf_depolarizing(n, &r(1, 5), &top).unwrap(), r(1, 1));
            let mut prev = BigRational::zero();
            let mut j = BigUint::zero();
            while j <= top {
                let f = j_cdf_depolarizing(n, &r(1, 5), &j).unwrap();
                assert!(f >= prev);
                prev = f;
                j += 1u32;
            }
        }
    }
}
