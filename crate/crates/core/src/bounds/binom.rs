//! Exact binomial CDF and its piecewise-linear extension.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::check_probability;

/// `C(n, 0), …, C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Numerators `C(n,k) a^k (b-a)^{n-k}` of the binomial pmf with `p = a/b`,
/// over the common denominator `b^n`.
fn pmf_numerators(n: u64, p: &BigRational) -> (Vec<BigInt>, BigInt) {
    let a = p.numer().clone();
    let b = p.denom().clone();
    let q = &b - &a;
    let row = binomial_row(n);
    let mut q_pows = Vec::with_capacity(n as usize + 1);
    let mut x = BigInt::one();
    for _ in 0..=n {
        q_pows.push(x.clone());
        x *= &q;
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut a_pow = BigInt::one();
    for k in 0..=n as usize {
        out.push(BigInt::from(row[k].clone()) * &a_pow * &q_pows[n as usize - k]);
        a_pow *= &a;
    }
    (out, num_traits::pow(b, n as usize))
}

/// The pmf `P(X = k)` of `Binomial(n, p)` for `k = 0, …, n`.
pub fn binom_pmf(n: u64, p: &BigRational) -> Vec<BigRational> {
    let (nums, den) = pmf_numerators(n, p);
    nums.into_iter()
        .map(|x| BigRational::new(x, den.clone()))
        .collect()
}

/// `F(n, p, i) = P(Binomial(n, p) ≤ i)`, with `F = 0` for `i < 0` and `F = 1`
/// for `i ≥ n`.
pub fn binom_cdf(n: u64, p: &BigRational, i: i64) -> BigRational {
    if i < 0 {
        return BigRational::zero();
    }
    if i as u64 >= n {
        return BigRational::one();
    }
    let (nums, den) = pmf_numerators(n, p);
    let sum: BigInt = nums[..=i as usize].iter().sum();
    BigRational::new(sum, den)
}

/// All knots `F(n, p, -1), F(n, p, 0), …, F(n, p, n)` (the first is 0).
pub fn binom_cdf_knots(n: u64, p: &BigRational) -> Vec<BigRational> {
    let (nums, den) = pmf_numerators(n, p);
    let mut out = Vec::with_capacity(n as usize + 2);
    out.push(BigRational::zero());
    let mut acc = BigInt::zero();
    for x in nums {
        acc += x;
        out.push(BigRational::new(acc.clone(), den.clone()));
    }
    out
}

/// Splits `x` into `(⌊x⌋, x - ⌊x⌋)`.
pub fn floor_frac(x: &BigRational) -> (BigInt, BigRational) {
    let fl = x.numer().div_floor(x.denom());
    let frac = x - BigRational::from_integer(fl.clone());
    (fl, frac)
}

/// The piecewise-linear extension of `F(n, p, ·)` through `(-1, 0)`,
/// `(0, F(n,p,0))`, …, `(n, 1)`; constant outside `[-1, n]`.
pub fn binom_cdf_ext(n: u64, p: &BigRational, x: &BigRational) -> BigRational {
    let (fl, frac) = floor_frac(x);
    let Some(i) = fl.to_i64() else {
        return if fl.is_negative() {
            BigRational::zero()
        } else {
            BigRational::one()
        };
    };
    if i < -1 {
        return BigRational::zero();
    }
    if i >= n as i64 {
        return BigRational::one();
    }
    let lo = binom_cdf(n, p, i);
    if frac.is_zero() {
        return lo;
    }
    let hi = binom_cdf(n, p, i + 1);
    &lo + (hi - &lo) * frac
}

/// Inverse of [`binom_cdf_ext`] on `[0, 1] → [-1, n]`. Needs `0 < p < 1` so
/// that the extension is strictly increasing.
pub fn binom_cdf_inv_pl(n: u64, p: &BigRational, y: &BigRational) -> Result<BigRational> {
    check_probability(y, "y")?;
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::InvalidParameter(
            "inverse binomial CDF needs 0 < p < 1".into(),
        ));
    }
    let knots = binom_cdf_knots(n, p);
    Ok(inverse_from_knots(&knots, y))
}

/// Inverse of the piecewise-linear function with values `knots[k]` at
/// `x = k - 1`.
pub(crate) fn inverse_from_knots(knots: &[BigRational], y: &BigRational) -> BigRational {
    if y.is_zero() {
        return BigRational::from_integer(BigInt::from(-1));
    }
    // First knot index with knots[k] >= y; k ≥ 1 since y > 0.
    let k = knots.partition_point(|f| f < y);
    let (lo, hi) = (&knots[k - 1], &knots[k]);
    let base = BigRational::from_integer(BigInt::from(k as i64 - 2));
    base + (y - lo) / (hi - lo)
}
