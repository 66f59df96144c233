//! Floating-point evaluation of the erasure and depolarizing bounds.
//!
//! Both bounds are written as sums of non-negative terms, each evaluated in
//! the log domain (binomial coefficients through `lgamma`, rank counts as
//! exact big integers) and combined with a compensated log-sum-exp. Nothing
//! is ever subtracted, so there is no cancellation near 0 or 1.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::exact::depolarizing_counts;
use super::BoundResult;
use crate::error::{Error, Result};

const LN2: f64 = core::f64::consts::LN_2;

fn ln_choose(n: u64, k: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `x·ln(y)` with `0·ln(0) = 0`.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * libm::log(y)
    }
}

/// Natural log of a big integer, `-∞` for zero.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return libm::log(x.to_u64().expect("fits") as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits");
    libm::log(top as f64) + shift as f64 * LN2
}

/// `ln Σ exp(t)`, with Kahan summation of the rescaled terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &t in terms {
        let y = libm::exp(t - max) - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    max + libm::log(sum)
}

/// `ln(exp(a) + exp(b))`.
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `ln(1 - 2^{-k})` for `k > 0`.
fn ln_one_minus_pow2(k: f64) -> f64 {
    libm::log(-libm::expm1(-k * LN2))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(alloc::format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    Ok(())
}

fn check_m(n: u64, m: u64) -> Result<()> {
    if m > 2 * n {
        return Err(Error::InvalidParameter(alloc::format!(
            "m = {m} exceeds the maximum {}",
            2 * n
        )));
    }
    Ok(())
}

/// Erasure bounds for fixed `(n, δ)`, evaluated for any `m`.
#[derive(Clone, Debug)]
pub struct ErasureF64 {
    n: u64,
    /// `ln P(e erasures)` for `e = 0, …, n`.
    ln_pe: Vec<f64>,
}

impl ErasureF64 {
    pub fn new(n: u64, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let ln_pe = (0..=n)
            .map(|e| ln_choose(n, e) + xlny(e as f64, delta) + xlny((n - e) as f64, 1.0 - delta))
            .collect();
        Ok(Self { n, ln_pe })
    }

    /// Given `e` erasures, `J` is uniform on `[4^e]`: it exceeds `M = 2^m`
    /// with probability `1 - M/4^e` when `4^e > M`, and the expected
    /// `(J-1)/M` over `J ≤ M` is `(M-1)/(2·4^e)` or `(4^e-1)/(2M)`.
    pub fn bounds(&self, m: u64) -> Result<BoundResult<f64>> {
        check_m(self.n, m)?;
        let mut conv = Vec::new();
        let mut extra = Vec::new();
        let mf = m as f64;
        for (e, &lp) in self.ln_pe.iter().enumerate() {
            if lp == f64::NEG_INFINITY {
                continue;
            }
            let k = 2.0 * e as f64;
            if 2 * e as u64 > m {
                conv.push(lp + ln_one_minus_pow2(k - mf));
                if m > 0 {
                    extra.push(lp + mf * LN2 + ln_one_minus_pow2(mf) - LN2 - k * LN2);
                }
            } else if e > 0 {
                extra.push(lp + k * LN2 + ln_one_minus_pow2(k) - LN2 - mf * LN2);
            }
        }
        let ln_conv = log_sum_exp(&conv);
        let ln_ach = ln_add(ln_conv, log_sum_exp(&extra));
        Ok(BoundResult {
            n: self.n,
            m,
            p_conv: libm::exp(ln_conv),
            p_ach: libm::exp(ln_ach),
        })
    }
}

/// Depolarizing bounds for fixed `(n, δ)`, evaluated for any `m`.
///
/// Vectors of weight `i` each have probability `w_i = (δ/3)^i (1-δ)^{n-i}`
/// and take the ranks `N_{i-1}+1 ..= N_i`, where `N_i` counts vectors of
/// weight at most `i`.
#[derive(Clone, Debug)]
pub struct DepolarizingF64 {
    n: u64,
    counts: Vec<BigUint>,
    ln_w: Vec<f64>,
    /// `ln Σ_{k ≤ i} w_k (T(N_k) - T(N_{k-1}))` with `T(x) = x(x-1)/2`.
    prefix_inside: Vec<f64>,
    /// `ln Σ_{k ≥ i} w_k (N_k - N_{k-1})`.
    suffix_outside: Vec<f64>,
}

fn tri(x: &BigUint) -> BigUint {
    if x.is_zero() {
        BigUint::zero()
    } else {
        x * (x - 1u32) / 2u32
    }
}

impl DepolarizingF64 {
    pub fn new(n: u64, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let counts = depolarizing_counts(n);
        let ln_w: Vec<f64> = (0..=n)
            .map(|i| xlny(i as f64, delta / 3.0) + xlny((n - i) as f64, 1.0 - delta))
            .collect();
        let len = counts.len();
        let mut prefix_inside = Vec::with_capacity(len);
        let mut acc = f64::NEG_INFINITY;
        let mut prev = BigUint::zero();
        for (i, c) in counts.iter().enumerate() {
            let term = ln_w[i] + ln_biguint(&(tri(c) - tri(&prev)));
            acc = ln_add(acc, term);
            prefix_inside.push(acc);
            prev = c.clone();
        }
        let mut suffix_outside = alloc::vec![f64::NEG_INFINITY; len + 1];
        for i in (0..len).rev() {
            let size = ln_choose(n, i as u64) + i as f64 * libm::log(3.0);
            suffix_outside[i] = ln_add(suffix_outside[i + 1], ln_w[i] + size);
        }
        Ok(Self {
            n,
            counts,
            ln_w,
            prefix_inside,
            suffix_outside,
        })
    }

    pub fn bounds(&self, m: u64) -> Result<BoundResult<f64>> {
        check_m(self.n, m)?;
        let big_m = BigUint::from(1u32) << m;
        let ln_m = m as f64 * LN2;
        // Last weight class that fits entirely within the first M ranks.
        let full = self.counts.partition_point(|c| *c <= big_m) - 1;
        let mut ln_conv = self.suffix_outside.get(full + 2).copied().unwrap_or(f64::NEG_INFINITY);
        let mut ln_extra = self.prefix_inside[full] - ln_m;
        if full + 1 < self.counts.len() {
            let i = full + 1;
            let lo = &self.counts[full];
            let hi = &self.counts[i];
            ln_conv = ln_add(ln_conv, self.ln_w[i] + ln_biguint(&(hi - &big_m)));
            ln_extra = ln_add(ln_extra, self.ln_w[i] + ln_biguint(&(tri(&big_m) - tri(lo))) - ln_m);
        }
        Ok(BoundResult {
            n: self.n,
            m,
            p_conv: libm::exp(ln_conv),
            p_ach: libm::exp(ln_add(ln_conv, ln_extra)),
        })
    }
}

/// `log₂ C(n, k)` via `lgamma`.
pub fn log2_choose(n: u64, k: u64) -> f64 {
    ln_choose(n, k) / LN2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::exact::{depolarizing_bounds, erasure_bounds};
    use crate::rational::{parse_rational, to_f64};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300) || (a == 0.0 && b == 0.0)
    }

    #[test]
    fn log_sum_exp_basics() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[0.0, 0.0]) - LN2).abs() < 1e-15);
        assert!((ln_biguint(&(BigUint::from(1u32) << 200u32)) - 200.0 * LN2).abs() < 1e-12);
    }

    #[test]
    fn float_matches_exact_on_a_grid() {
        for n in [1u64, 2, 5, 17, 64] {
            for ds in ["1/10", "1/4", "1/2", "0.03"] {
                let d = parse_rational(ds).unwrap();
                let df = to_f64(&d);
                let er = ErasureF64::new(n, df).unwrap();
                let dp = DepolarizingF64::new(n, df).unwrap();
                for m in 0..=2 * n {
                    let ex = erasure_bounds(n, &d, m).unwrap();
                    let fl = er.bounds(m).unwrap();
                    assert!(close(fl.p_conv, to_f64(&ex.p_conv), 1e-10), "erasure n={n} m={m} {ds}");
                    assert!(close(fl.p_ach, to_f64(&ex.p_ach), 1e-10), "erasure n={n} m={m} {ds}");
                    let ex = depolarizing_bounds(n, &d, m).unwrap();
                    let fl = dp.bounds(m).unwrap();
                    assert!(close(fl.p_conv, to_f64(&ex.p_conv), 1e-10), "depol n={n} m={m} {ds}");
                    assert!(close(fl.p_ach, to_f64(&ex.p_ach), 1e-10), "depol n={n} m={m} {ds}");
                }
            }
        }
    }

    #[test]
    fn degenerate_noise() {
        let dp = DepolarizingF64::new(4, 0.0).unwrap();
        let er = ErasureF64::new(4, 0.0).unwrap();
        for m in 0..=8 {
            assert_eq!(dp.bounds(m).unwrap().p_ach, 0.0);
            assert_eq!(er.bounds(m).unwrap().p_ach, 0.0);
        }
        let dp = DepolarizingF64::new(3, 1.0).unwrap();
        let ex = depolarizing_bounds(3, &parse_rational("1").unwrap(), 2).unwrap();
        assert!(close(dp.bounds(2).unwrap().p_ach, to_f64(&ex.p_ach), 1e-12));
    }
}
