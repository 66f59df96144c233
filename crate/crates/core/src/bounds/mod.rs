//! Finite-blocklength bounds for guessing a Pauli error from its syndrome.
//!
//! Let `J` be the rank of the realized error among all errors ordered by
//! decreasing likelihood given the side information. With `m` syndrome bits
//! produced by a uniformly random symplectic matrix, every decoder fails with
//! probability at least `P_conv = P(J > 2^m)`, and the decoder that tries
//! candidates in likelihood order fails with probability at most
//! `P_ach = P_conv + E[1{J ≤ 2^m} (J - 1)] / 2^m`.

mod binom;
mod dist;
mod exact;
mod float;
mod normal;

pub use binom::{binom_cdf, binom_cdf_ext, binom_cdf_inv_pl, binom_cdf_knots, binom_pmf, binomial_row};
pub use dist::{general_bounds, pauli_weight, DistEntry, DistTable, SortedProfile};
pub use exact::{depolarizing_bounds, erasure_bounds, j_cdf_depolarizing};
pub use float::{log2_choose, log_sum_exp, DepolarizingF64, ErasureF64};
pub use normal::{normal_cdf, normal_cdf_inv};

use alloc::string::String;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{check_probability, to_f64};

/// Converse and achievability error probabilities for `m` syndrome bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult<T> {
    pub n: u64,
    pub m: u64,
    pub p_conv: T,
    pub p_ach: T,
}

impl<T> BoundResult<T> {
    /// `(n - m) / n`; negative once `m > n`.
    pub fn rate(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.n as f64 - self.m as f64) / self.n as f64
    }
}

impl BoundResult<BigRational> {
    pub fn to_f64(&self) -> BoundResult<f64> {
        BoundResult {
            n: self.n,
            m: self.m,
            p_conv: to_f64(&self.p_conv),
            p_ach: to_f64(&self.p_ach),
        }
    }
}

/// A Pauli channel on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChannelSpec {
    Erasure(BigRational),
    Depolarizing(BigRational),
    Table(DistTable),
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Erasure(_) => "erasure",
            ChannelSpec::Depolarizing(_) => "depolarizing",
            ChannelSpec::Table(_) => "table",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Erasure(d) | ChannelSpec::Depolarizing(d) => check_probability(d, "delta"),
            ChannelSpec::Table(_) => Ok(()),
        }
    }
}

/// Which arithmetic evaluates the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Evaluates bounds for one channel and blocklength at many `m`.
#[derive(Debug)]
pub enum BoundEvaluator {
    Erasure { n: u64, delta: BigRational },
    Depolarizing { n: u64, delta: BigRational },
    ErasureF64(ErasureF64),
    DepolarizingF64(DepolarizingF64),
    Table(SortedProfile),
}

impl BoundEvaluator {
    /// For a table channel `n` must equal the table's qubit count.
    pub fn new(channel: &ChannelSpec, n: u64, arithmetic: Arithmetic) -> Result<Self> {
        channel.validate()?;
        Ok(match (channel, arithmetic) {
            (ChannelSpec::Erasure(d), Arithmetic::Exact) => Self::Erasure { n, delta: d.clone() },
            (ChannelSpec::Depolarizing(d), Arithmetic::Exact) => Self::Depolarizing { n, delta: d.clone() },
            (ChannelSpec::Erasure(d), Arithmetic::Float) => Self::ErasureF64(ErasureF64::new(n, to_f64(d))?),
            (ChannelSpec::Depolarizing(d), Arithmetic::Float) => {
                Self::DepolarizingF64(DepolarizingF64::new(n, to_f64(d))?)
            }
            (ChannelSpec::Table(t), _) => {
                if t.n() as u64 != n {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "table has n = {}, requested n = {n}",
                        t.n()
                    )));
                }
                Self::Table(SortedProfile::new(t))
            }
        })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Self::ErasureF64(_) | Self::DepolarizingF64(_))
    }

    pub fn bounds_exact(&self, m: u64) -> Result<Option<BoundResult<BigRational>>> {
        Ok(match self {
            Self::Erasure { n, delta } => Some(erasure_bounds(*n, delta, m)?),
            Self::Depolarizing { n, delta } => Some(depolarizing_bounds(*n, delta, m)?),
            Self::Table(p) => Some(p.bounds(m)?),
            _ => None,
        })
    }

    pub fn bounds_f64(&self, m: u64) -> Result<BoundResult<f64>> {
        match self {
            Self::ErasureF64(e) => e.bounds(m),
            Self::DepolarizingF64(d) => d.bounds(m),
            _ => Ok(self.bounds_exact(m)?.expect("exact evaluator").to_f64()),
        }
    }
}

/// Result of [`rate_search`]. `None` means no `m` in `0..=n` met the
/// condition.
#[derive(Clone, Debug, PartialEq)]
pub struct RateSearch {
    pub n: u64,
    /// Smallest `m` with `P_ach ≤ ε`.
    pub m_ach: Option<u64>,
    /// Largest `m` with `P_conv > ε`.
    pub m_conv: Option<u64>,
}

impl RateSearch {
    fn rate(&self, m: Option<u64>) -> Option<f64> {
        m.map(|m| (self.n - m) as f64 / self.n as f64)
    }

    /// Largest rate `(n - m)/n` whose achievability bound is at most `ε`.
    pub fn r_ach(&self) -> Option<f64> {
        self.rate(self.m_ach)
    }

    /// Smallest rate whose converse bound exceeds `ε`.
    pub fn r_conv(&self) -> Option<f64> {
        self.rate(self.m_conv)
    }
}

/// Scans `m = n, n-1, …, 0` for the achievability and converse rates at
/// target error `ε`.
pub fn rate_search(evaluator: &BoundEvaluator, n: u64, epsilon: &BigRational) -> Result<RateSearch> {
    if n == 0 {
        return Err(Error::InvalidParameter("rate search needs n >= 1".into()));
    }
    if epsilon.is_zero() || *epsilon < BigRational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let eps_f = to_f64(epsilon);
    let mut m_ach = None;
    let mut m_conv = None;
    for m in (0..=n).rev() {
        let (ach_ok, conv_over) = match evaluator.bounds_exact(m)? {
            Some(b) => (b.p_ach <= *epsilon, b.p_conv > *epsilon),
            None => {
                let b = evaluator.bounds_f64(m)?;
                (b.p_ach <= eps_f, b.p_conv > eps_f)
            }
        };
        if ach_ok {
            m_ach = Some(m);
        }
        if conv_over && m_conv.is_none() {
            m_conv = Some(m);
        }
    }
    Ok(RateSearch { n, m_ach, m_conv })
}

/// `h(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * libm::log2(p) };
    term(x) + term(1.0 - x)
}

/// Channel family for [`asymptotic_rate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Erasure,
    Depolarizing,
}

impl core::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erasure" => Ok(Family::Erasure),
            "depolarizing" => Ok(Family::Depolarizing),
            other => Err(Error::InvalidParameter(alloc::format!("unknown channel {other:?}"))),
        }
    }
}

/// Second-order rate expansion at blocklength `n`.
///
/// Erasure: `1 - 2δ + 2Φ⁻¹(ε)√(δ(1-δ)/n)`.
/// Depolarizing: `1 - h(δ) - δ log₂3 - √(δ(1-δ)/n) Φ⁻¹(ε) log₂(δ/(3(1-δ))) + log₂(n)/(2n)`.
pub fn asymptotic_rate(family: Family, n: u64, delta: f64, epsilon: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("need 0 < delta < 1, got {delta}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("need 0 < epsilon < 1, got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(String::from("need n >= 1")));
    }
    let nf = n as f64;
    let z = normal_cdf_inv(epsilon)?;
    let spread = libm::sqrt(delta * (1.0 - delta) / nf);
    Ok(match family {
        Family::Erasure => 1.0 - 2.0 * delta + 2.0 * z * spread,
        Family::Depolarizing => {
            1.0 - binary_entropy(delta) - delta * libm::log2(3.0)
                - spread * z * libm::log2(delta / (3.0 * (1.0 - delta)))
                + libm::log2(nf) / (2.0 * nf)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn rate_search_trivial_cases() {
        let ev = BoundEvaluator::new(&ChannelSpec::Erasure(ratio(1, 4)), 16, Arithmetic::Exact).unwrap();
        let s = rate_search(&ev, 16, &ratio(1, 1)).unwrap();
        assert_eq!(s.r_ach(), Some(1.0));
        assert_eq!(s.m_conv, None);

        for arith in [Arithmetic::Exact, Arithmetic::Float] {
            let ev = BoundEvaluator::new(&ChannelSpec::Depolarizing(ratio(0, 1)), 16, arith).unwrap();
            let s = rate_search(&ev, 16, &ratio(1, 100)).unwrap();
            assert_eq!(s.r_ach(), Some(1.0));
        }
    }

    #[test]
    fn rate_search_brackets() {
        for arith in [Arithmetic::Exact, Arithmetic::Float] {
            let ev = BoundEvaluator::new(&ChannelSpec::Erasure(ratio(1, 10)), 64, arith).unwrap();
            let s = rate_search(&ev, 64, &ratio(1, 20)).unwrap();
            assert!(s.r_conv().unwrap() > s.r_ach().unwrap());
        }
    }

    #[test]
    fn asymptotic_examples() {
        let r = asymptotic_rate(Family::Erasure, 100, 0.2, 0.5).unwrap();
        assert!((r - 0.6).abs() < 1e-15);
        let hashing = 1.0 - binary_entropy(0.1) - 0.1 * libm::log2(3.0);
        let far = asymptotic_rate(Family::Depolarizing, 1 << 40, 0.1, 0.05).unwrap();
        assert!((far - hashing).abs() < 1e-5);
        assert!(asymptotic_rate(Family::Erasure, 10, 0.0, 0.5).is_err());
        assert!(asymptotic_rate(Family::Erasure, 10, 0.1, 1.0).is_err());
    }

    #[test]
    fn monotone_and_ordered() {
        let d = ratio(1, 5);
        for n in 1..=6u64 {
            let mut prev: Option<BoundResult<BigRational>> = None;
            for m in 0..=2 * n {
                for b in [erasure_bounds(n, &d, m).unwrap(), depolarizing_bounds(n, &d, m).unwrap()] {
                    assert!(b.p_conv <= b.p_ach);
                    assert!(b.p_conv >= BigRational::zero());
                }
                let b = depolarizing_bounds(n, &d, m).unwrap();
                if let Some(p) = &prev {
                    assert!(b.p_conv <= p.p_conv && b.p_ach <= p.p_ach);
                }
                prev = Some(b);
            }
        }
    }
}
