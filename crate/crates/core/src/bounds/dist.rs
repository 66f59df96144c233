//! Explicit Pauli channels with side information and the generic bounds.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::BoundResult;
use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::rational::{check_probability, from_biguint, powu, ratio};

/// One row of a [`DistTable`]: error `u` observed together with label `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistEntry {
    pub u: Gf2Vector,
    pub v: String,
    pub p: BigRational,
}

/// A joint distribution of a `2n`-bit Pauli error and a side-information
/// label, listed explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTable {
    n: usize,
    entries: Vec<DistEntry>,
}

/// Number of qubits on which `u` acts nontrivially.
pub fn pauli_weight(u: &Gf2Vector) -> usize {
    let two_n = u.len();
    (0..two_n / 2)
        .filter(|&q| u.get(q) || u.get(two_n - 1 - q))
        .count()
}

impl DistTable {
    /// Validates that every `u` has length `2n`, probabilities lie in
    /// `[0, 1]` and sum to exactly 1, and no `(u, v)` pair repeats.
    pub fn new(n: usize, entries: Vec<DistEntry>) -> Result<Self> {
        let mut total = BigRational::zero();
        let mut seen = BTreeMap::new();
        for (k, e) in entries.iter().enumerate() {
            if e.u.len() != 2 * n {
                return Err(Error::InvalidTable(alloc::format!(
                    "entry {k}: u has {} bits, expected {}",
                    e.u.len(),
                    2 * n
                )));
            }
            if e.p.is_negative() || e.p > BigRational::one() {
                return Err(Error::InvalidTable(alloc::format!(
                    "entry {k}: probability outside [0, 1]"
                )));
            }
            if seen.insert((e.v.clone(), e.u.to_bit_string()), ()).is_some() {
                return Err(Error::InvalidTable(alloc::format!(
                    "entry {k}: u repeated for label {:?}",
                    e.v
                )));
            }
            total += &e.p;
        }
        if !total.is_one() {
            return Err(Error::InvalidTable(alloc::format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { n, entries })
    }

    /// `n` independent erasures: the label is the erasure pattern as an
    /// `n`-character bit string and erased qubits carry a uniform Pauli.
    pub fn erasure(n: usize, delta: &BigRational) -> Result<Self> {
        check_probability(delta, "delta")?;
        if n > 8 {
            return Err(Error::InvalidParameter("explicit tables need n <= 8".into()));
        }
        let one = BigRational::one();
        let mut entries = Vec::new();
        for pattern in 0u64..1 << n {
            let erased: Vec<usize> = (0..n).filter(|q| pattern >> q & 1 == 1).collect();
            let e = erased.len() as u64;
            let p = powu(delta, e) * powu(&(&one - delta), n as u64 - e);
            if p.is_zero() {
                continue;
            }
            let p = p / from_biguint(BigUint::one() << (2 * e));
            let label: String = (0..n)
                .map(|q| if pattern >> q & 1 == 1 { '1' } else { '0' })
                .collect();
            for bits in 0u64..1 << (2 * e) {
                let mut u = Gf2Vector::zeros(2 * n);
                for (k, &q) in erased.iter().enumerate() {
                    u.set(q, bits >> (2 * k) & 1 == 1);
                    u.set(2 * n - 1 - q, bits >> (2 * k + 1) & 1 == 1);
                }
                entries.push(DistEntry {
                    u,
                    v: label.clone(),
                    p: p.clone(),
                });
            }
        }
        Self::new(n, entries)
    }

    /// `n` independent depolarizing channels with no side information.
    pub fn depolarizing(n: usize, delta: &BigRational) -> Result<Self> {
        check_probability(delta, "delta")?;
        if n > 8 {
            return Err(Error::InvalidParameter("explicit tables need n <= 8".into()));
        }
        let third = delta / ratio(3, 1);
        let keep = BigRational::one() - delta;
        let mut entries = Vec::new();
        for bits in 0u64..1 << (2 * n) {
            let u = Gf2Vector::from_u64(2 * n, bits);
            let w = pauli_weight(&u) as u64;
            let p = powu(&third, w) * powu(&keep, n as u64 - w);
            if !p.is_zero() {
                entries.push(DistEntry {
                    u,
                    v: String::new(),
                    p,
                });
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[DistEntry] {
        &self.entries
    }

    /// Draws one entry exactly, by a uniform integer below the common
    /// denominator of all probabilities.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &DistEntry {
        let den = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.p.denom()));
        let den_u = den.magnitude().clone();
        let x = BigInt::from(num_bigint::RandBigInt::gen_biguint_below(rng, &den_u));
        let mut acc = BigInt::zero();
        for e in &self.entries {
            acc += e.p.numer() * (&den / e.p.denom());
            if x < acc {
                return e;
            }
        }
        unreachable!("probabilities sum to 1")
    }
}

/// For each label `v`, the support of `p(·, v)` ordered by decreasing
/// probability, ties broken by ascending lexicographic `u`. Position `k` in
/// a class has rank `J = k + 1`; zero-probability vectors come last and do
/// not affect any bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedProfile {
    n: usize,
    classes: BTreeMap<String, Vec<(Gf2Vector, BigRational)>>,
}

fn profile_order(a: &(Gf2Vector, BigRational), b: &(Gf2Vector, BigRational)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.lex_cmp(&b.0))
}

impl SortedProfile {
    pub fn new(table: &DistTable) -> Self {
        let mut classes: BTreeMap<String, Vec<(Gf2Vector, BigRational)>> = BTreeMap::new();
        for e in table.entries() {
            if !e.p.is_zero() {
                classes
                    .entry(e.v.clone())
                    .or_default()
                    .push((e.u.clone(), e.p.clone()));
            }
        }
        for list in classes.values_mut() {
            list.sort_by(profile_order);
        }
        Self {
            n: table.n(),
            classes,
        }
    }

    /// Builds a profile from classes in a caller-chosen order, which only
    /// has to be non-increasing in probability. Used to check that the
    /// bounds do not depend on how ties are broken.
    pub fn from_classes(
        n: usize,
        classes: BTreeMap<String, Vec<(Gf2Vector, BigRational)>>,
    ) -> Result<Self> {
        for list in classes.values() {
            if list.windows(2).any(|w| w[0].1 < w[1].1) {
                return Err(Error::InvalidTable(
                    "class is not sorted by decreasing probability".into(),
                ));
            }
        }
        Ok(Self { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &BTreeMap<String, Vec<(Gf2Vector, BigRational)>> {
        &self.classes
    }

    /// The candidates for label `v` in decoding order.
    pub fn class(&self, v: &str) -> &[(Gf2Vector, BigRational)] {
        self.classes.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `P(J ≤ j)`.
    pub fn j_cdf(&self, j: u64) -> BigRational {
        self.classes
            .values()
            .flat_map(|list| list.iter().take(j.min(list.len() as u64) as usize))
            .fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    /// `P_conv = P(J > 2^m)`, `P_ach = P_conv + E[1{J ≤ 2^m} (J-1)] / 2^m`.
    pub fn bounds(&self, m: u64) -> Result<BoundResult<BigRational>> {
        if m > 2 * self.n as u64 {
            return Err(Error::InvalidParameter(alloc::format!(
                "m = {m} exceeds the maximum {}",
                2 * self.n
            )));
        }
        let big_m = BigUint::one() << m;
        let mut p_conv = BigRational::zero();
        let mut inside = BigRational::zero();
        for list in self.classes.values() {
            for (k, (_, p)) in list.iter().enumerate() {
                let j = BigUint::from(k as u64 + 1);
                if j > big_m {
                    p_conv += p;
                } else {
                    inside += p * BigRational::from_integer(BigInt::from(k as u64));
                }
            }
        }
        let p_ach = &p_conv + inside / from_biguint(big_m);
        Ok(BoundResult {
            n: self.n as u64,
            m,
            p_conv,
            p_ach,
        })
    }
}

/// Bounds for an explicit table, by materializing its [`SortedProfile`].
pub fn general_bounds(table: &DistTable, m: u64) -> Result<BoundResult<BigRational>> {
    SortedProfile::new(table).bounds(m)
}

impl core::fmt::Display for DistEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} {:?} {}", self.u.to_bit_string(), self.v, self.p)
    }
}
