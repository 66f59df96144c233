//! Monte-Carlo simulation of the error-guessing decoder.
//!
//! Each trial draws a Pauli error `u` with side information `v`, hashes it
//! to the syndrome `s = (C·u)[0..m]` with a uniformly random symplectic `C`,
//! and lets the decoder try candidates in decreasing likelihood given `v`
//! until one has syndrome `s`. The trial fails when that candidate is not
//! `u`.
//!
//! Errors are handled as `u64` bit masks (bit `i` is coordinate `i`), so the
//! simulator supports `n ≤ 32`.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::bounds::{normal_cdf_inv, ChannelSpec, SortedProfile};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::rational::ratio;
use crate::rng::stream_rng;
use crate::sample::sample_symplectic;

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 32;

fn low(k: usize) -> u64 {
    if k >= 64 {
        !0
    } else {
        (1u64 << k) - 1
    }
}

/// Bernoulli draws with an exact rational probability.
#[derive(Clone, Debug)]
struct Coin {
    num: BigUint,
    den: BigUint,
    small: Option<(u64, u64)>,
}

impl Coin {
    fn new(p: &BigRational) -> Self {
        let num = p.numer().to_biguint().expect("non-negative");
        let den = p.denom().to_biguint().expect("positive");
        let small = match (num.to_u64(), den.to_u64()) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        Self { num, den, small }
    }

    /// A uniform integer `x` in `[0, den)` compared against `k·num`.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, scale: u64) -> BigUint {
        match self.small {
            Some((_, b)) if b.checked_mul(scale).is_some() => BigUint::from(rng.gen_range(0..b * scale)),
            _ => rng.gen_biguint_below(&(&self.den * scale)),
        }
    }

    fn flip<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        if let Some((a, b)) = self.small {
            return rng.gen_range(0..b) < a;
        }
        rng.gen_biguint_below(&self.den) < self.num
    }
}

/// A channel prepared for repeated sampling and decoding.
#[derive(Clone, Debug)]
pub struct Channel {
    n: usize,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Erasure(Coin),
    Depolarizing {
        coin: Coin,
        /// `δ` compared with `3/4`: which weights are most likely.
        order: WeightOrder,
    },
    Table {
        table: crate::bounds::DistTable,
        profile: SortedProfile,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WeightOrder {
    Ascending,
    Descending,
    Flat,
}

impl Channel {
    /// For a table channel `n` must match the table.
    pub fn new(spec: &ChannelSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        if n > MAX_QUBITS {
            return Err(Error::InvalidParameter(alloc::format!(
                "simulation supports n <= {MAX_QUBITS}, got {n}"
            )));
        }
        let kind = match spec {
            ChannelSpec::Erasure(d) => Kind::Erasure(Coin::new(d)),
            ChannelSpec::Depolarizing(d) => {
                let three_quarters = ratio(3, 4);
                let order = match d.cmp(&three_quarters) {
                    core::cmp::Ordering::Less => WeightOrder::Ascending,
                    core::cmp::Ordering::Greater => WeightOrder::Descending,
                    core::cmp::Ordering::Equal => WeightOrder::Flat,
                };
                Kind::Depolarizing {
                    coin: Coin::new(d),
                    order,
                }
            }
            ChannelSpec::Table(t) => {
                if t.n() != n {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "table has n = {}, requested n = {n}",
                        t.n()
                    )));
                }
                Kind::Table {
                    table: t.clone(),
                    profile: SortedProfile::new(t),
                }
            }
        };
        Ok(Self { n, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws `(u, v)`. Erasure labels are the erased qubits as an
    /// `n`-character bit string; depolarizing labels are empty.
    pub fn sample_pauli_error<R: Rng + ?Sized>(&self, rng: &mut R) -> (Gf2Vector, String) {
        let (u, v) = self.sample_bits(rng);
        (Gf2Vector::from_u64(2 * self.n, u), v)
    }

    fn sample_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, String) {
        let n = self.n;
        let two_n = 2 * n;
        match &self.kind {
            Kind::Erasure(coin) => {
                let mut u = 0u64;
                let mut label = String::with_capacity(n);
                for q in 0..n {
                    if coin.flip(rng) {
                        label.push('1');
                        let pauli: u8 = rng.gen_range(0..4);
                        u |= u64::from(pauli & 1) << q;
                        u |= u64::from(pauli >> 1) << (two_n - 1 - q);
                    } else {
                        label.push('0');
                    }
                }
                (u, label)
            }
            Kind::Depolarizing { coin, .. } => {
                let mut u = 0u64;
                for q in 0..n {
                    // x < num: X, < 2num: Z, < 3num: XZ, else identity;
                    // x uniform on [0, 3·den).
                    let x = coin.draw(rng, 3);
                    if x < coin.num {
                        u |= 1 << q;
                    } else if x < &coin.num * 2u32 {
                        u |= 1 << (two_n - 1 - q);
                    } else if x < &coin.num * 3u32 {
                        u |= 1 << q | 1 << (two_n - 1 - q);
                    }
                }
                (u, String::new())
            }
            Kind::Table { table, .. } => {
                let e = table.sample(rng);
                (to_bits(&e.u), e.v.clone())
            }
        }
    }

    /// The first candidate, in decoding order for label `v`, whose
    /// syndrome under the first `m` rows of `c` equals `syndrome`.
    pub fn decode_guess(&self, syndrome: &Gf2Vector, v: &str, c: &Gf2Matrix) -> Result<Option<Gf2Vector>> {
        let m = syndrome.len();
        let two_n = 2 * self.n;
        if c.shape() != (two_n, two_n) || m > two_n {
            return Err(Error::DimensionMismatch {
                op: "decode_guess",
                left: (m, two_n),
                right: c.shape(),
            });
        }
        let cols = syndrome_columns(c, m);
        let target = to_bits(syndrome);
        Ok(self.decode_bits(target, v, &cols).map(|u| Gf2Vector::from_u64(two_n, u)))
    }

    fn decode_bits(&self, target: u64, v: &str, cols: &[u64]) -> Option<u64> {
        let two_n = 2 * self.n;
        match &self.kind {
            Kind::Erasure(_) => {
                let mut allowed = 0u64;
                for (q, ch) in v.chars().enumerate().take(self.n) {
                    if ch == '1' {
                        allowed |= 1 << q | 1 << (two_n - 1 - q);
                    }
                }
                Search::new(self.n, cols, allowed, target, None).run()
            }
            Kind::Depolarizing { order, .. } => {
                let all = low(two_n);
                let weights: Vec<usize> = match order {
                    WeightOrder::Ascending => (0..=self.n).collect(),
                    WeightOrder::Descending => (0..=self.n).rev().collect(),
                    WeightOrder::Flat => {
                        return Search::new(self.n, cols, all, target, None).run();
                    }
                };
                weights
                    .into_iter()
                    .find_map(|w| Search::new(self.n, cols, all, target, Some(w)).run())
            }
            Kind::Table { profile, .. } => profile
                .class(v)
                .iter()
                .map(|(u, _)| to_bits(u))
                .find(|&u| syndrome_of(u, cols) == target),
        }
    }
}

fn to_bits(v: &Gf2Vector) -> u64 {
    v.words().first().copied().unwrap_or(0)
}

/// Column `i` of the top `m` rows of `c` as an `m`-bit mask.
fn syndrome_columns(c: &Gf2Matrix, m: usize) -> Vec<u64> {
    (0..c.cols())
        .map(|i| (0..m).filter(|&r| c.get(r, i)).fold(0u64, |acc, r| acc | 1 << r))
        .collect()
}

fn syndrome_of(mut u: u64, cols: &[u64]) -> u64 {
    let mut s = 0;
    while u != 0 {
        s ^= cols[u.trailing_zeros() as usize];
        u &= u - 1;
    }
    s
}

/// Depth-first enumeration of vectors supported on `allowed`, optionally
/// of qubit weight exactly `weight`, in lexicographic order (coordinate 0
/// decided first, 0 before 1).
struct Search<'a> {
    n: usize,
    cols: &'a [u64],
    allowed: u64,
    target: u64,
    weight: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(n: usize, cols: &'a [u64], allowed: u64, target: u64, weight: Option<usize>) -> Self {
        Self {
            n,
            cols,
            allowed,
            target,
            weight,
        }
    }

    fn run(&self) -> Option<u64> {
        self.visit(0, 0, 0, 0)
    }

    /// `zq` holds the Z bit of each qubit decided so far.
    fn visit(&self, i: usize, u: u64, zq: u64, syn: u64) -> Option<u64> {
        let n = self.n;
        if let Some(w) = self.weight {
            let xw = u & low(n.min(i));
            let (lower, upper) = if i <= n {
                (xw.count_ones() as usize, n)
            } else {
                let open = 2 * n - i;
                let decided = (xw | zq) & !low(open) & low(n);
                let d = decided.count_ones() as usize;
                (d + (xw & low(open)).count_ones() as usize, d + open)
            };
            if w < lower || w > upper {
                return None;
            }
        }
        if i == 2 * n {
            return (syn == self.target).then_some(u);
        }
        let zbit = |zq: u64| if i >= n { zq | 1 << (2 * n - 1 - i) } else { zq };
        if let Some(hit) = self.visit(i + 1, u, zq, syn) {
            return Some(hit);
        }
        if self.allowed >> i & 1 == 1 {
            return self.visit(i + 1, u | 1 << i, zbit(zq), syn ^ self.cols[i]);
        }
        None
    }
}

/// Parameters of one simulation.
#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub channel: ChannelSpec,
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    /// Use one matrix for every trial instead of a fresh one per trial.
    pub fixed_matrix: bool,
}

/// Stream index reserved for the shared matrix in fixed-matrix mode.
pub const FIXED_MATRIX_STREAM: u64 = u64::MAX;

/// A validated [`TrialConfig`] ready to run trials.
#[derive(Debug)]
pub struct Simulator {
    cfg: TrialConfig,
    channel: Channel,
    fixed_cols: Option<Vec<u64>>,
}

impl Simulator {
    pub fn new(cfg: TrialConfig) -> Result<Self> {
        if cfg.trials == 0 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        if cfg.m > cfg.n {
            return Err(Error::InvalidParameter(alloc::format!(
                "need m <= n, got m = {} and n = {}",
                cfg.m,
                cfg.n
            )));
        }
        let channel = Channel::new(&cfg.channel, cfg.n)?;
        let fixed_cols = cfg.fixed_matrix.then(|| {
            let mut rng = stream_rng(cfg.seed, FIXED_MATRIX_STREAM);
            syndrome_columns(&sample_symplectic(cfg.n, &mut rng), cfg.m)
        });
        Ok(Self {
            cfg,
            channel,
            fixed_cols,
        })
    }

    pub fn config(&self) -> &TrialConfig {
        &self.cfg
    }

    /// Whether trial `t` fails. Trial `t` uses stream `t` of the seed.
    pub fn trial(&self, t: u64) -> bool {
        let mut rng = stream_rng(self.cfg.seed, t);
        let (u, v) = self.channel.sample_bits(&mut rng);
        let fresh;
        let cols = match &self.fixed_cols {
            Some(c) => c,
            None => {
                fresh = syndrome_columns(&sample_symplectic(self.cfg.n, &mut rng), self.cfg.m);
                &fresh
            }
        };
        let s = syndrome_of(u, cols);
        // The true error always matches, so the search succeeds.
        let guess = self.channel.decode_bits(s, &v, cols).expect("u matches its own syndrome");
        guess != u
    }

    /// Number of failures among trials in `range`.
    pub fn failures(&self, range: Range<u64>) -> u64 {
        range.filter(|&t| self.trial(t)).count() as u64
    }

    /// Runs all trials on the calling thread.
    pub fn run(&self) -> Estimate {
        Estimate::new(self.failures(0..self.cfg.trials), self.cfg.trials)
    }
}

/// Convenience wrapper: validate, run every trial, summarize.
pub fn estimate_error(cfg: TrialConfig) -> Result<Estimate> {
    Ok(Simulator::new(cfg)?.run())
}

/// Failure count with its Wilson 95% interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub failures: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

impl Estimate {
    pub fn new(failures: u64, trials: u64) -> Self {
        let nf = trials as f64;
        let p = failures as f64 / nf;
        let z = normal_cdf_inv(0.975).expect("valid quantile");
        let z2 = z * z;
        let denom = 1.0 + z2 / nf;
        let center = (p + z2 / (2.0 * nf)) / denom;
        let half = z / denom * libm::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf));
        Self {
            failures,
            trials,
            p_hat: p,
            ci95: ((center - half).max(0.0), (center + half).min(1.0)),
        }
    }

    /// Binomial standard error `√(p̂(1-p̂)/N)`.
    pub fn sigma(&self) -> f64 {
        libm::sqrt(self.p_hat * (1.0 - self.p_hat) / self.trials as f64)
    }

    /// Whether `[p̂ - 3σ, p̂ + 3σ]` meets `[p_conv, p_ach]`.
    pub fn sandwiched(&self, p_conv: f64, p_ach: f64) -> bool {
        let s = 3.0 * self.sigma();
        self.p_hat + s >= p_conv && self.p_hat - s <= p_ach
    }
}

/// Exact probability of the all-zero error for a depolarizing channel.
pub fn depolarizing_zero_probability(n: usize, delta: &BigRational) -> BigRational {
    crate::rational::powu(&(BigRational::one() - delta), n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{erasure_bounds, DistTable};
    use crate::rational::to_f64;

    fn erasure(d: BigRational) -> ChannelSpec {
        ChannelSpec::Erasure(d)
    }

    fn cfg(channel: ChannelSpec, n: usize, m: usize, trials: u64) -> TrialConfig {
        TrialConfig {
            channel,
            n,
            m,
            trials,
            seed: 11,
            fixed_matrix: false,
        }
    }

    #[test]
    fn noiseless_never_fails() {
        for spec in [erasure(ratio(0, 1)), ChannelSpec::Depolarizing(ratio(0, 1))] {
            let e = estimate_error(cfg(spec, 4, 2, 200)).unwrap();
            assert_eq!(e.failures, 0);
        }
    }

    #[test]
    fn full_erasure_samples() {
        let ch = Channel::new(&erasure(ratio(1, 1)), 3).unwrap();
        let mut rng = stream_rng(3, 0);
        let mut seen = [false; 64];
        for _ in 0..2000 {
            let (u, v) = ch.sample_pauli_error(&mut rng);
            assert_eq!(v, "111");
            seen[to_bits(&u) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn depolarizing_identity_frequency() {
        let d = ratio(1, 10);
        let ch = Channel::new(&ChannelSpec::Depolarizing(d.clone()), 4).unwrap();
        let mut rng = stream_rng(5, 0);
        let trials = 100_000;
        let zeros = (0..trials)
            .filter(|_| ch.sample_pauli_error(&mut rng).0.is_zero())
            .count();
        let p = to_f64(&depolarizing_zero_probability(4, &d));
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((zeros as f64 / trials as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn full_syndrome_identity_decodes_exactly() {
        let n = 3;
        let c = Gf2Matrix::identity(2 * n);
        for spec in [ChannelSpec::Depolarizing(ratio(1, 5)), erasure(ratio(1, 2))] {
            let ch = Channel::new(&spec, n).unwrap();
            let mut rng = stream_rng(9, 1);
            for _ in 0..200 {
                let (u, v) = ch.sample_pauli_error(&mut rng);
                let s = c.mul_vec(&u).unwrap();
                assert_eq!(ch.decode_guess(&s, &v, &c).unwrap(), Some(u));
            }
        }
    }

    #[test]
    fn empty_syndrome_returns_most_likely() {
        let n = 3;
        let c = Gf2Matrix::identity(2 * n);
        let s = Gf2Vector::zeros(0);
        let ch = Channel::new(&ChannelSpec::Depolarizing(ratio(1, 5)), n).unwrap();
        assert_eq!(ch.decode_guess(&s, "", &c).unwrap(), Some(Gf2Vector::zeros(6)));
        let ch = Channel::new(&ChannelSpec::Depolarizing(ratio(9, 10)), n).unwrap();
        // Weight 3, lexicographically first: Z on all qubits.
        assert_eq!(ch.decode_guess(&s, "", &c).unwrap().unwrap().to_bit_string(), "000111");
        let ch = Channel::new(&erasure(ratio(1, 2)), n).unwrap();
        assert_eq!(ch.decode_guess(&s, "010", &c).unwrap(), Some(Gf2Vector::zeros(6)));
    }

    /// The analytic search order is the sorted profile of the explicit table.
    #[test]
    fn search_order_matches_profile() {
        let n = 2;
        for spec in [
            ChannelSpec::Depolarizing(ratio(1, 5)),
            ChannelSpec::Depolarizing(ratio(9, 10)),
            ChannelSpec::Depolarizing(ratio(3, 4)),
            erasure(ratio(1, 3)),
        ] {
            let table = match &spec {
                ChannelSpec::Erasure(d) => DistTable::erasure(n, d).unwrap(),
                ChannelSpec::Depolarizing(d) => DistTable::depolarizing(n, d).unwrap(),
                ChannelSpec::Table(_) => unreachable!(),
            };
            let analytic = Channel::new(&spec, n).unwrap();
            let explicit = Channel::new(&ChannelSpec::Table(table.clone()), n).unwrap();
            let mut rng = stream_rng(1, 2);
            for _ in 0..300 {
                let c = sample_symplectic(n, &mut rng);
                let m = rng.gen_range(0..=2 * n);
                let e = table.sample(&mut rng);
                let s = c.top_rows(m).mul_vec(&e.u).unwrap();
                assert_eq!(
                    analytic.decode_guess(&s, &e.v, &c).unwrap(),
                    explicit.decode_guess(&s, &e.v, &c).unwrap()
                );
            }
        }
    }

    #[test]
    fn reproducible() {
        let a = estimate_error(cfg(erasure(ratio(1, 4)), 6, 4, 500)).unwrap();
        let b = estimate_error(cfg(erasure(ratio(1, 4)), 6, 4, 500)).unwrap();
        assert_eq!(a, b);
        let sim = Simulator::new(cfg(erasure(ratio(1, 4)), 6, 4, 500)).unwrap();
        assert_eq!(sim.failures(0..200) + sim.failures(200..500), a.failures);
    }

    #[test]
    fn sandwich_small() {
        let d = ratio(1, 4);
        let b = erasure_bounds(6, &d, 4).unwrap().to_f64();
        let e = estimate_error(cfg(erasure(d), 6, 4, 20_000)).unwrap();
        assert!(e.sandwiched(b.p_conv, b.p_ach), "{e:?} {b:?}");
        let mut fixed = cfg(erasure(ratio(1, 4)), 6, 4, 2000);
        fixed.fixed_matrix = true;
        assert!(estimate_error(fixed).is_ok());
    }

    #[test]
    fn wilson_interval() {
        let e = Estimate::new(0, 100);
        assert_eq!(e.ci95.0, 0.0);
        assert!(e.ci95.1 > 0.0 && e.ci95.1 < 0.05);
        let e = Estimate::new(50, 100);
        assert!((e.ci95.0 + e.ci95.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Simulator::new(cfg(erasure(ratio(1, 4)), 4, 5, 10)).is_err());
        assert!(Simulator::new(cfg(erasure(ratio(1, 4)), 4, 2, 0)).is_err());
        assert!(Simulator::new(cfg(erasure(ratio(1, 4)), 40, 2, 10)).is_err());
    }
}
