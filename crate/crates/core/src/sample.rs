//! Exact counting and uniform sampling through the canonical
//! parameterization.
//!
//! A symplectic matrix is a unique triple `(β, L, R)` with `L` in
//! `B(2n, P(2n))` and `R` in `B(2n, T_tcr(β))`, and each group is a free
//! choice of `borel_dim` bits. So `β` must be drawn with weight
//! `2^{borel_dim(T_tcr(β))}` and the rest uniformly.
//!
//! For `β` built one pivot at a time, `borel_dim(T_tcr(β))` is the sum over
//! `k` of the rank of `β(k)` among the `2(n-k)` coordinates whose qubit is
//! still unused. The weights therefore factor per pivot: the rank `t` of the
//! next pivot is drawn with probability `2^t / (4^{n-k} - 1)`, and summing
//! gives `|Sp(2n)| = 2^{n²} · Π_{k=1}^{n} (4^k - 1)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::canon::{borel_product, pivot_matrix, Quintuple};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::moves::{qubit, Mode, PivotProfile, TransitiveSet};
use crate::rng::geometric_top_bit;

/// Number of free bits of `B(2n, T)`: pairs `(i, j) ∈ T` with `j < n` and
/// `j < i ≤ 2n-1-j`. The group has `2^borel_dim(T)` elements.
pub fn borel_dim(t: &TransitiveSet) -> Result<usize> {
    t.validate(true)?;
    let n2 = t.n();
    Ok(t.iter().filter(|&(i, j)| j < n2 / 2 && i <= n2 - 1 - j).count())
}

/// `Σ_k rank of β(k) among coordinates on unused qubits`, which equals
/// `borel_dim(T_tcr(β))`.
pub fn beta_weight_exponent(n: usize, beta: &[usize]) -> Result<usize> {
    TransitiveSet::tm(beta, 2 * n)?;
    let mut used = vec![false; n];
    let mut total = 0;
    for &b in beta {
        total += (0..b).filter(|&j| !used[qubit(n, j)]).count();
        used[qubit(n, b)] = true;
    }
    Ok(total)
}

/// `4^k - 1`.
fn pivot_weight_sum(k: usize) -> BigUint {
    (BigUint::one() << (2 * k)) - 1u32
}

/// `|Sp(2n)|`, as the total sampling weight.
pub fn count_symplectic(n: usize) -> BigUint {
    let mut total = BigUint::one() << (n * n);
    for k in 0..n {
        total *= pivot_weight_sum(n - k);
    }
    total
}

/// `f[i][j] = Σ 2^{Σ_k (m-1-a_k)}` over increasing `a` of length `j` drawn
/// from `i..m`.
fn alpha_weight_table(m: usize, r: usize) -> Vec<Vec<BigUint>> {
    let mut f = vec![vec![BigUint::zero(); r + 1]; m + 1];
    f[m][0] = BigUint::one();
    for i in (0..m).rev() {
        f[i][0] = BigUint::one();
        for j in 1..=r {
            let take = &f[i + 1][j - 1] << (m - 1 - i);
            f[i][j] = take + &f[i + 1][j];
        }
    }
    f
}

fn check_pcm_shape(m: usize, n: usize, r: usize) -> Result<()> {
    if r > m.min(n) {
        return Err(Error::InvalidParameter(alloc::format!(
            "rank {r} exceeds min(m, n) = {}",
            m.min(n)
        )));
    }
    Ok(())
}

/// Number of `m × 2n` stabilizer parity check matrices of rank `r`.
pub fn count_stabilizer_pcm(m: usize, n: usize, r: usize) -> Result<BigUint> {
    check_pcm_shape(m, n, r)?;
    let mut total = alpha_weight_table(m, r)[0][r].clone();
    for k in 0..r {
        total *= pivot_weight_sum(n - k);
    }
    Ok(total)
}

/// Draws a qubit-injective `β` of length `r` into `[2n]` with probability
/// proportional to `2^{borel_dim(T_tcr(β))}`.
pub fn sample_beta<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Vec<usize> {
    assert!(r <= n);
    let n2 = 2 * n;
    let mut used = vec![false; n];
    let mut beta = Vec::with_capacity(r);
    for k in 0..r {
        let t = geometric_top_bit(rng, 2 * (n - k));
        let b = (0..n2)
            .filter(|&j| !used[qubit(n, j)])
            .nth(t)
            .expect("rank below the number of free coordinates");
        used[qubit(n, b)] = true;
        beta.push(b);
    }
    beta
}

/// Draws increasing `α` of length `r` in `[m]` with probability proportional
/// to `2^{|T_L(α)|}`.
pub fn sample_alpha<R: Rng + ?Sized>(m: usize, r: usize, rng: &mut R) -> Vec<usize> {
    assert!(r <= m);
    let f = alpha_weight_table(m, r);
    let mut alpha = Vec::with_capacity(r);
    let mut need = r;
    for i in 0..m {
        if need == 0 {
            break;
        }
        let take = &f[i + 1][need - 1] << (m - 1 - i);
        if rng.gen_biguint_below(&f[i][need]) < take {
            alpha.push(i);
            need -= 1;
        }
    }
    alpha
}

fn random_bit<R: Rng + ?Sized>(rng: &mut R) -> bool {
    rng.gen::<bool>()
}

/// Uniform element of `B(2n, T)` from its free column entries.
pub fn sample_borel<R: Rng + ?Sized>(t: &TransitiveSet, rng: &mut R) -> Result<Gf2Matrix> {
    t.validate(true)?;
    let n2 = t.n();
    let n = n2 / 2;
    let vs: Vec<Gf2Vector> = (0..n)
        .map(|k| {
            Gf2Vector::from_bits((0..n2).map(|i| {
                i > k && i < n2 - k && t.contains(i, k) && random_bit(rng)
            }))
        })
        .collect();
    borel_product(n, &vs)
}

/// Uniform element of `L(m, T_L(α))`.
pub fn sample_lower<R: Rng + ?Sized>(m: usize, alpha: &[usize], rng: &mut R) -> Gf2Matrix {
    let mut l = Gf2Matrix::identity(m);
    for &a in alpha {
        for i in a + 1..m {
            if random_bit(rng) {
                l.set(i, a, true);
            }
        }
    }
    l
}

/// Uniform symplectic decomposition `(β, L, R)`.
pub fn sample_symplectic_quintuple<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Quintuple {
    let n2 = 2 * n;
    let beta = sample_beta(n, n, rng);
    let l = sample_borel(&TransitiveSet::full(n2), rng).expect("P(2n) is valid");
    let t = TransitiveSet::ttcr(&beta, n2).expect("sampled beta is qubit-injective");
    let r = sample_borel(&t, rng).expect("T_tcr is valid");
    Quintuple {
        profile: PivotProfile::symplectic(n, beta).expect("sampled beta is qubit-injective"),
        l,
        r,
    }
}

/// Uniformly random element of `Sp(2n)`.
pub fn sample_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gf2Matrix {
    assemble(&sample_symplectic_quintuple(n, rng))
}

/// Uniform stabilizer-mode decomposition of an `m × 2n` matrix of rank `r`.
pub fn sample_stabilizer_quintuple<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<Quintuple> {
    check_pcm_shape(m, n, r)?;
    let alpha = sample_alpha(m, r, rng);
    let beta = sample_beta(n, r, rng);
    let l = sample_lower(m, &alpha, rng);
    let t = TransitiveSet::ttcr(&beta, 2 * n)?;
    let rr = sample_borel(&t, rng)?;
    Ok(Quintuple {
        profile: PivotProfile::new(Mode::Stabilizer, m, 2 * n, alpha, beta)?,
        l,
        r: rr,
    })
}

/// Uniformly random `m × 2n` stabilizer parity check matrix of rank `r`.
pub fn sample_stabilizer_pcm<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<Gf2Matrix> {
    Ok(assemble(&sample_stabilizer_quintuple(m, n, r, rng)?))
}

fn assemble(q: &Quintuple) -> Gf2Matrix {
    q.l.mul(&pivot_matrix(&q.profile))
        .and_then(|p| p.mul(&q.r))
        .expect("conformable by construction")
}

/// Every qubit-injective `β` of length `r` into `[2n]`, in lexicographic
/// order.
pub fn enumerate_qubit_injective(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for b in 0..2 * n {
            let q = qubit(n, b);
            if !used[q] {
                used[q] = true;
                cur.push(b);
                go(n, r, used, cur, out);
                cur.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(n, r, &mut vec![false; n], &mut Vec::new(), &mut out);
    }
    out
}

/// Every strictly increasing `α` of length `r` in `[m]`.
pub fn enumerate_increasing(m: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..1 << m)
        .filter(|mask| mask.count_ones() as usize == r)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Every element of `L(n, T)`; intended for small `|T|`.
pub fn enumerate_lower(t: &TransitiveSet) -> Vec<Gf2Matrix> {
    let pairs: Vec<_> = t.iter().collect();
    assert!(pairs.len() < 32, "too many free entries to enumerate");
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut l = Gf2Matrix::identity(t.n());
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    l.set(i, j, true);
                }
            }
            l
        })
        .collect()
}

/// Every element of `B(2n, T)`; intended for small `borel_dim(T)`.
pub fn enumerate_borel(t: &TransitiveSet) -> Result<Vec<Gf2Matrix>> {
    let dim = borel_dim(t)?;
    assert!(dim < 32, "too many free entries to enumerate");
    let n2 = t.n();
    let n = n2 / 2;
    let slots: Vec<(usize, usize)> = t
        .iter()
        .filter(|&(i, j)| j < n && i <= n2 - 1 - j)
        .collect();
    (0u64..1 << dim)
        .map(|mask| {
            let mut vs = vec![Gf2Vector::zeros(n2); n];
            for (k, &(i, j)) in slots.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    vs[j].set(i, true);
                }
            }
            borel_product(n, &vs)
        })
        .collect()
}
