//! Transitive pair-sets below the diagonal and the pivot profiles that
//! generate them.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// The qubit touched by coordinate `i` of a `2n`-dimensional space.
#[inline]
pub fn qubit(n: usize, i: usize) -> usize {
    debug_assert!(i < 2 * n);
    i.min(2 * n - 1 - i)
}

/// A set of index pairs `(i, j)` with `n > i > j`.
///
/// The set defines the group `L(n, T)` of unit lower triangular matrices whose
/// off-diagonal support lies in `T`. It is a group exactly when `T` is
/// transitive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitiveSet {
    n: usize,
    pairs: Gf2Matrix,
}

impl TransitiveSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            pairs: Gf2Matrix::zeros(n, n),
        }
    }

    /// `P(n)`: every pair below the diagonal.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            pairs: Gf2Matrix::from_fn(n, n, |i, j| i > j),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        let mut t = Self::empty(n);
        for (i, j) in pairs {
            t.insert(i, j)?;
        }
        Ok(t)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        if i <= j {
            return Err(Error::InvalidTransitiveSet("pair not below the diagonal"));
        }
        self.pairs.set(i, j, true);
        Ok(())
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.n && j < i && self.pairs.get(i, j)
    }

    pub fn len(&self) -> usize {
        (0..self.n).map(|i| self.pairs.row(i).weight()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_zero()
    }

    /// Pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..i).filter(move |&j| self.pairs.get(i, j)).map(move |j| (i, j)))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.iter().all(|(i, j)| other.contains(i, j))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                op: "union",
                left: (self.n, self.n),
                right: (other.n, other.n),
            });
        }
        Ok(Self {
            n: self.n,
            pairs: Gf2Matrix::from_fn(self.n, self.n, |i, j| {
                self.pairs.get(i, j) || other.pairs.get(i, j)
            }),
        })
    }

    /// The elementwise reversal `{(n-1-j, n-1-i) : (i, j) ∈ T}`.
    pub fn reversal(&self) -> Self {
        let n = self.n;
        let mut out = Self::empty(n);
        for (i, j) in self.iter() {
            out.pairs.set(n - 1 - j, n - 1 - i, true);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        // (i, j) ∈ T needs row j ⊆ row i.
        self.iter().all(|(i, j)| {
            let (ri, rj) = (self.pairs.row_words(i), self.pairs.row_words(j));
            ri.iter().zip(rj).all(|(a, b)| b & !a == 0)
        })
    }

    pub fn is_reversal_closed(&self) -> bool {
        self.n.is_multiple_of(2) && self.reversal() == *self
    }

    /// Checks transitivity and, if requested, closure under reversal.
    pub fn validate(&self, reversal_closed: bool) -> Result<()> {
        if !self.is_transitive() {
            return Err(Error::InvalidTransitiveSet("not transitive"));
        }
        if reversal_closed && !self.is_reversal_closed() {
            return Err(Error::InvalidTransitiveSet("not closed under reversal"));
        }
        Ok(())
    }

    /// `T_L(α) = {(i, j) : j ∈ Im α, i > j}` inside `P(m)`.
    pub fn tl(alpha: &[usize], m: usize) -> Result<Self> {
        check_increasing(alpha, m)?;
        let mut t = Self::empty(m);
        for &a in alpha {
            for i in a + 1..m {
                t.pairs.set(i, a, true);
            }
        }
        Ok(t)
    }

    /// `T_R(β)`: pairs `(β(k), j)` with `j < β(k)` and `j` not among
    /// `β(0), …, β(k-1)`.
    pub fn tr(beta: &[usize], n: usize) -> Result<Self> {
        check_injective(beta, n)?;
        let mut t = Self::empty(n);
        let mut used = alloc::vec![false; n];
        for &b in beta {
            for (j, _) in used[..b].iter().enumerate().filter(|(_, &u)| !u) {
                t.pairs.set(b, j, true);
            }
            used[b] = true;
        }
        Ok(t)
    }

    /// `T_m(β)` for a qubit-injective `β` into `[n2]`: pairs `(β(k), j)` with
    /// `j < β(k)` whose qubit is not the qubit of any `β(0), …, β(k-1)`.
    pub fn tm(beta: &[usize], n2: usize) -> Result<Self> {
        check_qubit_injective(beta, n2)?;
        let n = n2 / 2;
        let mut t = Self::empty(n2);
        let mut used = alloc::vec![false; n];
        for &b in beta {
            for j in 0..b {
                if !used[qubit(n, j)] {
                    t.pairs.set(b, j, true);
                }
            }
            used[qubit(n, b)] = true;
        }
        Ok(t)
    }

    /// The reversal of [`TransitiveSet::tm`].
    pub fn tmr(beta: &[usize], n2: usize) -> Result<Self> {
        Ok(Self::tm(beta, n2)?.reversal())
    }

    /// `T_tcr(β) = T_m(β) ∪ T_mr(β)`, transitive and closed under reversal.
    pub fn ttcr(beta: &[usize], n2: usize) -> Result<Self> {
        let tm = Self::tm(beta, n2)?;
        tm.union(&tm.reversal())
    }

    /// Inversions of a permutation: `{(i, j) : i > j, π(i) < π(j)}`.
    pub fn inv(perm: &[usize]) -> Result<Self> {
        Self::from_permutation(perm, true)
    }

    /// Non-inversions of a permutation: `{(i, j) : i > j, π(i) > π(j)}`.
    pub fn ninv(perm: &[usize]) -> Result<Self> {
        Self::from_permutation(perm, false)
    }

    fn from_permutation(perm: &[usize], inversions: bool) -> Result<Self> {
        let n = perm.len();
        check_injective(perm, n)?;
        Ok(Self {
            n,
            pairs: Gf2Matrix::from_fn(n, n, |i, j| i > j && ((perm[i] < perm[j]) == inversions)),
        })
    }
}

impl fmt::Debug for TransitiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransitiveSet")
            .field("n", &self.n)
            .field("pairs", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

fn check_increasing(alpha: &[usize], m: usize) -> Result<()> {
    if alpha.iter().any(|&a| a >= m) {
        return Err(Error::InvalidProfile("row index out of range"));
    }
    if alpha.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidProfile("alpha is not strictly increasing"));
    }
    Ok(())
}

fn check_injective(beta: &[usize], n: usize) -> Result<()> {
    let mut seen = alloc::vec![false; n];
    for &b in beta {
        if b >= n {
            return Err(Error::InvalidProfile("column index out of range"));
        }
        if core::mem::replace(&mut seen[b], true) {
            return Err(Error::InvalidProfile("beta is not injective"));
        }
    }
    Ok(())
}

fn check_qubit_injective(beta: &[usize], n2: usize) -> Result<()> {
    if !n2.is_multiple_of(2) {
        return Err(Error::OddDimension(n2));
    }
    let n = n2 / 2;
    let mut seen = alloc::vec![false; n];
    for &b in beta {
        if b >= n2 {
            return Err(Error::InvalidProfile("column index out of range"));
        }
        if core::mem::replace(&mut seen[qubit(n, b)], true) {
            return Err(Error::InvalidProfile("beta is not qubit-injective"));
        }
    }
    Ok(())
}

/// Which family of matrices a profile or decomposition belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Arbitrary `m × n` matrices with classical moves on both sides.
    Unrestricted,
    /// `m × 2n` stabilizer parity check matrices, symplectic moves on the right.
    Stabilizer,
    /// `2n × 2n` symplectic matrices, symplectic moves on both sides.
    Symplectic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Unrestricted => "unrestricted",
            Mode::Stabilizer => "stabilizer",
            Mode::Symplectic => "symplectic",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unrestricted" => Ok(Mode::Unrestricted),
            "stabilizer" | "pcm" => Ok(Mode::Stabilizer),
            "symplectic" => Ok(Mode::Symplectic),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown mode {s:?}"))),
        }
    }
}

/// Rank and pivot positions of a decomposition.
///
/// `rows × cols` is the shape of the decomposed matrix. In symplectic mode
/// `alpha` is `0, …, n-1` and `rows == cols == 2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PivotProfile {
    pub mode: Mode,
    pub rows: usize,
    pub cols: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

impl PivotProfile {
    pub fn new(mode: Mode, rows: usize, cols: usize, alpha: Vec<usize>, beta: Vec<usize>) -> Result<Self> {
        let p = Self {
            mode,
            rows,
            cols,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    /// A symplectic-mode profile for `2n × 2n` matrices.
    pub fn symplectic(n: usize, beta: Vec<usize>) -> Result<Self> {
        Self::new(Mode::Symplectic, 2 * n, 2 * n, (0..beta.len()).collect(), beta)
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.beta.len() {
            return Err(Error::InvalidProfile("alpha and beta lengths differ"));
        }
        check_increasing(&self.alpha, self.rows)?;
        match self.mode {
            Mode::Unrestricted => check_injective(&self.beta, self.cols),
            Mode::Stabilizer => check_qubit_injective(&self.beta, self.cols),
            Mode::Symplectic => {
                if self.rows != self.cols {
                    return Err(Error::InvalidProfile("symplectic profile must be square"));
                }
                check_qubit_injective(&self.beta, self.cols)?;
                if self.beta.len() != self.cols / 2 {
                    return Err(Error::InvalidProfile("symplectic profile must have full rank"));
                }
                if self.alpha.iter().enumerate().any(|(k, &a)| a != k) {
                    return Err(Error::InvalidProfile("symplectic alpha must be the identity"));
                }
                Ok(())
            }
        }
    }

    /// The pair-set that `L` must lie in.
    pub fn left_set(&self) -> Result<TransitiveSet> {
        match self.mode {
            Mode::Symplectic => Ok(TransitiveSet::full(self.rows)),
            _ => TransitiveSet::tl(&self.alpha, self.rows),
        }
    }

    /// The pair-set that `R` must lie in.
    pub fn right_set(&self) -> Result<TransitiveSet> {
        match self.mode {
            Mode::Unrestricted => TransitiveSet::tr(&self.beta, self.cols),
            _ => TransitiveSet::ttcr(&self.beta, self.cols),
        }
    }
}
