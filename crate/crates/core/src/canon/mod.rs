//! Canonical forms `A = L·Π·R` for unrestricted matrices, stabilizer parity
//! check matrices and symplectic matrices.
//!
//! Elimination visits rows top to bottom; in each nonzero row the pivot is
//! the rightmost nonzero entry. The column of the pivot is cleared with moves
//! on the left and the row of the pivot with moves on the right, so the output
//! is unique for every input.

mod borel;
mod elim;
mod gates;

pub use borel::{borel_expand, borel_product};
pub use elim::{
    decompose_stabilizer, decompose_stabilizer_traced, decompose_symplectic,
    decompose_symplectic_traced, decompose_unrestricted, decompose_unrestricted_traced,
};
pub use gates::{gates_image, to_gates, Gate};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::moves::{in_b, in_l, Mode, PivotProfile};

/// A canonical decomposition `(r, α, β, L, R)` of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quintuple {
    pub profile: PivotProfile,
    pub l: Gf2Matrix,
    pub r: Gf2Matrix,
}

impl Quintuple {
    #[inline]
    pub fn mode(&self) -> Mode {
        self.profile.mode
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.profile.rank()
    }

    /// Checks the group memberships of `L` and `R`, naming the first one that
    /// fails.
    pub fn verify(&self) -> Result<()> {
        self.profile.validate()?;
        let p = &self.profile;
        if self.l.shape() != (p.rows, p.rows) {
            return Err(Error::DimensionMismatch {
                op: "quintuple L",
                left: self.l.shape(),
                right: (p.rows, p.rows),
            });
        }
        if self.r.shape() != (p.cols, p.cols) {
            return Err(Error::DimensionMismatch {
                op: "quintuple R",
                left: self.r.shape(),
                right: (p.cols, p.cols),
            });
        }
        let left = p.left_set()?;
        let right = p.right_set()?;
        match p.mode {
            Mode::Unrestricted => {
                if !in_l(&self.l, &left)? {
                    return Err(Error::Membership("L is not in L(m, T_L(alpha))"));
                }
                if !in_l(&self.r, &right)? {
                    return Err(Error::Membership("R is not in L(n, T_R(beta))"));
                }
            }
            Mode::Stabilizer => {
                if !in_l(&self.l, &left)? {
                    return Err(Error::Membership("L is not in L(m, T_L(alpha))"));
                }
                if !in_b(&self.r, &right)? {
                    return Err(Error::Membership("R is not in B(2n, T_tcr(beta))"));
                }
            }
            Mode::Symplectic => {
                if !in_b(&self.l, &left)? {
                    return Err(Error::Membership("L is not in B(2n, P(2n))"));
                }
                if !in_b(&self.r, &right)? {
                    return Err(Error::Membership("R is not in B(2n, T_tcr(beta))"));
                }
            }
        }
        Ok(())
    }
}

/// `Π(α, β) = Σ e_{α(k)} e_{β(k)}ᵀ`, or in symplectic mode
/// `Π^sym(β) = Σ e_k e_{β(k)}ᵀ + e_{k̄} e_{β(k)‾}ᵀ`.
pub fn pivot_matrix(profile: &PivotProfile) -> Gf2Matrix {
    let mut p = Gf2Matrix::zeros(profile.rows, profile.cols);
    for (&a, &b) in profile.alpha.iter().zip(&profile.beta) {
        p.set(a, b, true);
        if profile.mode == Mode::Symplectic {
            let n2 = profile.cols;
            p.set(n2 - 1 - a, n2 - 1 - b, true);
        }
    }
    p
}

/// `L·Π·R` after checking the quintuple's memberships.
pub fn reconstruct(q: &Quintuple) -> Result<Gf2Matrix> {
    q.verify()?;
    q.l.mul(&pivot_matrix(&q.profile))?.mul(&q.r)
}

/// Decomposes `a` in the given mode.
pub fn decompose(mode: Mode, a: &Gf2Matrix) -> Result<Quintuple> {
    match mode {
        Mode::Unrestricted => Ok(decompose_unrestricted(a)),
        Mode::Stabilizer => decompose_stabilizer(a),
        Mode::Symplectic => decompose_symplectic(a),
    }
}
