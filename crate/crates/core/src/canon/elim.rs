//! The three elimination loops.
//!
//! Each step clears the pivot column with a move on the left and the pivot
//! row with a move on the right. Every move is an involution, so `L` is the
//! product of the left moves in order and `R` the product of the right moves
//! in reverse order; both are accumulated in place with the sparse
//! applicators.

use alloc::vec::Vec;

use super::{pivot_matrix, Quintuple};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::moves::{
    is_stabilizer_pcm, is_symplectic, ClassicalColumnMove, ClassicalRowMove, ColumnMove, Mode,
    PivotProfile,
};

fn column_without(w: &Gf2Matrix, col: usize, skip: usize) -> Gf2Vector {
    let mut u = w.col(col);
    u.set(skip, false);
    u
}

fn row_without(w: &Gf2Matrix, row: usize, skip: usize) -> Gf2Vector {
    let mut v = w.row(row);
    v.set(skip, false);
    v
}

/// `W ← W·Sᵀ` for the right move `S = s_{v,b}` of a symplectic `W` whose
/// row `row` is `v + e_b` and whose column `b` is `e_row`, given column `b̄`.
///
/// The row dot products `W·rev(v) = W·Λ·v` equal `e_{row̄} + W·e_{b̄}`
/// because `W·Λ·Wᵀ = Λ`, so only row `row` needs a full update and the
/// rest of the move is a change to column `b̄`.
fn right_move_symplectic(w: &mut Gf2Matrix, row: usize, s: &ColumnMove, mut flips: Gf2Vector) {
    let n2 = w.rows();
    let (b, v) = (s.index(), s.vector());
    let bb = n2 - 1 - b;
    flips.flip(n2 - 1 - row);
    #[cfg(test)]
    {
        let mut e_row = Gf2Vector::zeros(n2);
        e_row.set(row, true);
        assert_eq!(w.col(b), e_row);
        assert_eq!(w.col(bb), {
            let mut c = flips.clone();
            c.flip(n2 - 1 - row);
            c
        });
        let rev = v.reversed();
        for r in 0..n2 {
            assert_eq!(flips.get(r), w.row_dot(r, rev.words()));
        }
    }
    if v.get(bb) {
        flips.flip(row);
    }
    w.xor_into_row(row, v.words());
    for r in flips.iter_ones() {
        w.flip(r, bb);
    }
}

/// Canonical form of an arbitrary `m × n` matrix with classical moves.
pub fn decompose_unrestricted(a: &Gf2Matrix) -> Quintuple {
    decompose_unrestricted_traced(a, |_, _| {})
}

/// As [`decompose_unrestricted`], calling `observe(step, W)` with the
/// partially reduced matrix after every elimination step.
pub fn decompose_unrestricted_traced(
    a: &Gf2Matrix,
    mut observe: impl FnMut(usize, &Gf2Matrix),
) -> Quintuple {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut l = Gf2Matrix::identity(m);
    let mut r = Gf2Matrix::identity(n);
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for row in 0..m {
        let Some(b) = w.last_one_in_row(row) else {
            continue;
        };
        let u = column_without(&w, b, row);
        if !u.is_zero() {
            let g = ClassicalColumnMove::new(u, row).expect("pivot entry is excluded");
            g.apply_left(&mut w);
            g.apply_right(&mut l);
        }
        let v = row_without(&w, row, b);
        if !v.is_zero() {
            let h = ClassicalRowMove::new(v, b).expect("pivot entry is excluded");
            h.apply_right(&mut w);
            h.apply_left(&mut r);
        }
        alpha.push(row);
        beta.push(b);
        observe(alpha.len(), &w);
    }
    let profile = PivotProfile {
        mode: Mode::Unrestricted,
        rows: m,
        cols: n,
        alpha,
        beta,
    };
    debug_assert_eq!(w, pivot_matrix(&profile));
    Quintuple { profile, l, r }
}

/// Canonical form of an `m × 2n` stabilizer parity check matrix, with
/// classical moves on the left and symplectic column moves on the right.
pub fn decompose_stabilizer(a: &Gf2Matrix) -> Result<Quintuple> {
    decompose_stabilizer_traced(a, |_, _| {})
}

/// As [`decompose_stabilizer`], calling `observe(step, W)` after every
/// elimination step.
pub fn decompose_stabilizer_traced(
    a: &Gf2Matrix,
    mut observe: impl FnMut(usize, &Gf2Matrix),
) -> Result<Quintuple> {
    if !is_stabilizer_pcm(a)? {
        return Err(Error::NotStabilizer);
    }
    let (m, n2) = a.shape();
    let n = n2 / 2;
    let mut w = a.clone();
    let mut l = Gf2Matrix::identity(m);
    let mut r = Gf2Matrix::identity(n2);
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for row in 0..m {
        let Some(b) = w.last_one_in_row(row) else {
            continue;
        };
        let u = column_without(&w, b, row);
        if !u.is_zero() {
            let g = ClassicalColumnMove::new(u, row).expect("pivot entry is excluded");
            g.apply_left(&mut w);
            g.apply_right(&mut l);
        }
        let v = row_without(&w, row, b);
        if !v.is_zero() {
            let s = ColumnMove::new(n, v, b).expect("pivot entry is excluded");
            s.apply_right_transpose(&mut w);
            s.apply_left_transpose(&mut r);
        }
        alpha.push(row);
        beta.push(b);
        observe(alpha.len(), &w);
    }
    let profile = PivotProfile {
        mode: Mode::Stabilizer,
        rows: m,
        cols: n2,
        alpha,
        beta,
    };
    debug_assert_eq!(w, pivot_matrix(&profile));
    Ok(Quintuple { profile, l, r })
}

/// Canonical form `A = L·Π^sym(β)·R` of a `2n × 2n` symplectic matrix, with
/// symplectic moves on both sides. Runs in `O(n³)` bit operations.
pub fn decompose_symplectic(a: &Gf2Matrix) -> Result<Quintuple> {
    decompose_symplectic_traced(a, |_, _| {})
}

/// As [`decompose_symplectic`], calling `observe(step, W)` after every
/// elimination step.
pub fn decompose_symplectic_traced(
    a: &Gf2Matrix,
    mut observe: impl FnMut(usize, &Gf2Matrix),
) -> Result<Quintuple> {
    if !is_symplectic(a)? {
        return Err(Error::NotSymplectic);
    }
    let n2 = a.rows();
    let n = n2 / 2;
    let mut w = a.clone();
    let mut r = Gf2Matrix::identity(n2);
    let mut left_moves = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for row in 0..n {
        let b = w.last_one_in_row(row).ok_or(Error::NotSymplectic)?;
        // Columns b and b̄; the left move clears column b down to e_row.
        let (mut u, mut col_bb) = w.col_pair(b, n2 - 1 - b);
        u.set(row, false);
        if !u.is_zero() {
            let s = ColumnMove::new(n, u, row).expect("pivot entry is excluded");
            s.apply_left(&mut w);
            s.apply_vector(&mut col_bb);
            left_moves.push(s);
        }
        let v = row_without(&w, row, b);
        if !v.is_zero() {
            let s = ColumnMove::new(n, v, b).expect("pivot entry is excluded");
            right_move_symplectic(&mut w, row, &s, col_bb);
            s.apply_left_transpose(&mut r);
        }
        beta.push(b);
        observe(beta.len(), &w);
    }
    // L = S_1·S_2·…·S_k, built right to left with row operations only.
    let mut l = Gf2Matrix::identity(n2);
    for s in left_moves.iter().rev() {
        s.apply_left(&mut l);
    }
    let profile = PivotProfile {
        mode: Mode::Symplectic,
        rows: n2,
        cols: n2,
        alpha: (0..n).collect(),
        beta,
    };
    if w != pivot_matrix(&profile) {
        return Err(Error::NotSymplectic);
    }
    Ok(Quintuple { profile, l, r })
}
