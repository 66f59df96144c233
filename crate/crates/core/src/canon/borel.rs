//! Factorization of elements of `B(2n, P(2n))` into whole-column moves.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::moves::{in_b, ColumnMove, TransitiveSet};

/// Reads the column vectors `v_0, …, v_{n-1}` with
/// `B = s_{v_0,0} · s_{v_1,1} ⋯ s_{v_{n-1},n-1}`.
///
/// `v_k` holds the entries of column `k` in rows `k+1 ..= 2n-1-k` and is zero
/// elsewhere.
pub fn borel_expand(b: &Gf2Matrix) -> Result<Vec<Gf2Vector>> {
    let n2 = b.rows();
    if !b.is_square() {
        return Err(Error::DimensionMismatch {
            op: "borel_expand",
            left: b.shape(),
            right: (n2, n2),
        });
    }
    if !n2.is_multiple_of(2) {
        return Err(Error::OddDimension(n2));
    }
    if !in_b(b, &TransitiveSet::full(n2))? {
        return Err(Error::Membership("matrix is not in B(2n, P(2n))"));
    }
    let n = n2 / 2;
    Ok((0..n)
        .map(|k| Gf2Vector::from_bits((0..n2).map(|i| i > k && i < n2 - k && b.get(i, k))))
        .collect())
}

/// The product `s_{v_0,0} · s_{v_1,1} ⋯ s_{v_{n-1},n-1}`.
pub fn borel_product(n: usize, vs: &[Gf2Vector]) -> Result<Gf2Matrix> {
    if vs.len() != n {
        return Err(Error::DimensionMismatch {
            op: "borel_product",
            left: (vs.len(), 1),
            right: (n, 1),
        });
    }
    let mut b = Gf2Matrix::identity(2 * n);
    for (k, v) in vs.iter().enumerate() {
        ColumnMove::new(n, v.clone(), k)?.apply_right(&mut b);
    }
    Ok(b)
}
