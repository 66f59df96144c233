//! Gaussian moves, symplectic moves and whole-column moves, plus membership
//! tests for the groups `L(n, T)` and `B(2n, T) = L(2n, T) ∩ Sp(2n)`.
//!
//! Dense constructors exist for tests and small computations. The elimination
//! routines use the sparse applicators ([`ColumnMove`], [`ClassicalColumnMove`],
//! [`ClassicalRowMove`]), which update a matrix in place in `O(rows · words)`.

mod tset;

pub use tset::{qubit, Mode, PivotProfile, TransitiveSet};

use crate::error::{Error, Result};
use alloc::vec::Vec;

use crate::gf2::{xor_words, Gf2Matrix, Gf2Vector};

#[inline]
fn mirror(n2: usize, i: usize) -> usize {
    n2 - 1 - i
}

/// The classical Gaussian move `I_n + e_i e_jᵀ`. Left multiplication adds row
/// `j` to row `i`.
pub fn gaussian_move(n: usize, i: usize, j: usize) -> Result<Gf2Matrix> {
    check_index(i, n)?;
    check_index(j, n)?;
    if i == j {
        return Err(Error::InvalidMove("gaussian move needs i != j"));
    }
    let mut g = Gf2Matrix::identity(n);
    g.set(i, j, true);
    Ok(g)
}

/// The symplectic Gaussian move on `n` qubits: `I + e_i e_jᵀ` when `i` and
/// `j` are mirrors of each other, otherwise `I + e_i e_jᵀ + e_{j̄} e_{ī}ᵀ`
/// where `k̄ = 2n-1-k`.
pub fn symplectic_move(n: usize, i: usize, j: usize) -> Result<Gf2Matrix> {
    let n2 = 2 * n;
    check_index(i, n2)?;
    check_index(j, n2)?;
    if i == j {
        return Err(Error::InvalidMove("symplectic move needs i != j"));
    }
    let mut s = Gf2Matrix::identity(n2);
    s.set(i, j, true);
    if i + j != n2 - 1 {
        s.set(mirror(n2, j), mirror(n2, i), true);
    }
    Ok(s)
}

/// Dense form of the whole-column move
/// `s_{v,i} = I + v e_iᵀ + Λ e_i vᵀ Λ + v_{ī} e_{ī} e_iᵀ`, with `v_i = 0`.
pub fn symplectic_column_move(n: usize, v: &Gf2Vector, i: usize) -> Result<Gf2Matrix> {
    let mv = ColumnMove::new(n, v.clone(), i)?;
    let mut s = Gf2Matrix::identity(2 * n);
    mv.apply_left(&mut s);
    Ok(s)
}

/// `AᵀΛA == Λ`.
pub fn is_symplectic(a: &Gf2Matrix) -> Result<bool> {
    let (r, c) = a.shape();
    if r != c {
        return Err(Error::DimensionMismatch {
            op: "is_symplectic",
            left: (r, c),
            right: (c, r),
        });
    }
    if r % 2 != 0 {
        return Err(Error::OddDimension(r));
    }
    // AᵀΛA = Λ is equivalent to A Λ Aᵀ = Λ for square A, and the latter
    // is a product of row-major operands.
    let gram = a.mul(&a.reverse_columns().transpose())?;
    Ok(gram == Gf2Matrix::revdiag(r))
}

/// `A Λ Aᵀ == 0`: the rows are pairwise orthogonal under the symplectic form.
pub fn is_stabilizer_pcm(a: &Gf2Matrix) -> Result<bool> {
    if !a.cols().is_multiple_of(2) {
        return Err(Error::OddDimension(a.cols()));
    }
    let rev = a.reverse_columns();
    for i in 0..a.rows() {
        for j in i + 1..a.rows() {
            if a.row_dot(i, rev.row_words(j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unit diagonal and off-diagonal support inside `T`.
pub fn in_l(a: &Gf2Matrix, t: &TransitiveSet) -> Result<bool> {
    if a.shape() != (t.n(), t.n()) {
        return Err(Error::DimensionMismatch {
            op: "in_L",
            left: a.shape(),
            right: (t.n(), t.n()),
        });
    }
    for r in 0..a.rows() {
        for c in a.row(r).iter_ones() {
            if c != r && !t.contains(r, c) {
                return Ok(false);
            }
        }
        if !a.get(r, r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `in_l` and symplectic.
pub fn in_b(a: &Gf2Matrix, t: &TransitiveSet) -> Result<bool> {
    Ok(in_l(a, t)? && is_symplectic(a)?)
}

fn check_index(i: usize, bound: usize) -> Result<()> {
    if i < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, bound })
    }
}

fn check_len(len: usize, expected: usize) -> Result<()> {
    if len == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op: "move vector",
            left: (len, 1),
            right: (expected, 1),
        })
    }
}

/// The whole-column symplectic move `s_{v,i}` on `2n` coordinates.
///
/// `S = I + v e_iᵀ + e_ī rev(v)ᵀ + v_ī e_ī e_iᵀ` where `rev(v) = Λv`. It is
/// symplectic, squares to the identity, and sends `e_i` to `e_i + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnMove {
    v: Gf2Vector,
    rev: Gf2Vector,
    i: usize,
}

impl ColumnMove {
    pub fn new(n: usize, v: Gf2Vector, i: usize) -> Result<Self> {
        let n2 = 2 * n;
        check_len(v.len(), n2)?;
        check_index(i, n2)?;
        if v.get(i) {
            return Err(Error::InvalidMove("column move vector must vanish at its own index"));
        }
        let rev = v.reversed();
        Ok(Self { v, rev, i })
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.i
    }

    #[inline]
    pub fn vector(&self) -> &Gf2Vector {
        &self.v
    }

    fn bar(&self) -> usize {
        mirror(self.v.len(), self.i)
    }

    /// `A ← S·A`.
    pub fn apply_left(&self, a: &mut Gf2Matrix) {
        debug_assert_eq!(a.rows(), self.v.len());
        let (i, ib) = (self.i, self.bar());
        let row_i = a.row_words(i).to_vec();
        let w = sum_rows(a, &self.rev);
        for j in self.v.iter_ones() {
            a.xor_into_row(j, &row_i);
        }
        a.xor_into_row(ib, &w);
        if self.v.get(ib) {
            a.xor_into_row(ib, &row_i);
        }
    }

    /// `x ← S·x`.
    pub fn apply_vector(&self, x: &mut Gf2Vector) {
        debug_assert_eq!(x.len(), self.v.len());
        let (i, ib) = (self.i, self.bar());
        let xi = x.get(i);
        let flip = x.dot(&self.rev) ^ (xi && self.v.get(ib));
        if xi {
            x.xor_assign(&self.v);
        }
        if flip {
            x.flip(ib);
        }
    }

    /// `A ← A·S`.
    pub fn apply_right(&self, a: &mut Gf2Matrix) {
        debug_assert_eq!(a.cols(), self.v.len());
        let (i, ib) = (self.i, self.bar());
        right_update(a, ib, i, &self.v, &self.rev);
    }

    /// `A ← Sᵀ·A`.
    pub fn apply_left_transpose(&self, a: &mut Gf2Matrix) {
        debug_assert_eq!(a.rows(), self.v.len());
        let (i, ib) = (self.i, self.bar());
        let z = a.row_words(ib).to_vec();
        let mut w = sum_rows(a, &self.v);
        if self.v.get(ib) {
            xor_words(&mut w, &z);
        }
        a.xor_into_row(i, &w);
        for k in self.rev.iter_ones() {
            a.xor_into_row(k, &z);
        }
    }

    /// `A ← A·Sᵀ`.
    pub fn apply_right_transpose(&self, a: &mut Gf2Matrix) {
        debug_assert_eq!(a.cols(), self.v.len());
        let (i, ib) = (self.i, self.bar());
        right_update(a, i, ib, &self.rev, &self.v);
    }
}

/// `Σ_{k ∈ supp(sel)} row_k(a)` as raw words.
fn sum_rows(a: &Gf2Matrix, sel: &Gf2Vector) -> Vec<u64> {
    let mut w = alloc::vec![0u64; a.cols().div_ceil(64)];
    for k in sel.iter_ones() {
        xor_words(&mut w, a.row_words(k));
    }
    w
}

/// Shared loop of the two right applications. For every row: `c` is the
/// entry at `test`, `d` the parity of `row · dot_with`; if `c`, add `add` to
/// the row; then flip the entry at `flip` when `d ^ (c & dot_with[test])`.
fn right_update(a: &mut Gf2Matrix, test: usize, flip: usize, dot_with: &Gf2Vector, add: &Gf2Vector) {
    let corr = dot_with.get(test);
    let (tw, tb) = (test / 64, test % 64);
    let (fw, fb) = (flip / 64, flip % 64);
    let dot = dot_with.words();
    let add = add.words();
    let corr = u64::from(corr);
    // Branch-free: the tested bit is a coin flip for random inputs.
    for row in a.rows_mut() {
        let c = (row[tw] >> tb) & 1;
        let mask = c.wrapping_neg();
        let k = row.len();
        let (dot, add) = (&dot[..k], &add[..k]);
        let mut acc = 0u64;
        for j in 0..k {
            acc ^= row[j] & dot[j];
            row[j] ^= add[j] & mask;
        }
        let d = u64::from(acc.count_ones()) & 1;
        row[fw] ^= (d ^ (corr & c)) << fb;
    }
}

/// The classical column move `I + u e_aᵀ` with `u_a = 0`. Left
/// multiplication adds row `a` to every row in the support of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalColumnMove {
    u: Gf2Vector,
    a: usize,
}

impl ClassicalColumnMove {
    pub fn new(u: Gf2Vector, a: usize) -> Result<Self> {
        check_index(a, u.len())?;
        if u.get(a) {
            return Err(Error::InvalidMove("column move vector must vanish at its own index"));
        }
        Ok(Self { u, a })
    }

    /// `A ← G·A`.
    pub fn apply_left(&self, m: &mut Gf2Matrix) {
        for i in self.u.iter_ones() {
            m.xor_row_into(self.a, i);
        }
    }

    /// `A ← A·G`.
    pub fn apply_right(&self, m: &mut Gf2Matrix) {
        for r in 0..m.rows() {
            if m.row_dot(r, self.u.words()) {
                m.flip(r, self.a);
            }
        }
    }
}

/// The classical row move `I + e_b vᵀ` with `v_b = 0`. Right multiplication
/// adds column `b` to every column in the support of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRowMove {
    v: Gf2Vector,
    b: usize,
}

impl ClassicalRowMove {
    pub fn new(v: Gf2Vector, b: usize) -> Result<Self> {
        check_index(b, v.len())?;
        if v.get(b) {
            return Err(Error::InvalidMove("row move vector must vanish at its own index"));
        }
        Ok(Self { v, b })
    }

    /// `A ← H·A`.
    pub fn apply_left(&self, m: &mut Gf2Matrix) {
        for j in self.v.iter_ones() {
            m.xor_row_into(j, self.b);
        }
    }

    /// `A ← A·H`.
    pub fn apply_right(&self, m: &mut Gf2Matrix) {
        for r in 0..m.rows() {
            if m.get(r, self.b) {
                m.xor_into_row(r, self.v.words());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vec_bits(bits: &[u8]) -> Gf2Vector {
        Gf2Vector::from_bits(bits.iter().map(|&b| b != 0))
    }

    /// Outer-product evaluation of `s_{v,i}`, written independently of the
    /// sparse applicators.
    fn column_move_outer(n: usize, v: &Gf2Vector, i: usize) -> Gf2Matrix {
        let n2 = 2 * n;
        let lam = Gf2Matrix::revdiag(n2);
        let col_v = Gf2Matrix::from_fn(n2, 1, |r, _| v.get(r));
        let e_i = Gf2Matrix::from_fn(n2, 1, |r, _| r == i);
        let e_bar = Gf2Matrix::from_fn(n2, 1, |r, _| r == n2 - 1 - i);
        let term1 = col_v.mul(&e_i.transpose()).unwrap();
        let term2 = lam
            .mul(&e_i)
            .unwrap()
            .mul(&col_v.transpose())
            .unwrap()
            .mul(&lam)
            .unwrap();
        let mut s = Gf2Matrix::identity(n2).add(&term1).unwrap().add(&term2).unwrap();
        if v.get(n2 - 1 - i) {
            s = s.add(&e_bar.mul(&e_i.transpose()).unwrap()).unwrap();
        }
        s
    }

    /// Generator-product form: `s_{ī,i}^c · Π_{j ≠ i} s_{j,i}^{v_j}` with
    /// correction exponent `c = Σ_{j<n} v_j v_{j̄}`.
    fn column_move_generators(n: usize, v: &Gf2Vector, i: usize) -> Gf2Matrix {
        let n2 = 2 * n;
        let ib = n2 - 1 - i;
        let mut s = Gf2Matrix::identity(n2);
        let corr = (0..n).fold(false, |acc, j| acc ^ (v.get(j) & v.get(n2 - 1 - j)));
        if corr {
            s = s.mul(&symplectic_move(n, ib, i).unwrap()).unwrap();
        }
        for j in v.iter_ones() {
            s = s.mul(&symplectic_move(n, j, i).unwrap()).unwrap();
        }
        s
    }

    fn arb_column_move(max_n: usize) -> impl Strategy<Value = (usize, Gf2Vector, usize)> {
        (1..=max_n).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec(any::<bool>(), 2 * n), 0..2 * n).prop_map(
                |(n, bits, i)| {
                    let mut v = Gf2Vector::from_bits(bits);
                    v.set(i, false);
                    (n, v, i)
                },
            )
        })
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Gf2Matrix> {
        proptest::collection::vec(any::<bool>(), rows * cols)
            .prop_map(move |bits| Gf2Matrix::from_fn(rows, cols, |i, j| bits[i * cols + j]))
    }

    #[test]
    fn gaussian_move_examples() {
        let g = gaussian_move(3, 2, 1).unwrap();
        let mut expected = Gf2Matrix::identity(3);
        expected.set(2, 1, true);
        assert_eq!(g, expected);
        assert!(g.mul(&g).unwrap().is_identity());
        let g2 = gaussian_move(2, 1, 0).unwrap();
        assert_eq!(
            g2.mul(&Gf2Matrix::identity(2)).unwrap(),
            Gf2Matrix::from_rows(&[[1u8, 0], [1, 1]]).unwrap()
        );
        assert!(gaussian_move(3, 1, 1).is_err());
        assert!(gaussian_move(3, 3, 1).is_err());
    }

    #[test]
    fn symplectic_move_examples() {
        assert_eq!(
            symplectic_move(1, 1, 0).unwrap(),
            Gf2Matrix::from_rows(&[[1u8, 0], [1, 1]]).unwrap()
        );
        let mut expected = Gf2Matrix::identity(4);
        expected.set(1, 0, true);
        expected.set(3, 2, true);
        assert_eq!(symplectic_move(2, 1, 0).unwrap(), expected);
    }

    #[test]
    fn every_symplectic_move_is_symplectic() {
        for n in 1..=8 {
            for i in 0..2 * n {
                for j in 0..2 * n {
                    if i != j {
                        let s = symplectic_move(n, i, j).unwrap();
                        assert!(is_symplectic(&s).unwrap(), "n={n} i={i} j={j}");
                        assert!(s.mul(&s).unwrap().is_identity());
                    }
                }
            }
        }
    }

    #[test]
    fn column_move_small_example() {
        let v = vec_bits(&[1, 0]);
        let s = symplectic_column_move(1, &v, 1).unwrap();
        assert_eq!(s, Gf2Matrix::from_rows(&[[1u8, 1], [0, 1]]).unwrap());
        assert_eq!(s, column_move_outer(1, &v, 1));
        assert!(symplectic_column_move(1, &vec_bits(&[0, 1]), 1).is_err());
        assert!(symplectic_column_move(2, &Gf2Vector::zeros(4), 3)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn predicates() {
        for n in 1..5 {
            assert!(is_symplectic(&Gf2Matrix::identity(2 * n)).unwrap());
            assert!(is_symplectic(&Gf2Matrix::revdiag(2 * n)).unwrap());
        }
        assert!(!is_symplectic(&Gf2Matrix::from_rows(&[[1u8, 1], [0, 0]]).unwrap()).unwrap());
        assert!(is_symplectic(&Gf2Matrix::identity(3)).is_err());

        assert!(is_stabilizer_pcm(&Gf2Matrix::zeros(3, 6)).unwrap());
        for bits in 0..4u8 {
            let row = Gf2Matrix::from_rows(&[[bits & 1, bits >> 1]]).unwrap();
            assert!(is_stabilizer_pcm(&row).unwrap());
        }
        let bad = Gf2Matrix::from_rows(&[[1u8, 0, 0, 0], [0, 0, 0, 1]]).unwrap();
        assert!(!is_stabilizer_pcm(&bad).unwrap());
        let gram = bad
            .mul(&Gf2Matrix::revdiag(4))
            .unwrap()
            .mul(&bad.transpose())
            .unwrap();
        assert!(!gram.is_zero());
        assert!(is_stabilizer_pcm(&Gf2Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn membership_of_moves() {
        let n = 4;
        let full = TransitiveSet::full(n);
        let some = TransitiveSet::from_pairs(n, [(2, 1), (3, 1), (3, 2)]).unwrap();
        assert!(in_l(&Gf2Matrix::identity(n), &TransitiveSet::empty(n)).unwrap());
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let g = gaussian_move(n, i, j).unwrap();
                    assert_eq!(in_l(&g, &some).unwrap(), some.contains(i, j));
                    assert_eq!(in_l(&g, &full).unwrap(), i > j);
                }
            }
        }
        assert!(in_l(&Gf2Matrix::identity(3), &full).is_err());

        let q = 3;
        let t = TransitiveSet::ttcr(&[4, 0, 2], 2 * q).unwrap();
        for (i, j) in t.iter() {
            assert!(in_b(&symplectic_move(q, i, j).unwrap(), &t).unwrap());
        }
    }

    proptest! {
        #[test]
        fn column_move_forms_agree((n, v, i) in arb_column_move(6)) {
            let s = symplectic_column_move(n, &v, i).unwrap();
            prop_assert_eq!(&s, &column_move_outer(n, &v, i));
            prop_assert_eq!(&s, &column_move_generators(n, &v, i));
            prop_assert!(s.mul(&s).unwrap().is_identity());
            prop_assert!(is_symplectic(&s).unwrap());
            let mut e_i = Gf2Vector::basis(2 * n, i);
            let image = s.mul_vec(&e_i).unwrap();
            e_i.xor_assign(&v);
            prop_assert_eq!(image, e_i);
        }

        #[test]
        fn column_move_fixes_orthogonal_vectors((n, v, i) in arb_column_move(6), bits in any::<u16>()) {
            let s = symplectic_column_move(n, &v, i).unwrap();
            let mut u = Gf2Vector::from_bits((0..2 * n).map(|k| bits >> k & 1 == 1));
            u.set(i, false);
            if v.dot(&u.reversed()) {
                // Flip one coordinate paired with a nonzero entry of v so that vᵀΛu = 0.
                let k = v.iter_ones().next().unwrap();
                let kb = 2 * n - 1 - k;
                if kb != i {
                    u.flip(kb);
                } else {
                    return Ok(());
                }
            }
            prop_assume!(!u.get(i) && !v.dot(&u.reversed()));
            prop_assert_eq!(s.mul_vec(&u).unwrap(), u);
        }

        #[test]
        fn sparse_applicators_match_dense(
            (n, v, i) in arb_column_move(5),
            seed in any::<u64>(),
        ) {
            let n2 = 2 * n;
            let rows = 1 + (seed % 7) as usize;
            let mut rng = seed;
            let mut next = || { rng ^= rng << 13; rng ^= rng >> 7; rng ^= rng << 17; rng & 1 == 1 };
            let a = Gf2Matrix::from_fn(n2, rows, |_, _| next());
            let b = Gf2Matrix::from_fn(rows, n2, |_, _| next());
            let s = symplectic_column_move(n, &v, i).unwrap();
            let st = s.transpose();
            let mv = ColumnMove::new(n, v, i).unwrap();

            let mut x = a.clone();
            mv.apply_left(&mut x);
            prop_assert_eq!(x, s.mul(&a).unwrap());
            let mut x = a.clone();
            mv.apply_left_transpose(&mut x);
            prop_assert_eq!(x, st.mul(&a).unwrap());
            let mut x = b.clone();
            mv.apply_right(&mut x);
            prop_assert_eq!(x, b.mul(&s).unwrap());
            let mut x = b.clone();
            mv.apply_right_transpose(&mut x);
            prop_assert_eq!(x, b.mul(&st).unwrap());
            for c in 0..rows {
                let mut y = a.col(c);
                mv.apply_vector(&mut y);
                prop_assert_eq!(y, s.mul_vec(&a.col(c)).unwrap());
            }
        }

        #[test]
        fn classical_applicators_match_dense(
            m in arb_matrix(5, 5),
            bits in any::<u8>(),
            a in 0usize..5,
        ) {
            let mut u = Gf2Vector::from_bits((0..5).map(|k| bits >> k & 1 == 1));
            u.set(a, false);
            let col = Gf2Matrix::from_fn(5, 5, |r, c| r == c || (c == a && u.get(r)));
            let row = col.transpose();

            let g = ClassicalColumnMove::new(u.clone(), a).unwrap();
            let mut x = m.clone();
            g.apply_left(&mut x);
            prop_assert_eq!(x, col.mul(&m).unwrap());
            let mut x = m.clone();
            g.apply_right(&mut x);
            prop_assert_eq!(x, m.mul(&col).unwrap());

            let h = ClassicalRowMove::new(u, a).unwrap();
            let mut x = m.clone();
            h.apply_left(&mut x);
            prop_assert_eq!(x, row.mul(&m).unwrap());
            let mut x = m.clone();
            h.apply_right(&mut x);
            prop_assert_eq!(x, m.mul(&row).unwrap());
        }

        #[test]
        fn l_group_is_closed(
            picks in proptest::collection::vec((0usize..6, 0usize..6), 1..20),
            inv in Just([3usize, 0, 5, 1, 4, 2]),
        ) {
            let t = TransitiveSet::ninv(&inv).unwrap();
            let mut acc = Gf2Matrix::identity(6);
            let mut used = alloc::vec::Vec::new();
            for (i, j) in picks {
                if t.contains(i, j) {
                    let g = gaussian_move(6, i, j).unwrap();
                    acc = acc.mul(&g).unwrap();
                    used.push(g);
                }
            }
            prop_assert!(in_l(&acc, &t).unwrap());
            let mut inverse = Gf2Matrix::identity(6);
            for g in used.iter().rev() {
                inverse = inverse.mul(g).unwrap();
            }
            prop_assert!(in_l(&inverse, &t).unwrap());
            prop_assert!(acc.mul(&inverse).unwrap().is_identity());
        }
    }
}
