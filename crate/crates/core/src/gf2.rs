//! Dense bit-packed vectors and matrices over GF(2).
//!
//! Matrices are stored row-major, one run of `u64` words per row, with every
//! row padded to a word boundary. Bit `c` of a row lives in word `c / 64` at
//! position `c % 64`. Padding bits past the last column are always zero, so
//! word-level equality is entry-level equality.
//!
//! Column operations are expressed as right multiplication by sparse move
//! operators (see [`crate::moves`]); this module only offers row-parallel
//! primitives.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A column vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The standard basis vector `e_i`.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        Self { len, words }
    }

    /// Builds a vector of length `len` from the low bits of `value`
    /// (bit `i` of `value` is entry `i`). `len` must be at most 64.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 entries");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & tail_mask(len);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        parity(&self.words, &other.words)
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `Λ·v`: the vector with its entries in reverse order.
    pub fn reversed(&self) -> Self {
        let mut out = Self::zeros(self.len);
        reverse_words(&self.words, self.len, &mut out.words);
        out
    }

    /// Indices of the nonzero entries, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(&self.words)
    }

    /// Lexicographic comparison of the entry strings `v_0 v_1 …` with `0 < 1`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if (a >> first) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }

    /// Renders as a string of `'0'`/`'1'` characters.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.trim().chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        message: alloc::format!("unexpected character {ch:?} in bit string"),
                    })
                }
            }
        }
        Ok(Self::from_bits(bits))
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({})", self.to_bit_string())
    }
}

#[inline]
fn parity(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

/// Writes the bit reversal of the `len`-bit string `src` into `dst`.
fn reverse_words(src: &[u64], len: usize, dst: &mut [u64]) {
    let nw = src.len();
    let shift = nw * WORD - len;
    for (d, s) in dst.iter_mut().zip(src.iter().rev()) {
        *d = s.reverse_bits();
    }
    if shift > 0 {
        for k in 0..nw {
            let hi = if k + 1 < nw { dst[k + 1] << (WORD - shift) } else { 0 };
            dst[k] = (dst[k] >> shift) | hi;
        }
    }
}

/// In-place transpose of a 64×64 bit block, row `r` bit `c` to row `c` bit `r`.
fn transpose_block(b: &mut [u64; 64]) {
    let mut width = 32;
    let mut mask: u64 = 0x0000_0000_ffff_ffff;
    while width != 0 {
        let mut k = 0;
        while k < 64 {
            if k & width == 0 {
                let t = ((b[k] >> width) ^ b[k + width]) & mask;
                b[k] ^= t << width;
                b[k + width] ^= t;
            }
            k += 1;
        }
        width >>= 1;
        mask ^= mask << width;
    }
}

/// `dst ^= src` over the common prefix, four words at a time.
#[inline]
pub(crate) fn xor_words(dst: &mut [u64], src: &[u64]) {
    let len = dst.len().min(src.len());
    let (dst, src) = (&mut dst[..len], &src[..len]);
    let mut d4 = dst.chunks_exact_mut(4);
    let mut s4 = src.chunks_exact(4);
    for (d, s) in (&mut d4).zip(&mut s4) {
        d[0] ^= s[0];
        d[1] ^= s[1];
        d[2] ^= s[2];
        d[3] ^= s[3];
    }
    for (d, s) in d4.into_remainder().iter_mut().zip(s4.remainder()) {
        *d ^= s;
    }
}

fn iter_ones(words: &[u64]) -> Ones<'_> {
    Ones {
        words,
        base: 0,
        rest: 0,
    }
}

/// Positions of the set bits in a word slice, ascending.
struct Ones<'a> {
    words: &'a [u64],
    base: usize,
    rest: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.rest == 0 {
            let (&first, tail) = self.words.split_first()?;
            self.rest = first;
            self.words = tail;
            self.base += WORD;
        }
        let bit = self.rest.trailing_zeros() as usize;
        self.rest &= self.rest - 1;
        Some(self.base - WORD + bit)
    }
}

/// A dense `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    /// The identity `I_n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The reverse-diagonal matrix `Λ_n`, which is `1` exactly at `(i, n-1-i)`.
    pub fn revdiag(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` entries. Every row must have the
    /// same length and any nonzero entry is read as `1`.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    left: (r, row.len()),
                    right: (r, cols),
                });
            }
            for (c, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_row_vectors(cols: usize, rows: &[Gf2Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "from_row_vectors",
                    left: (r, v.len()),
                    right: (r, cols),
                });
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        (self.words[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let w = &mut self.words[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.words[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn col(&self, c: usize) -> Gf2Vector {
        self.col_pair(c, c).0
    }

    /// Columns `c` and `d` in one pass over the rows.
    pub(crate) fn col_pair(&self, c: usize, d: usize) -> (Gf2Vector, Gf2Vector) {
        assert!(c < self.cols && d < self.cols, "column out of range");
        let (cw, cb, dw, db) = (c / WORD, c % WORD, d / WORD, d % WORD);
        let mut x = Vec::with_capacity(words_for(self.rows));
        let mut y = Vec::with_capacity(words_for(self.rows));
        for block in self.words.chunks(WORD * self.stride) {
            let (mut xw, mut yw) = (0u64, 0u64);
            for (k, row) in block.chunks_exact(self.stride).enumerate() {
                xw |= (row[cw] >> cb & 1) << k;
                yw |= (row[dw] >> db & 1) << k;
            }
            x.push(xw);
            y.push(yw);
        }
        (Gf2Vector::from_words(self.rows, x), Gf2Vector::from_words(self.rows, y))
    }

    pub fn set_row(&mut self, r: usize, v: &Gf2Vector) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    /// Mutable rows, each `stride` words long.
    pub(crate) fn rows_mut(&mut self) -> impl Iterator<Item = &mut [u64]> {
        let stride = self.stride;
        let words: &mut [u64] = if stride == 0 { &mut [] } else { &mut self.words };
        words.chunks_exact_mut(stride.max(1))
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert!(src < self.rows && dst < self.rows);
        if src == dst {
            self.row_words_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        xor_words(b, a);
    }

    /// `row[r] ^= v`.
    #[inline]
    pub fn xor_into_row(&mut self, r: usize, v: &[u64]) {
        xor_words(self.row_words_mut(r), v);
    }

    /// Parity of `row[r] · v`.
    #[inline]
    pub fn row_dot(&self, r: usize, v: &[u64]) -> bool {
        parity(self.row_words(r), v)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// Entry-wise sum (XOR).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            let dst = &mut out.words[r * s..(r + 1) * s];
            for t in iter_ones(self.row_words(r)) {
                xor_words(dst, other.row_words(t));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok(Gf2Vector::from_bits(
            (0..self.rows).map(|r| self.row_dot(r, v.words())),
        ))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        let mut block = [0u64; 64];
        for rb in 0..words_for(self.rows) {
            for cb in 0..self.stride {
                for (k, slot) in block.iter_mut().enumerate() {
                    let r = rb * WORD + k;
                    *slot = if r < self.rows { self.words[r * self.stride + cb] } else { 0 };
                }
                transpose_block(&mut block);
                for (k, &word) in block.iter().enumerate() {
                    let c = cb * WORD + k;
                    if c < self.cols {
                        out.words[c * out.stride + rb] = word;
                    }
                }
            }
        }
        out
    }

    /// `A·Λ`: the matrix with its columns in reverse order.
    pub fn reverse_columns(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        let s = self.stride;
        for r in 0..self.rows {
            reverse_words(&self.words[r * s..(r + 1) * s], self.cols, &mut out.words[r * s..(r + 1) * s]);
        }
        out
    }

    /// The first `count` rows.
    pub fn top_rows(&self, count: usize) -> Self {
        assert!(count <= self.rows);
        Self {
            rows: count,
            cols: self.cols,
            stride: self.stride,
            words: self.words[..count * self.stride].to_vec(),
        }
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, mask) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..m.rows).find(|&r| m.words[r * m.stride + w] & mask != 0) else {
                continue;
            };
            if p != rank {
                m.swap_rows(p, rank);
            }
            for r in rank + 1..m.rows {
                if m.words[r * m.stride + w] & mask != 0 {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.words.swap(a * s + k, b * s + k);
        }
    }

    /// Index of the last nonzero entry of row `r`, if any.
    pub fn last_one_in_row(&self, r: usize) -> Option<usize> {
        let row = self.row_words(r);
        row.iter()
            .rposition(|&w| w != 0)
            .map(|wi| wi * WORD + (WORD - 1 - row[wi].leading_zeros() as usize))
    }

    /// Renders row `r` as `'0'`/`'1'` characters.
    pub fn row_string(&self, r: usize) -> String {
        (0..self.cols)
            .map(|c| if self.get(r, c) { '1' } else { '0' })
            .collect()
    }

    /// All rows as `'0'`/`'1'` strings.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|r| self.row_string(r)).collect()
    }

    /// Builds a matrix from `'0'`/`'1'` row strings, with `cols` used when
    /// there are no rows.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S], cols: usize) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, s)| parse_row(s.as_ref(), i + 1))
            .collect::<Result<Vec<_>>>()?;
        if parsed.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        Self::from_rows(&parsed)
    }

    /// Parses the text matrix format: one row per line made of `0`/`1`
    /// characters, optionally separated by single spaces. Text after `#` is a
    /// comment and blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = parse_row(line, idx + 1)?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: alloc::format!(
                            "row has {} entries, expected {}",
                            row.len(),
                            first.len()
                        ),
                    });
                }
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    /// Renders in the text matrix format (no separators, trailing newline
    /// after every row).
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            s.push_str(&self.row_string(r));
            s.push('\n');
        }
        s
    }
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(line.len());
    let mut prev_space = true;
    for ch in line.chars() {
        match ch {
            '0' | '1' => {
                out.push((ch == '1') as u8);
                prev_space = false;
            }
            ' ' if !prev_space => prev_space = true,
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: alloc::format!("unexpected character {ch:?}"),
                })
            }
        }
    }
    if prev_space && !out.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "trailing separator".into(),
        });
    }
    Ok(out)
}

impl FromStr for Gf2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&self.row_string(r))?;
        }
        f.write_str("]")
    }
}
