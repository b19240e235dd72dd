//! Dense linear algebra over the two-element field.
//!
//! Addition is XOR and multiplication is AND. Vectors and matrix rows are
//! packed into `u64` words so that row operations and codeword enumeration
//! work a word at a time. Bits past the logical length of a row are always
//! zero.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A single field element. `true` is 1.
pub type Bit = bool;

/// Largest generator dimension accepted by [`BitMatrix::min_distance`].
pub const MAX_ENUMERATION_ROWS: usize = 26;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrices and vectors must have at least one row and one column")]
    Empty,
    #[error("system has no unique solution (rank {rank} < {unknowns} unknowns)")]
    NoUniqueSolution { rank: usize, unknowns: usize },
    #[error("system is inconsistent")]
    Inconsistent,
    #[error("{rows} rows exceed the enumeration bound of {MAX_ENUMERATION_ROWS}")]
    TooLarge { rows: usize },
    #[error("generator has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// A vector over GF(2) with at least one entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of the given length.
    ///
    /// # Panics
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "BitVector length must be positive");
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits<I: IntoIterator<Item = Bit>>(bits: I) -> Result<Self, Gf2Error> {
        let bits: Vec<Bit> = bits.into_iter().collect();
        if bits.is_empty() {
            return Err(Gf2Error::Empty);
        }
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        Ok(v)
    }

    /// Builds a vector from 0/1 integers. Any nonzero value is read as 1.
    pub fn from_u8s(bits: &[u8]) -> Result<Self, Gf2Error> {
        Self::from_bits(bits.iter().map(|&b| b != 0))
    }

    /// The low `len` bits of `value`, least significant bit first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        let mask = if len == WORD_BITS {
            u64::MAX
        } else {
            (1u64 << len) - 1
        };
        v.words[0] = value & mask;
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Bit {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: Bit) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Number of 1-entries.
    pub fn weight(&self) -> usize {
        popcount(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the 1-entries in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn xor(&self, other: &Self) -> Result<Self, Gf2Error> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &Self) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        xor_into(&mut self.words, &other.words);
        Ok(())
    }

    /// The entries at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> Result<Self, Gf2Error> {
        Self::from_bits(positions.iter().map(|&p| self.get(p)))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(bits)
    }
}

/// Result of a Gauss-Jordan solve together with the number of row additions
/// it performed. Each row addition touches the right-hand side once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: BitVector,
    pub row_additions: usize,
}

/// Dense row-major matrix over GF(2) with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows > 0 && cols > 0,
            "BitMatrix dimensions must be positive"
        );
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Bit) -> Self {
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

    pub fn from_rows(rows: &[BitVector]) -> Result<Self, Gf2Error> {
        let first = rows.first().ok_or(Gf2Error::Empty)?;
        let mut m = Self::zeros(rows.len(), first.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m.cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: m.cols,
                    found: row.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Convenience for fixtures: each inner slice is a row of 0/1 values.
    pub fn from_u8_rows(rows: &[&[u8]]) -> Result<Self, Gf2Error> {
        let rows = rows
            .iter()
            .map(|r| BitVector::from_u8s(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Bit {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: Bit) {
        assert!(r < self.rows && c < self.cols);
        let word = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if bit {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        xor_into(a, b);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }

    pub fn row_weight(&self, r: usize) -> usize {
        popcount(self.row_words(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Columns `cols` in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self, Gf2Error> {
        if cols.is_empty() {
            return Err(Gf2Error::Empty);
        }
        Ok(Self::from_fn(self.rows, cols.len(), |r, c| {
            self.get(r, cols[c])
        }))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self, Gf2Error> {
        let picked: Vec<BitVector> = rows.iter().map(|&r| self.row(r)).collect();
        Self::from_rows(&picked)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// Row-vector product `v · self`: the XOR of the rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in (0..self.rows).filter(|&r| v.get(r)) {
            xor_into(&mut out.words, self.row_words(r));
        }
        Ok(out)
    }

    /// Column-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let dot = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(r, dot & 1 == 1);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in (0..self.cols).filter(|&k| self.get(r, k)) {
                let src = other.row_words(k).to_vec();
                xor_into(out.row_words_mut(r), &src);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns. Pivots are chosen as
    /// the leftmost column with a nonzero entry at or below the current row,
    /// taking the topmost such row.
    pub fn reduced_row_echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.add_row(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.reduced_row_echelon().1.len()
    }

    /// Solves `self · x = b` for the unique `x`.
    pub fn solve(&self, b: &BitVector) -> Result<BitVector, Gf2Error> {
        self.solve_traced(b).map(|s| s.x)
    }

    /// Like [`solve`](Self::solve), also reporting how many row additions
    /// the elimination needed. Consistency is checked before uniqueness, so
    /// a rank-deficient contradictory system reports `Inconsistent`.
    pub fn solve_traced(&self, b: &BitVector) -> Result<Solution, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut m = self.clone();
        let mut rhs = b.clone();
        let mut pivots = Vec::new();
        let mut row_additions = 0;
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            let (bp, bn) = (rhs.get(p), rhs.get(next));
            rhs.set(p, bn);
            rhs.set(next, bp);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.add_row(r, next);
                    if rhs.get(next) {
                        rhs.flip(r);
                    }
                    row_additions += 1;
                }
            }
            pivots.push(c);
            next += 1;
        }
        if (next..m.rows).any(|r| rhs.get(r)) {
            return Err(Gf2Error::Inconsistent);
        }
        if pivots.len() < m.cols {
            return Err(Gf2Error::NoUniqueSolution {
                rank: pivots.len(),
                unknowns: m.cols,
            });
        }
        let mut x = BitVector::zeros(m.cols);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, rhs.get(r));
        }
        Ok(Solution { x, row_additions })
    }

    /// Minimum Hamming weight over all nonzero codewords `u · self`, found
    /// by walking every message in Gray-code order.
    pub fn min_distance(&self) -> Result<usize, Gf2Error> {
        if self.rows > MAX_ENUMERATION_ROWS {
            return Err(Gf2Error::TooLarge { rows: self.rows });
        }
        let rank = self.rank();
        if rank < self.rows {
            return Err(Gf2Error::RankDeficient {
                rank,
                rows: self.rows,
            });
        }
        let count: u64 = 1 << self.rows;
        let mut best = self.cols;
        if self.stride == 1 {
            let rows: Vec<u64> = (0..self.rows).map(|r| self.data[r]).collect();
            let mut acc = 0u64;
            for i in 1..count {
                acc ^= rows[i.trailing_zeros() as usize];
                best = best.min(acc.count_ones() as usize);
            }
        } else {
            let mut acc = vec![0u64; self.stride];
            for i in 1..count {
                xor_into(&mut acc, self.row_words(i.trailing_zeros() as usize));
                best = best.min(popcount(&acc));
            }
        }
        Ok(best)
    }

    /// Serializes to the text format: `rows cols` then one line of `0`/`1`
    /// characters per row, every line newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.push_str(&self.row(r).to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text format produced by [`to_text`](Self::to_text). The
    /// final newline may be omitted; no other whitespace is accepted.
    pub fn from_text(text: &str) -> Result<Self, Gf2Error> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');
        let header = lines
            .next()
            .ok_or_else(|| Gf2Error::Parse("missing header".into()))?;
        let (rows, cols) = parse_dims(header)?;
        if rows == 0 || cols == 0 {
            return Err(Gf2Error::Empty);
        }
        let mut m = Self::zeros(rows, cols);
        let mut seen = 0;
        for (r, line) in lines.enumerate() {
            if r >= rows {
                return Err(Gf2Error::Parse(format!("more than {rows} rows")));
            }
            if line.len() != cols {
                return Err(Gf2Error::Parse(format!(
                    "row {r} has {} characters, expected {cols}",
                    line.len()
                )));
            }
            let v: BitVector = line.parse()?;
            m.row_words_mut(r).copy_from_slice(v.words());
            seen += 1;
        }
        if seen != rows {
            return Err(Gf2Error::Parse(format!(
                "expected {rows} rows, found {seen}"
            )));
        }
        Ok(m)
    }
}

fn parse_dims(header: &str) -> Result<(usize, usize), Gf2Error> {
    let bad = || Gf2Error::Parse(format!("bad header {header:?}"));
    let (r, c) = header.split_once(' ').ok_or_else(bad)?;
    let num = |s: &str| {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<usize>().map_err(|_| bad())
    };
    Ok((num(r)?, num(c)?))
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BitMatrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(bits: &[u8]) -> BitVector {
        BitVector::from_u8s(bits).unwrap()
    }

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_u8_rows(rows).unwrap()
    }

    #[test]
    fn vec_mul_examples() {
        assert_eq!(
            BitMatrix::identity(2).vec_mul(&v(&[1, 0])).unwrap(),
            v(&[1, 0])
        );
        let g = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(g.vec_mul(&v(&[1, 1])).unwrap(), v(&[1, 1, 0]));
        assert!(g.vec_mul(&v(&[0, 0])).unwrap().is_zero());
        assert_eq!(
            g.vec_mul(&v(&[1, 0, 1])),
            Err(Gf2Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 0, 1, 1], &[1, 0, 1, 1]]).rank(), 1);
        let parity = BitMatrix::identity(4).hstack(&BitMatrix::from_fn(4, 1, |_, _| true));
        assert_eq!(parity.unwrap().rank(), 4);
    }

    #[test]
    fn solve_examples() {
        let b = v(&[1, 0, 1]);
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), b);
        assert_eq!(
            m(&[&[1, 1], &[1, 1]]).solve(&v(&[1, 0])),
            Err(Gf2Error::Inconsistent)
        );
        assert_eq!(
            m(&[&[1, 1], &[0, 0]]).solve(&v(&[1, 0])),
            Err(Gf2Error::NoUniqueSolution {
                rank: 1,
                unknowns: 2
            })
        );
    }

    #[test]
    fn solve_counts_row_additions() {
        // Lower-triangular all-ones 3x3 needs one addition per entry below the diagonal.
        let a = m(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        let s = a.solve_traced(&v(&[1, 1, 0])).unwrap();
        assert_eq!(s.x, v(&[1, 0, 1]));
        assert_eq!(a.mul_vec(&s.x).unwrap(), v(&[1, 1, 0]));
        assert_eq!(s.row_additions, 3);
    }

    #[test]
    fn min_distance_examples() {
        let parity = BitMatrix::identity(4)
            .hstack(&BitMatrix::from_fn(4, 1, |_, _| true))
            .unwrap();
        assert_eq!(parity.min_distance().unwrap(), 2);
        let hamming = m(&[
            &[1, 0, 0, 0, 1, 1, 0],
            &[0, 1, 0, 0, 1, 0, 1],
            &[0, 0, 1, 0, 0, 1, 1],
            &[0, 0, 0, 1, 1, 1, 1],
        ]);
        assert_eq!(hamming.min_distance().unwrap(), 3);
        for n in 1..10 {
            assert_eq!(
                BitMatrix::from_fn(1, n, |_, _| true)
                    .min_distance()
                    .unwrap(),
                n
            );
        }
    }

    #[test]
    fn min_distance_rejects_large_and_deficient() {
        let big = BitMatrix::identity(MAX_ENUMERATION_ROWS + 1);
        assert_eq!(big.min_distance(), Err(Gf2Error::TooLarge { rows: 27 }));
        let dup = m(&[&[1, 1, 0], &[1, 1, 0]]);
        assert_eq!(
            dup.min_distance(),
            Err(Gf2Error::RankDeficient { rank: 1, rows: 2 })
        );
    }

    #[test]
    fn min_distance_multiword_rows() {
        // Two rows spanning 130 columns: weights 70, 65 and their sum 5 + 60.
        let g = BitMatrix::from_fn(2, 130, |r, c| match r {
            0 => c < 70,
            _ => (65..130).contains(&c),
        });
        assert_eq!(g.row_weight(0), 70);
        assert_eq!(g.min_distance().unwrap(), 65);
    }

    #[test]
    fn min_distance_can_be_below_min_row_weight() {
        // Rows of weight 3 whose sum has weight 2.
        let g = m(&[&[1, 1, 1, 0], &[1, 1, 0, 1]]);
        assert_eq!((0..2).map(|r| g.row_weight(r)).min(), Some(3));
        assert_eq!(g.min_distance().unwrap(), 2);
    }

    #[test]
    fn text_format() {
        let g = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let text = g.to_text();
        assert_eq!(text, "2 3\n101\n011\n");
        assert_eq!(BitMatrix::from_text(&text).unwrap(), g);
        assert_eq!(BitMatrix::from_text("2 3\n101\n011").unwrap(), g);
        for bad in [
            "2 3\n101\n",
            "2 3\n101\n0111\n",
            "2 3\n101\n01 \n",
            "2  3\n101\n011\n",
            "2 3\n101\n011\n\n",
            "0 3\n",
            "2 3\n102\n011\n",
            "2 3\r\n101\n011\n",
        ] {
            assert!(BitMatrix::from_text(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn transpose_and_product() {
        let g = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let h = m(&[&[1, 1, 1]]);
        assert!(g.mul(&h.transpose()).unwrap().is_zero());
        assert_eq!(g.transpose().transpose(), g);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    fn arb_vec(len: usize) -> impl Strategy<Value = BitVector> {
        proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bits(b).unwrap())
    }

    proptest! {
        #[test]
        fn vec_mul_is_linear((g, u, w) in arb_matrix(8, 90).prop_flat_map(|g| {
            let r = g.rows();
            (Just(g), arb_vec(r), arb_vec(r))
        })) {
            let lhs = g.vec_mul(&u.xor(&w).unwrap()).unwrap();
            let rhs = g.vec_mul(&u).unwrap().xor(&g.vec_mul(&w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_inverts_application((a, x) in arb_matrix(10, 8).prop_flat_map(|a| {
            let c = a.cols();
            (Just(a), arb_vec(c))
        })) {
            let b = a.mul_vec(&x).unwrap();
            match a.solve(&b) {
                Ok(found) => {
                    prop_assert_eq!(a.rank(), a.cols());
                    prop_assert_eq!(found, x);
                }
                Err(e) => {
                    prop_assert!(a.rank() < a.cols());
                    let is_no_unique = matches!(e, Gf2Error::NoUniqueSolution { .. });
                    prop_assert!(is_no_unique);
                }
            }
        }

        #[test]
        fn rank_invariant_under_row_operations(
            a in arb_matrix(8, 12),
            seed in any::<u64>(),
        ) {
            let mut b = a.clone();
            let r = b.rows();
            let mut s = seed;
            for _ in 0..10 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let i = (s >> 33) as usize % r;
                let j = (s >> 13) as usize % r;
                if i == j {
                    b.swap_rows(i, (i + 1) % r);
                } else {
                    b.add_row(i, j);
                }
            }
            prop_assert_eq!(a.rank(), b.rank());
            prop_assert!(a.rank() <= r.min(a.cols()));
        }

        #[test]
        fn min_distance_at_most_min_row_weight(g in arb_matrix(6, 20)) {
            prop_assume!(g.rank() == g.rows());
            let d = g.min_distance().unwrap();
            let w = (0..g.rows()).map(|r| g.row_weight(r)).min().unwrap();
            prop_assert!(d <= w);
        }

        #[test]
        fn text_round_trip(g in arb_matrix(6, 70)) {
            let text = g.to_text();
            let back = BitMatrix::from_text(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, g);
        }
    }
}
