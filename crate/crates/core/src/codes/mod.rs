//! Network protection codes: systematic binary linear codes whose `n`
//! coordinates ride on `n` disjoint connections.
//!
//! Every code carries a generator `[I_k | P]` and the matching parity-check
//! matrix `[P^T | I_m]`. Erasure decoding restricts the parity checks to the
//! erased columns and solves for the lost symbols.

mod bch;

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, Gf2Error, MAX_ENUMERATION_ROWS};

/// Upper bound on the number of erasure patterns [`ProtectionCode::verify_protection`]
/// will enumerate.
pub const MAX_PATTERNS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code length {0}")]
    InvalidLength(usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported BCH parameters n={n}, t={t}")]
    UnsupportedParameters { n: usize, t: usize },
    #[error("invalid positions: {0}")]
    InvalidPositions(String),
    #[error("generator is not in systematic form [I_k | P]")]
    NotSystematic,
    #[error("declared minimum distance {declared} but enumeration gives {actual}")]
    DistanceMismatch { declared: usize, actual: usize },
    #[error("erased positions are not uniquely recoverable")]
    AmbiguousErasure,
    #[error("surviving symbols are not consistent with any codeword")]
    Inconsistent,
    #[error("C({n}, {t}) patterns exceed the enumeration bound")]
    TooManyPatterns { n: usize, t: usize },
    #[error("malformed code file: {0}")]
    Parse(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Whether a code's minimum distance was established exactly or only
/// claimed from its construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    Verified,
    Declared,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::Verified => "verified",
            DistanceKind::Declared => "declared",
        })
    }
}

/// Exact minimum distance of a systematic generator when it is cheap to
/// establish: by enumeration up to [`MAX_ENUMERATION_ROWS`] messages, or in
/// closed form when there is a single parity column.
fn exact_distance(generator: &BitMatrix) -> Result<Option<usize>, CodeError> {
    let (k, n) = (generator.rows(), generator.cols());
    if k <= MAX_ENUMERATION_ROWS {
        return Ok(Some(generator.min_distance()?));
    }
    if n - k == 1 {
        // Weight of u·[I | p] is wt(u) + <u, p>; a zero entry of p gives a
        // weight-one codeword, otherwise two message bits are needed.
        let all_ones = (0..k).all(|r| generator.get(r, k));
        return Ok(Some(if all_ones { 2 } else { 1 }));
    }
    Ok(None)
}

/// Set of erased coordinates of a length-`n` word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    n: usize,
    erased: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(n: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self, CodeError> {
        let mut erased: Vec<usize> = positions.into_iter().collect();
        erased.sort_unstable();
        if let Some(&p) = erased.iter().find(|&&p| p >= n) {
            return Err(CodeError::InvalidPositions(format!("{p} not below {n}")));
        }
        if erased.windows(2).any(|w| w[0] == w[1]) {
            return Err(CodeError::InvalidPositions("duplicate position".into()));
        }
        Ok(Self { n, erased })
    }

    pub fn none(n: usize) -> Self {
        Self {
            n,
            erased: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Erased positions in increasing order.
    pub fn positions(&self) -> &[usize] {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.erased.binary_search(&i).is_ok()
    }

    pub fn survivors(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| !self.contains(i))
    }
}

impl fmt::Display for ErasurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.erased.iter().join(","))
    }
}

/// Output of an erasure decode, with the cost of producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: BitVector,
    pub codeword: BitVector,
    /// Data-symbol XORs: syndrome accumulation over the survivors plus one
    /// per row addition while solving for the erased symbols.
    pub xor_operations: usize,
}

/// Outcome of checking every `t`-erasure pattern of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectionReport {
    pub t: usize,
    pub patterns_checked: usize,
    pub failing_patterns: Vec<ErasurePattern>,
}

impl ProtectionReport {
    pub fn recoverable(&self) -> bool {
        self.failing_patterns.is_empty()
    }
}

/// An `[n, k, d_min]` systematic binary protection code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectionCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    d_min: usize,
    distance: DistanceKind,
}

impl ProtectionCode {
    fn assemble(
        generator: BitMatrix,
        d_min: usize,
        distance: DistanceKind,
    ) -> Result<Self, CodeError> {
        let (k, n) = (generator.rows(), generator.cols());
        if k >= n {
            return Err(CodeError::InvalidLength(n));
        }
        let systematic = (0..k).all(|r| (0..k).all(|c| generator.get(r, c) == (r == c)));
        if !systematic {
            return Err(CodeError::NotSystematic);
        }
        let m = n - k;
        let parity = generator.select_columns(&(k..n).collect::<Vec<_>>())?;
        let parity_check = parity.transpose().hstack(&BitMatrix::identity(m))?;
        Ok(Self {
            n,
            k,
            generator,
            parity_check,
            d_min,
            distance,
        })
    }

    /// Wraps a systematic generator, establishing its minimum distance
    /// exactly. Fails with `TooLarge` when that is not feasible.
    pub fn from_generator(generator: BitMatrix) -> Result<Self, CodeError> {
        let mut code = Self::assemble(generator, 0, DistanceKind::Verified)?;
        code.d_min = exact_distance(&code.generator)?.ok_or(Gf2Error::TooLarge { rows: code.k })?;
        Ok(code)
    }

    /// Wraps a systematic generator with a claimed, unchecked distance.
    pub fn with_declared_distance(generator: BitMatrix, d_min: usize) -> Result<Self, CodeError> {
        Self::assemble(generator, d_min, DistanceKind::Declared)
    }

    /// The `[n, n-1, 2]` single-parity code: `[I_{n-1} | 1]`.
    pub fn single_parity(n: usize) -> Result<Self, CodeError> {
        if n < 2 {
            return Err(CodeError::InvalidLength(n));
        }
        let k = n - 1;
        let g = BitMatrix::from_fn(k, n, |r, c| c == r || c == k);
        Self::assemble(g, 2, DistanceKind::Verified)
    }

    /// Systematic `[2^mu - 1, 2^mu - 1 - mu, 3]` Hamming code, `2 <= mu <= 6`.
    ///
    /// Parity-check columns enumerate every nonzero `mu`-bit pattern: the
    /// message columns take the patterns of weight at least two in
    /// increasing numeric order, the parity columns take `1, 2, 4, ...`.
    pub fn hamming(mu: u32) -> Result<Self, CodeError> {
        if !(2..=6).contains(&mu) {
            return Err(CodeError::OutOfRange(format!("mu = {mu} not in [2, 6]")));
        }
        let n = (1usize << mu) - 1;
        let patterns: Vec<usize> = (1..=n).filter(|p| p.count_ones() >= 2).collect();
        let k = patterns.len();
        let g = BitMatrix::from_fn(k, n, |r, c| {
            if c < k {
                r == c
            } else {
                (patterns[r] >> (c - k)) & 1 == 1
            }
        });
        Self::with_best_distance(g, 3)
    }

    /// Primitive narrow-sense BCH code of length `n = 2^m - 1`
    /// (`3 <= m <= 6`) with designed distance `2 * design_t + 1`, rewritten
    /// in systematic form. Codeword coordinate `j` is the coefficient of
    /// `x^j`.
    pub fn bch(n: usize, design_t: usize) -> Result<Self, CodeError> {
        let unsupported = CodeError::UnsupportedParameters { n, t: design_t };
        if !(1..=2).contains(&design_t) || !(n + 1).is_power_of_two() {
            return Err(unsupported);
        }
        let m = (n + 1).trailing_zeros();
        let g = bch::generator_polynomial(m, design_t).ok_or(unsupported.clone())?;
        let k = n - bch::degree(g);
        // Rows x^i g(x); g(0) = 1 so the left k x k block is unit upper
        // triangular and row reduction lands on [I_k | P].
        let cyclic =
            BitMatrix::from_fn(k, n, |r, c| c >= r && c - r < 64 && (g >> (c - r)) & 1 == 1);
        let (systematic, pivots) = cyclic.reduced_row_echelon();
        if pivots != (0..k).collect::<Vec<_>>() {
            return Err(unsupported);
        }
        let code = Self::with_best_distance(systematic, 2 * design_t + 1)?;
        debug_assert!(code.d_min > 2 * design_t);
        Ok(code)
    }

    fn with_best_distance(generator: BitMatrix, fallback: usize) -> Result<Self, CodeError> {
        let mut code = Self::assemble(generator, fallback, DistanceKind::Declared)?;
        if let Some(d) = exact_distance(&code.generator)? {
            code.d_min = d;
            code.distance = DistanceKind::Verified;
        }
        Ok(code)
    }

    /// Shortens the code by fixing the message symbols at `drop` to zero
    /// and deleting those coordinates. The result has length `n - |drop|`,
    /// dimension `k - |drop|`, and distance no smaller than before.
    pub fn shorten(&self, drop: &[usize]) -> Result<Self, CodeError> {
        let pattern = ErasurePattern::new(self.k, drop.iter().copied())?;
        if pattern.len() >= self.k {
            return Err(CodeError::InvalidPositions(format!(
                "cannot drop {} of {} message positions",
                pattern.len(),
                self.k
            )));
        }
        if pattern.is_empty() {
            return Ok(self.clone());
        }
        let keep_rows: Vec<usize> = pattern.survivors().collect();
        let keep_cols: Vec<usize> = (0..self.n).filter(|&c| !pattern.contains(c)).collect();
        let g = self
            .generator
            .select_rows(&keep_rows)?
            .select_columns(&keep_cols)?;
        Self::with_best_distance(g, self.d_min)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of coordinates carrying parity.
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    pub fn d_min(&self) -> usize {
        self.d_min
    }

    pub fn distance_kind(&self) -> DistanceKind {
        self.distance
    }

    pub fn is_verified(&self) -> bool {
        self.distance == DistanceKind::Verified
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// `message · G`. The first `k` symbols reproduce the message.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector, CodeError> {
        Ok(self.generator.vec_mul(message)?)
    }

    /// Recovers the message from a word whose `pattern` positions are lost.
    /// Values at erased positions of `received` are ignored.
    pub fn erasure_decode(
        &self,
        received: &BitVector,
        pattern: &ErasurePattern,
    ) -> Result<BitVector, CodeError> {
        self.erasure_decode_traced(received, pattern)
            .map(|d| d.message)
    }

    pub fn erasure_decode_traced(
        &self,
        received: &BitVector,
        pattern: &ErasurePattern,
    ) -> Result<Decoded, CodeError> {
        if received.len() != self.n || pattern.n() != self.n {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.n,
                found: if received.len() != self.n {
                    received.len()
                } else {
                    pattern.n()
                },
            }
            .into());
        }
        let mut codeword = received.clone();
        for &p in pattern.positions() {
            codeword.set(p, false);
        }

        // Syndrome of the survivors: each parity-check row XORs the
        // surviving symbols it touches.
        let h = &self.parity_check;
        let syndrome = h.mul_vec(&codeword)?;
        let mut xor_operations = 0;
        for r in 0..h.rows() {
            let touched = pattern.survivors().filter(|&c| h.get(r, c)).count();
            xor_operations += touched.saturating_sub(1);
        }

        if pattern.is_empty() {
            if !syndrome.is_zero() {
                return Err(CodeError::Inconsistent);
            }
        } else {
            let restricted = h.select_columns(pattern.positions())?;
            let solution = restricted.solve_traced(&syndrome).map_err(|e| match e {
                Gf2Error::Inconsistent => CodeError::Inconsistent,
                Gf2Error::NoUniqueSolution { .. } => CodeError::AmbiguousErasure,
                other => other.into(),
            })?;
            xor_operations += solution.row_additions;
            for (i, &p) in pattern.positions().iter().enumerate() {
                codeword.set(p, solution.x.get(i));
            }
        }
        let message = codeword.select(&(0..self.k).collect::<Vec<_>>())?;
        Ok(Decoded {
            message,
            codeword,
            xor_operations,
        })
    }

    /// Tries every `t`-subset of coordinates as an erasure pattern.
    pub fn verify_protection(&self, t: usize) -> Result<ProtectionReport, CodeError> {
        if t > self.n || binomial(self.n, t) > MAX_PATTERNS {
            return Err(CodeError::TooManyPatterns { n: self.n, t });
        }
        // Decoding success depends only on the pattern; any codeword works.
        let reference = self.encode(&BitVector::ones(self.k))?;
        let mut report = ProtectionReport {
            t,
            patterns_checked: 0,
            failing_patterns: Vec::new(),
        };
        for subset in (0..self.n).combinations(t) {
            let pattern = ErasurePattern::new(self.n, subset)?;
            report.patterns_checked += 1;
            match self.erasure_decode(&reference, &pattern) {
                Ok(_) => {}
                Err(CodeError::AmbiguousErasure) => report.failing_patterns.push(pattern),
                Err(e) => return Err(e),
            }
        }
        Ok(report)
    }

    /// Code file: `NPC n k d_min verified|declared` followed by the
    /// generator in matrix text format.
    pub fn to_file_text(&self) -> String {
        format!(
            "NPC {} {} {} {}\n{}",
            self.n,
            self.k,
            self.d_min,
            self.distance,
            self.generator.to_text()
        )
    }

    /// Parses a code file. A `verified` header is re-checked whenever the
    /// distance can be computed, and rejected when it cannot.
    pub fn from_file_text(text: &str) -> Result<Self, CodeError> {
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| CodeError::Parse("missing header line".into()))?;
        let fields: Vec<&str> = header.split(' ').collect();
        let [tag, n, k, d, kind] = fields.as_slice() else {
            return Err(CodeError::Parse(format!("bad header {header:?}")));
        };
        if *tag != "NPC" {
            return Err(CodeError::Parse(format!("bad header {header:?}")));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| CodeError::Parse(format!("bad number {s:?}")))
        };
        let (n, k, d) = (num(n)?, num(k)?, num(d)?);
        let generator = BitMatrix::from_text(body)?;
        if generator.rows() != k || generator.cols() != n {
            return Err(CodeError::Parse(format!(
                "header says {k}x{n}, matrix is {}x{}",
                generator.rows(),
                generator.cols()
            )));
        }
        match *kind {
            "declared" => Self::with_declared_distance(generator, d),
            "verified" => {
                let code = Self::from_generator(generator)?;
                if code.d_min != d {
                    return Err(CodeError::DistanceMismatch {
                        declared: d,
                        actual: code.d_min,
                    });
                }
                Ok(code)
            }
            other => Err(CodeError::Parse(format!("unknown distance flag {other:?}"))),
        }
    }
}

impl fmt::Display for ProtectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.n, self.k, self.d_min)
    }
}

pub(crate) fn binomial(n: usize, t: usize) -> u128 {
    if t > n {
        return 0;
    }
    let t = t.min(n - t);
    (0..t).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
