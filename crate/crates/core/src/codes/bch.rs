//! Generator polynomials of primitive narrow-sense binary BCH codes.
//!
//! Polynomials over GF(2) are stored as bit masks (bit `i` is the
//! coefficient of `x^i`); elements of GF(2^m) likewise, reduced modulo a
//! fixed primitive polynomial.

use std::collections::BTreeSet;

/// Primitive polynomial used to build GF(2^m), for the supported `m`.
pub(crate) fn primitive_polynomial(m: u32) -> Option<u64> {
    match m {
        3 => Some(0b1011),     // x^3 + x + 1
        4 => Some(0b1_0011),   // x^4 + x + 1
        5 => Some(0b10_0101),  // x^5 + x^2 + 1
        6 => Some(0b100_0011), // x^6 + x + 1
        _ => None,
    }
}

struct Field {
    order: usize,
    exp: Vec<u64>,
    log: Vec<usize>,
}

impl Field {
    fn new(m: u32, primitive: u64) -> Self {
        let order = (1usize << m) - 1;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![0; order + 1];
        let mut x = 1u64;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x <<= 1;
            if x >> m != 0 {
                x ^= primitive;
            }
        }
        Self { order, exp, log }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) % self.order]
    }

    fn cyclotomic_coset(&self, i: usize) -> BTreeSet<usize> {
        let mut coset = BTreeSet::new();
        let mut j = i % self.order;
        while coset.insert(j) {
            j = (2 * j) % self.order;
        }
        coset
    }

    /// Minimal polynomial of `alpha^i`: the product of `(x - alpha^j)` over
    /// the cyclotomic coset of `i`. Its coefficients land in GF(2).
    fn minimal_polynomial(&self, i: usize) -> u64 {
        // Coefficients as field elements, lowest degree first.
        let mut poly: Vec<u64> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.exp[j];
            let mut next = vec![0u64; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0, |acc, (d, &c)| {
            debug_assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
            acc | (c << d)
        })
    }
}

fn poly_mul(mut a: u64, mut b: u64) -> u64 {
    let mut out = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    out
}

pub(crate) fn degree(poly: u64) -> usize {
    63 - poly.leading_zeros() as usize
}

/// Generator polynomial of the length `2^m - 1` narrow-sense BCH code with
/// designed distance `2t + 1`: the lcm of the minimal polynomials of
/// `alpha^1 .. alpha^{2t}`. Distinct cosets give coprime factors, so the lcm
/// is their product.
pub(crate) fn generator_polynomial(m: u32, t: usize) -> Option<u64> {
    let field = Field::new(m, primitive_polynomial(m)?);
    let mut seen = BTreeSet::new();
    let mut g = 1u64;
    for i in 1..=2 * t {
        let coset = field.cyclotomic_coset(i);
        let leader = *coset.iter().next().expect("coset is never empty");
        if seen.insert(leader) {
            g = poly_mul(g, field.minimal_polynomial(i));
        }
    }
    Some(g)
}
