//! Finite-field arithmetic for prime fields GF(p) and binary extension
//! fields GF(2^m).
//!
//! Prime-field elements are canonical residues in `[0, q)`. Extension
//! elements are coefficient vectors over GF(2) stored as the bits of a
//! `u64` (bit i = coefficient of x^i). Only characteristic-2 extensions
//! are supported; the codes of interest live over GF(2), GF(3) and the
//! binary images of GF(2^m) codes.

use crate::error::{Error, Result};

/// Default irreducible polynomials per extension degree, bit-encoded with
/// the constant term in bit 0. Index by `m - 2`.
const DEFAULT_MODULI: [u64; 14] = [
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x402B,  // x^14 + x^5 + x^3 + x + 1
    0x8003,  // x^15 + x + 1
];

/// A field descriptor. Copyable so that elements can carry their field for
/// mixed-operand checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// GF(q) for prime q.
    Prime { q: u64 },
    /// GF(2^m) with an irreducible modulus of degree m (bit m set).
    Ext { m: u32, modulus: u64 },
}

impl Field {
    /// GF(q) for prime q. Capped at 2^20 so raw arithmetic stays in u64.
    pub fn prime(q: u64) -> Result<Self> {
        if q > 1 << 20 {
            return Err(Error::Unsupported(format!("prime field order {} exceeds 2^20", q)));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field::Prime { q })
    }

    /// GF(2^m) with the given modulus; pass `None` for the default
    /// irreducible polynomial of that degree.
    pub fn extension(m: u32, modulus: Option<u64>) -> Result<Self> {
        if !(2..=15).contains(&m) {
            return Err(Error::BadDegree(m));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[(m - 2) as usize]);
        if poly_degree(modulus) != Some(m) || !is_irreducible(modulus, m) {
            return Err(Error::BadModulus { modulus, degree: m });
        }
        Ok(Field::Ext { m, modulus })
    }

    pub fn gf2() -> Self {
        Field::Prime { q: 2 }
    }

    pub fn gf3() -> Self {
        Field::Prime { q: 3 }
    }

    /// Field cardinality q = p^m.
    pub fn q(&self) -> u64 {
        match *self {
            Field::Prime { q } => q,
            Field::Ext { m, .. } => 1u64 << m,
        }
    }

    /// Characteristic p.
    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Prime { q } => q,
            Field::Ext { .. } => 2,
        }
    }

    /// Extension degree (1 for prime fields).
    pub fn degree(&self) -> u32 {
        match *self {
            Field::Prime { .. } => 1,
            Field::Ext { m, .. } => m,
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, Field::Ext { .. })
    }

    /// The CLI spec-string form: "2", "3" or "2^6:0x43".
    pub fn spec_string(&self) -> String {
        match *self {
            Field::Prime { q } => q.to_string(),
            Field::Ext { m, modulus } => format!("2^{}:0x{:x}", m, modulus),
        }
    }

    /// Canonical element with the given encoded value.
    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value >= self.q() {
            return Err(Error::NotCanonical { value, q: self.q() });
        }
        Ok(FieldElem { value, field: *self })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: 0, field: *self }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: 1, field: *self }
    }

    /// All field elements in canonical-value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q()).map(move |v| FieldElem { value: v, field: *self })
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let (a, b) = self.check_pair(a, b)?;
        let value = match *self {
            Field::Prime { q } => (a + b) % q,
            Field::Ext { .. } => a ^ b,
        };
        Ok(FieldElem { value, field: *self })
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let (a, b) = self.check_pair(a, b)?;
        let value = match *self {
            Field::Prime { q } => (a + q - b) % q,
            Field::Ext { .. } => a ^ b,
        };
        Ok(FieldElem { value, field: *self })
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        let value = match *self {
            Field::Prime { q } => (q - a) % q,
            Field::Ext { .. } => a,
        };
        Ok(FieldElem { value, field: *self })
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let (a, b) = self.check_pair(a, b)?;
        Ok(FieldElem { value: self.mul_raw(a, b), field: *self })
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // a^(q-2) = a^-1 in a field of order q.
        Ok(FieldElem { value: self.pow_raw(a, self.q() - 2), field: *self })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let inv = self.inv(b)?;
        self.mul(a, inv)
    }

    /// Raw-value arithmetic for hot loops; operands must be canonical.
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        match *self {
            Field::Prime { q } => (a + b) % q,
            Field::Ext { .. } => a ^ b,
        }
    }

    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        match *self {
            Field::Prime { q } => (a + q - b) % q,
            Field::Ext { .. } => a ^ b,
        }
    }

    pub fn neg_raw(&self, a: u64) -> u64 {
        match *self {
            Field::Prime { q } => (q - a) % q,
            Field::Ext { .. } => a,
        }
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match *self {
            Field::Prime { q } => a * b % q,
            Field::Ext { m, modulus } => {
                // Carry-less multiply then reduce modulo the field polynomial.
                let mut acc: u64 = 0;
                let mut a = a;
                let mut b = b;
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                }
                let top = 1u64 << m;
                for bit in (m..2 * m).rev() {
                    if acc & (1u64 << bit) != 0 {
                        acc ^= modulus << (bit - m);
                    }
                }
                debug_assert!(acc < top);
                acc
            }
        }
    }

    pub fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_raw(a, self.q() - 2))
    }

    fn pow_raw(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Regular (left-multiplication) representation of an extension element:
    /// column j holds the coefficient vector of e * x^j reduced by the
    /// modulus. Columns are bit masks, bit i = row i.
    pub fn regular_rep(&self, e: FieldElem) -> Result<RegularRep> {
        let value = self.check(e)?;
        let m = match *self {
            Field::Ext { m, .. } => m,
            Field::Prime { .. } => return Err(Error::ExtensionFieldRequired),
        };
        let x = 2u64; // the element "x"
        let mut cols = Vec::with_capacity(m as usize);
        let mut cur = value;
        for _ in 0..m {
            cols.push(cur);
            cur = self.mul_raw(cur, x);
        }
        Ok(RegularRep { m, cols })
    }

    fn check(&self, a: FieldElem) -> Result<u64> {
        if a.field != *self {
            return Err(Error::MixedFields);
        }
        Ok(a.value)
    }

    fn check_pair(&self, a: FieldElem, b: FieldElem) -> Result<(u64, u64)> {
        Ok((self.check(a)?, self.check(b)?))
    }
}

/// A canonical field element tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    field: Field,
}

impl FieldElem {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

/// The m x m binary matrix of an extension element in the regular
/// representation, stored column-wise as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularRep {
    m: u32,
    cols: Vec<u64>,
}

impl RegularRep {
    pub fn dim(&self) -> usize {
        self.m as usize
    }

    /// Entry at (row, col) as 0/1.
    pub fn bit(&self, row: usize, col: usize) -> u64 {
        (self.cols[col] >> row) & 1
    }

    /// Column as a coefficient bit mask.
    pub fn col(&self, col: usize) -> u64 {
        self.cols[col]
    }

    /// Matrix product over GF(2).
    pub fn matmul(&self, rhs: &RegularRep) -> RegularRep {
        assert_eq!(self.m, rhs.m);
        let m = self.m as usize;
        let mut cols = vec![0u64; m];
        for j in 0..m {
            // column j of the product = self * (column j of rhs)
            let mut acc = 0u64;
            for i in 0..m {
                if (rhs.cols[j] >> i) & 1 == 1 {
                    acc ^= self.cols[i];
                }
            }
            cols[j] = acc;
        }
        RegularRep { m: self.m, cols }
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, &c)| c == 1u64 << j)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|&c| c == 0)
    }
}

/// Degree of a nonzero GF(2) polynomial given as a bit mask.
fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of GF(2)[x] division.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=m/2. Exhaustive and
/// exact for the supported degrees.
fn is_irreducible(p: u64, m: u32) -> bool {
    if m == 0 {
        return false;
    }
    for d in 1..=(m / 2) {
        let lo = 1u64 << d;
        let hi = 1u64 << (d + 1);
        for div in lo..hi {
            if poly_rem(p, div) == 0 {
                return false;
            }
        }
    }
    true
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}
