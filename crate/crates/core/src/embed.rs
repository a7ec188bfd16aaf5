//! Code-to-lattice embeddings, the scaling-constant bounds, and the map
//! from lattice vectors back to codewords.
//!
//! The systematic embedding is the Construction A lattice of the code
//! (scaling constant 1): generator rows plus q times the unit vectors on
//! the parity coordinates. The general embedding appends a tail identity
//! that tracks information vectors and scales the code coordinates by N,
//! for callers that want the non-systematic route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::code::{Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;

/// A lattice basis plus the metadata mapping its vectors back to
/// codewords.
#[derive(Debug, Clone)]
pub struct EmbeddedLattice {
    code: LinearCode,
    basis: LatticeBasis,
    scale: BigInt,
    tail_width: usize,
    code_cols: std::ops::Range<usize>,
}

impl EmbeddedLattice {
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn basis_mut(&mut self) -> &mut LatticeBasis {
        &mut self.basis
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn tail_width(&self) -> usize {
        self.tail_width
    }

    pub fn code_cols(&self) -> std::ops::Range<usize> {
        self.code_cols.clone()
    }
}

/// Construction A of a systematic code: N = 1, no tail. Rows are the k
/// generator rows and q * e_j for every parity coordinate j.
pub fn embed_systematic(code: &LinearCode) -> Result<EmbeddedLattice> {
    if code.field().is_extension() {
        return Err(Error::PrimeFieldRequired);
    }
    if !code.is_systematic() {
        return Err(Error::NotSystematic);
    }
    let n = code.len();
    let k = code.dim();
    let q = BigInt::from(code.field().q());
    let mut rows = Vec::with_capacity(n);
    for i in 0..k {
        rows.push(code.generator().row(i).iter().map(|&v| BigInt::from(v)).collect());
    }
    for j in k..n {
        let mut row = vec![BigInt::zero(); n];
        row[j] = q.clone();
        rows.push(row);
    }
    Ok(EmbeddedLattice {
        code: code.clone(),
        basis: LatticeBasis::from_rows(rows)?,
        scale: BigInt::one(),
        tail_width: 0,
        code_cols: 0..n,
    })
}

/// The general embedding with scaling constant N and a k-wide tail
/// identity: rows [N*g_i | e_i] for every generator row and [N*q*e_j | 0]
/// for every code coordinate.
pub fn embed_general(code: &LinearCode, scale: &BigInt) -> Result<EmbeddedLattice> {
    if code.field().is_extension() {
        return Err(Error::PrimeFieldRequired);
    }
    if scale < &BigInt::one() {
        return Err(Error::BadScale);
    }
    let n = code.len();
    let k = code.dim();
    let q = BigInt::from(code.field().q());
    let nq = scale * &q;
    let mut rows = Vec::with_capacity(n + k);
    for i in 0..k {
        let mut row: Vec<BigInt> =
            code.generator().row(i).iter().map(|&v| scale * BigInt::from(v)).collect();
        row.extend((0..k).map(|t| if t == i { BigInt::one() } else { BigInt::zero() }));
        rows.push(row);
    }
    for j in 0..n {
        let mut row = vec![BigInt::zero(); n + k];
        row[j] = nq.clone();
        rows.push(row);
    }
    Ok(EmbeddedLattice {
        code: code.clone(),
        basis: LatticeBasis::from_rows(rows)?,
        scale: scale.clone(),
        tail_width: k,
        code_cols: 0..n,
    })
}

/// Maps a lattice vector back to a codeword: restrict to the code
/// coordinates, divide by N, reduce mod q. Returns `None` for spurious
/// vectors (zero reduction or syndrome failure); errors when the vector
/// is not divisible by N, which signals a corrupted basis.
pub fn extract_codeword(v: &[BigInt], e: &EmbeddedLattice) -> Result<Option<(Codeword, usize)>> {
    let q = BigInt::from(e.code.field().q());
    let mut symbols = Vec::with_capacity(e.code.len());
    for c in e.code_cols.clone() {
        let (quot, rem) = v[c].div_rem(&e.scale);
        if !rem.is_zero() {
            return Err(Error::CorruptedEmbedding);
        }
        let sym = quot.mod_floor(&q);
        symbols.push(sym.to_u64().expect("canonical residue fits"));
    }
    let w = Codeword::new(symbols);
    if w.is_zero() || !e.code.contains(&w) {
        return Ok(None);
    }
    let weight = w.weight();
    Ok(Some((w, weight)))
}

/// Inputs of the LLL/BKZ scaling-constant bounds.
#[derive(Debug, Clone)]
pub struct ScalingInputs {
    /// Diophantine system dimensions.
    pub m: u32,
    pub n: u32,
    /// Max Euclidean column norm of the equivalent system, written M in
    /// the bounds.
    pub max_col_norm: f64,
    /// Candidate norm bound.
    pub r_max: f64,
    pub delta: f64,
    pub beta: u32,
}

impl ScalingInputs {
    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Degenerate("n must be at least 1"));
        }
        if !(self.delta > 0.5 && self.delta <= 1.0) {
            return Err(Error::BadDelta(self.delta));
        }
        if !(self.max_col_norm > 0.0) || !self.max_col_norm.is_finite() {
            return Err(Error::Degenerate("column norm must be positive"));
        }
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(Error::Degenerate("r_max must be positive"));
        }
        Ok(())
    }
}

/// Bits of outward-rounding precision for the radical factors; the final
/// ceiling is then within one unit of the exact value.
const ROOT_PRECISION_BITS: u32 = 96;

/// LLL scaling bound: ceil of
/// (4/(4*delta-1))^(n/2) * 2*sqrt((m+1)(n+1)) * r_max * M^m,
/// every factor rounded upward so the result stays a valid bound.
pub fn scaling_bound_lll(s: &ScalingInputs) -> Result<BigInt> {
    s.validate()?;
    let delta = dyadic(s.delta)?;
    let four = BigRational::from(BigInt::from(4));
    let base = &four / (&delta * &four - BigRational::one());
    Ok(bound_with_growth(s, &base, s.n as u64, 2))
}

/// BKZ scaling bound: ceil of
/// gamma_beta^((n-1)/(beta-1)) * 2*sqrt((m+1)(n+1)) * r_max * M^m.
pub fn scaling_bound_bkz(s: &ScalingInputs) -> Result<BigInt> {
    s.validate()?;
    if s.beta < 2 {
        return Err(Error::BadBeta { beta: s.beta as usize, rank: usize::MAX });
    }
    let (a, b, t) = hermite_radical(s.beta);
    let base = BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok(bound_with_growth(s, &base, (s.n - 1) as u64, t * (s.beta as u64 - 1)))
}

/// Evaluates rational * base^(u/v) * sqrt((m+1)(n+1)) by merging the two
/// radicals into a single root so exactly-rational products get an exact
/// ceiling; otherwise the root is rounded upward.
fn bound_with_growth(s: &ScalingInputs, base: &BigRational, u: u64, v: u64) -> BigInt {
    let g = num_integer::gcd(u, v);
    let (u, v) = (u / g, v / g);
    let base_pow = pow_exact(base, u);
    let dims = BigRational::from(BigInt::from((s.m as u64 + 1) * (s.n as u64 + 1)));
    let degree = num_integer::lcm(v, 2);
    let radicand = pow_exact(&base_pow, degree / v) * pow_exact(&dims, degree / 2);
    let root = exact_root(&radicand, degree).unwrap_or_else(|| nth_root_ub(&radicand, degree));
    let two = BigRational::from(BigInt::from(2));
    let r_max = dyadic(s.r_max).expect("validated finite");
    let m_norm = dyadic(s.max_col_norm).expect("validated finite");
    let m_pow = pow_exact(&m_norm, s.m as u64);
    let product = root * two * r_max * m_pow;
    product.ceil().to_integer()
}

/// The exact n-th root when the radicand is a perfect n-th power.
fn exact_root(x: &BigRational, n: u64) -> Option<BigRational> {
    let n32: u32 = n.try_into().ok()?;
    let rn = x.numer().nth_root(n32);
    let rd = x.denom().nth_root(n32);
    if num_traits::pow(rn.clone(), n as usize) == *x.numer()
        && num_traits::pow(rd.clone(), n as usize) == *x.denom()
    {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Upper bound on the Hermite constant gamma_beta: exact known values for
/// beta <= 8, the classical 1 + beta/4 bound beyond.
pub fn hermite_upper(beta: u32) -> Result<f64> {
    if beta < 1 {
        return Err(Error::BadBeta { beta: beta as usize, rank: usize::MAX });
    }
    Ok(match beta {
        1 => 1.0,
        2 => 2.0 / 3.0f64.sqrt(),
        3 => 2.0f64.powf(1.0 / 3.0),
        4 => 2.0f64.sqrt(),
        5 => 8.0f64.powf(0.2),
        6 => (64.0 / 3.0f64).powf(1.0 / 6.0),
        7 => 64.0f64.powf(1.0 / 7.0),
        8 => 2.0,
        _ => 1.0 + beta as f64 / 4.0,
    })
}

/// gamma_beta as an exact radical (a/b)^(1/t).
fn hermite_radical(beta: u32) -> (u64, u64, u64) {
    match beta {
        1 => (1, 1, 1),
        2 => (4, 3, 2),
        3 => (2, 1, 3),
        4 => (2, 1, 2),
        5 => (8, 1, 5),
        6 => (64, 3, 6),
        7 => (64, 1, 7),
        8 => (2, 1, 1),
        _ => (4 + beta as u64, 4, 1),
    }
}

/// Exact dyadic rational of a finite f64.
fn dyadic(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::Degenerate("parameter is not finite"))
}

/// Exact base^e.
fn pow_exact(base: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        let sq = &b * &b;
        b = sq;
        e >>= 1;
    }
    acc
}

/// Smallest representable upper bound on x^(1/n) at ROOT_PRECISION_BITS.
fn nth_root_ub(x: &BigRational, n: u64) -> BigRational {
    assert!(x.is_positive(), "radicand must be positive");
    let num = x.numer();
    let den = x.denom();
    let scale = BigInt::one() << ROOT_PRECISION_BITS;
    let scale_n = pow_exact(&BigRational::from(scale.clone()), n).to_integer();
    // t = num * den^(n-1) * scale^n, so root(t)/(den*scale) >= x^(1/n).
    let t: BigInt = num * den.pow((n - 1) as u32) * scale_n;
    let r = t.nth_root(n.try_into().expect("root fits u32"));
    let r = if num_traits::pow(r.clone(), n as usize) == t { r } else { r + 1 };
    BigRational::new(r, den * scale)
}
