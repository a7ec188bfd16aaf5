//! Exact integer lattice bases with floating Gram-Schmidt data, size
//! reduction, LLL and block Korkin-Zolotarev reduction.
//!
//! Row operations are always exact (BigInt), so every reduction is a
//! unimodular transform of the input by construction. The Gram-Schmidt
//! coefficients live in f64 and are validated whenever they are computed;
//! a failed check triggers an exact rational recomputation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::svp;

/// |mu| <= 1/2 + this after size reduction.
pub const SIZE_REDUCTION_TOL: f64 = 1e-9;
/// Per-coordinate relative tolerance of the GSO recomposition check.
const RECOMPOSITION_TOL: f64 = 1e-9;
/// Relative tolerance of the pairwise star orthogonality check.
const ORTHOGONALITY_TOL: f64 = 1e-6;
/// Relative norm drop that makes a row a dependence suspect.
const DEPENDENCE_SUSPICION: f64 = 1e-9;

/// LLL / BKZ parameters.
#[derive(Debug, Clone)]
pub struct ReductionParams {
    /// Block size, at least 2 and at most the basis rank.
    pub beta: usize,
    /// Reduction quality in (0.5, 1].
    pub delta: f64,
    /// Cap on full BKZ passes.
    pub max_rounds: usize,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams { beta: 20, delta: 0.99, max_rounds: 64 }
    }
}

impl ReductionParams {
    pub fn new(beta: usize, delta: f64) -> Self {
        ReductionParams { beta, delta, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.5 && self.delta <= 1.0) {
            return Err(Error::BadDelta(self.delta));
        }
        if self.beta < 2 {
            return Err(Error::BadBeta { beta: self.beta, rank: usize::MAX });
        }
        Ok(())
    }
}

/// Floating Gram-Schmidt data for the current rows.
#[derive(Debug, Clone)]
pub struct Gso {
    /// Lower-triangular mu[i][j] for j < i; entries projecting onto
    /// zero-norm (dependent or zero) rows are 0.
    pub mu: Vec<Vec<f64>>,
    /// Squared norms of the orthogonalized vectors; exactly 0.0 marks a
    /// dependent or zero row.
    pub norms: Vec<f64>,
    /// The orthogonalized vectors themselves.
    pub star: Vec<Vec<f64>>,
    /// True when the float pass failed validation and the data came from
    /// the exact rational recomputation.
    pub exact_fallback: bool,
}

impl Gso {
    /// Number of rows with nonzero orthogonalized norm.
    pub fn rank(&self) -> usize {
        self.norms.iter().filter(|&&n| n > 0.0).count()
    }
}

#[derive(Debug, Clone)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
    dim: usize,
    gso: Option<Gso>,
}

impl LatticeBasis {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyBasis);
        }
        let dim = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::LengthMismatch { expected: dim, got: bad.len() });
        }
        Ok(LatticeBasis { rows, dim, gso: None })
    }

    pub fn from_i64(rows: Vec<Vec<i64>>) -> Result<Self> {
        LatticeBasis::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn row_norm_sq(&self, i: usize) -> BigInt {
        self.rows[i].iter().map(|v| v * v).sum()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.rows[i].iter().all(|v| v.is_zero())
    }

    pub fn gso_valid(&self) -> bool {
        self.gso.is_some()
    }

    pub fn gso_ref(&self) -> Option<&Gso> {
        self.gso.as_ref()
    }

    /// Returns the Gram-Schmidt data, recomputing it when stale.
    pub fn gso(&mut self) -> Result<&Gso> {
        if self.gso.is_none() {
            self.gso = Some(compute_gso(&self.rows)?);
        }
        Ok(self.gso.as_ref().expect("just computed"))
    }

    fn invalidate(&mut self) {
        self.gso = None;
    }

    /// Independent-row count, decided exactly for degenerate inputs.
    pub fn rank(&mut self) -> Result<usize> {
        Ok(self.gso()?.rank())
    }

    /// Moves exactly-zero rows to the front, preserving the order of the
    /// nonzero rows. Returns the number of zero rows.
    fn move_zero_rows_front(&mut self) -> usize {
        let (zeros, tail): (Vec<_>, Vec<_>) = std::mem::take(&mut self.rows)
            .into_iter()
            .partition(|r| r.iter().all(|v| v.is_zero()));
        let z = zeros.len();
        let moved = z > 0 && !tail.is_empty();
        self.rows = zeros;
        self.rows.extend(tail);
        if moved {
            self.invalidate();
        }
        z
    }

    /// Removes exactly-zero rows (the rank is unchanged).
    pub fn prune_zero_rows(&mut self) {
        let before = self.rows.len();
        self.rows.retain(|r| !r.iter().all(|v| v.is_zero()));
        if self.rows.len() != before {
            self.invalidate();
        }
    }

    /// One full size-reduction pass: afterwards all |mu[i][j]| are at most
    /// 1/2 up to [`SIZE_REDUCTION_TOL`]. Row operations are exact, so the
    /// lattice is unchanged.
    pub fn size_reduce(&mut self) -> Result<()> {
        let z = self.move_zero_rows_front();
        let mut state = LllState::new(&mut self.rows, z)?;
        for k in 0..state.r {
            state.compute_row(k);
            state.reduce_row(k);
        }
        self.invalidate();
        Ok(())
    }

    /// LLL reduction with quality `delta` in (0.5, 1). Dependent rows
    /// collapse to zero vectors which end up in front of the basis.
    pub fn lll(&mut self, delta: f64) -> Result<()> {
        if !(delta > 0.5 && delta < 1.0) {
            return Err(Error::BadDelta(delta));
        }
        self.collapse_dependent_rows()?;
        let z = self.move_zero_rows_front();
        self.lll_core(z, delta)?;
        self.invalidate();
        Ok(())
    }

    /// Turns linearly dependent rows into exact zero rows at the front.
    fn collapse_dependent_rows(&mut self) -> Result<()> {
        let mut guard = 0;
        loop {
            self.move_zero_rows_front();
            let rows = &self.rows;
            let g = self.gso.get_or_insert(compute_gso(rows)?);
            let dependent = g
                .norms
                .iter()
                .zip(rows)
                .any(|(&n, row)| n == 0.0 && !row.iter().all(|v| v.is_zero()));
            if !dependent {
                return Ok(());
            }
            self.echelon_collapse();
            guard += 1;
            if guard > self.rows.len() + 1 {
                return Err(Error::Internal("dependence collapse did not converge".into()));
            }
        }
    }

    /// Block Korkin-Zolotarev reduction following the Schnorr-Euchner loop:
    /// LLL first, then slide a window of `beta`, solve SVP on each projected
    /// block by enumeration, insert improving vectors, and re-run LLL after
    /// each insertion. Terminates after a pass with no insertion or at
    /// `max_rounds`.
    pub fn bkz(&mut self, params: &ReductionParams) -> Result<()> {
        params.validate()?;
        let inner_delta = params.delta.min(0.99);
        self.lll(inner_delta)?;
        let z = self.move_zero_rows_front();
        let rank = self.rows.len() - z;
        if params.beta > rank {
            return Err(Error::BadBeta { beta: params.beta, rank });
        }
        if rank < 2 {
            return Ok(());
        }
        for _round in 0..params.max_rounds {
            let mut improved = false;
            for i in 0..rank - 1 {
                let l = (i + params.beta - 1).min(rank - 1);
                let g = self.gso()?;
                let mu: Vec<Vec<f64>> =
                    g.mu[z + i..=z + l].iter().map(|row| row[z + i..=z + l].to_vec()).collect();
                let norms: Vec<f64> = g.norms[z + i..=z + l].to_vec();
                if norms.iter().any(|&n| n <= 0.0) {
                    return Err(Error::Internal("zero GSO norm inside a BKZ block".into()));
                }
                let target = norms[0];
                let Some((coeffs, best)) = svp::block_shortest(&mu, &norms, target * (1.0 + 1e-9))
                else {
                    continue;
                };
                let trivial = coeffs[0].abs() == 1 && coeffs[1..].iter().all(|&c| c == 0);
                if trivial || best >= params.delta * target {
                    continue;
                }
                self.insert_block_vector(z + i, z + l, &coeffs);
                self.lll_core(z, inner_delta)?;
                self.invalidate();
                improved = true;
            }
            if !improved {
                break;
            }
        }
        Ok(())
    }

    /// Replaces rows [lo, hi] by U * rows where U is unimodular with first
    /// row `coeffs`, so the new first row is the enumerated block vector and
    /// the lattice is unchanged with no rank loss.
    fn insert_block_vector(&mut self, lo: usize, hi: usize, coeffs: &[i64]) {
        debug_assert_eq!(coeffs.len(), hi - lo + 1);
        let mut x: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let g = x.iter().fold(BigInt::zero(), |acc, v| num_integer::gcd(acc, v.abs()));
        if g > BigInt::from(1) {
            for v in x.iter_mut() {
                *v /= &g;
            }
        }
        let u = unimodular_with_first_row(&x);
        let old: Vec<Vec<BigInt>> = self.rows[lo..=hi].to_vec();
        for (bi, urow) in u.iter().enumerate() {
            let mut new_row = vec![BigInt::zero(); self.dim];
            for (c, old_row) in urow.iter().zip(&old) {
                if c.is_zero() {
                    continue;
                }
                for (nv, ov) in new_row.iter_mut().zip(old_row) {
                    *nv += c * ov;
                }
            }
            self.rows[lo + bi] = new_row;
        }
        self.invalidate();
    }

    /// Integer row-echelon pass (unimodular row operations only) that turns
    /// dependent rows into exact zero rows.
    fn echelon_collapse(&mut self) {
        let n = self.rows.len();
        let mut pivot_row = 0;
        for col in 0..self.dim {
            if pivot_row == n {
                break;
            }
            loop {
                let mut best: Option<(usize, BigInt)> = None;
                for i in pivot_row..n {
                    let v = self.rows[i][col].abs();
                    if v.is_zero() {
                        continue;
                    }
                    match &best {
                        Some((_, bv)) if *bv <= v => {}
                        _ => best = Some((i, v)),
                    }
                }
                let Some((bi, _)) = best else { break };
                self.rows.swap(pivot_row, bi);
                let mut done = true;
                let (head, tail) = self.rows.split_at_mut(pivot_row + 1);
                let pivot = &head[pivot_row];
                for r in tail.iter_mut() {
                    if r[col].is_zero() {
                        continue;
                    }
                    let q = rounded_div(&r[col], &pivot[col]);
                    if !q.is_zero() {
                        for (rv, p) in r.iter_mut().zip(pivot.iter()) {
                            *rv -= &q * p;
                        }
                    }
                    if !r[col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    pivot_row += 1;
                    break;
                }
            }
        }
        self.invalidate();
    }

    /// Core LLL loop over the independent rows starting at `z`.
    fn lll_core(&mut self, z: usize, delta: f64) -> Result<()> {
        let mut state = LllState::new(&mut self.rows, z)?;
        if state.r < 2 {
            return Ok(());
        }
        let max_steps: u64 = 1_000_000 + 4_000 * (state.r as u64) * (state.r as u64);
        let mut steps = 0u64;
        state.compute_row(0);
        let mut k = 1usize;
        while k < state.r {
            steps += 1;
            if steps > max_steps {
                return Err(Error::Internal("LLL exceeded its step budget".into()));
            }
            state.compute_row(k);
            state.reduce_row(k);
            if state.norms[k] <= 0.0 {
                return Err(Error::Internal("LLL encountered a dependent row".into()));
            }
            let lhs = delta * state.norms[k - 1];
            let rhs = state.norms[k] + state.mu[k][k - 1].powi(2) * state.norms[k - 1];
            if lhs > rhs * (1.0 + 1e-12) {
                state.rows.swap(z + k - 1, z + k);
                if k == 1 {
                    // Row 0 is refreshed here; deeper rows are refreshed
                    // when the loop index reaches them again.
                    state.compute_row(0);
                }
                k = k.max(2) - 1;
            } else {
                k += 1;
            }
        }
        Ok(())
    }

    /// Exact Gram determinant of the nonzero rows, via Bareiss elimination
    /// on the Gram matrix.
    pub fn gram_det(&self) -> BigInt {
        let rows: Vec<&Vec<BigInt>> =
            self.rows.iter().filter(|r| !r.iter().all(|v| v.is_zero())).collect();
        let r = rows.len();
        if r == 0 {
            return BigInt::from(1);
        }
        let mut g = vec![vec![BigInt::zero(); r]; r];
        for i in 0..r {
            for j in 0..=i {
                let v: BigInt = rows[i].iter().zip(rows[j].iter()).map(|(a, b)| a * b).sum();
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        bareiss_det(g)
    }

    /// Expresses `v` as an integer combination of the rows, when possible.
    /// Rows must be linearly independent.
    pub fn express(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        // Solve x * B = v exactly over the rationals, then demand
        // integrality: d equations (coordinates), r unknowns.
        let r = self.rows.len();
        let mut aug: Vec<Vec<BigRational>> = (0..self.dim)
            .map(|c| {
                let mut row: Vec<BigRational> =
                    (0..r).map(|i| BigRational::from(self.rows[i][c].clone())).collect();
                row.push(BigRational::from(v[c].clone()));
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut eq = 0usize;
        for unknown in 0..r {
            let p = (eq..aug.len()).find(|&i| !aug[i][unknown].is_zero())?;
            aug.swap(eq, p);
            let inv = aug[eq][unknown].recip();
            for val in aug[eq].iter_mut() {
                *val *= &inv;
            }
            for i in 0..aug.len() {
                if i != eq && !aug[i][unknown].is_zero() {
                    let f = aug[i][unknown].clone();
                    for c in 0..=r {
                        let s = &f * &aug[eq][c];
                        aug[i][c] -= s;
                    }
                }
            }
            pivots.push((eq, unknown));
            eq += 1;
        }
        for row in aug.iter().skip(eq) {
            if !row[r].is_zero() {
                return None;
            }
        }
        let mut sol = vec![BigInt::zero(); r];
        for (erow, unknown) in pivots {
            let val = &aug[erow][r];
            if !val.is_integer() {
                return None;
            }
            sol[unknown] = val.to_integer();
        }
        Some(sol)
    }

    /// Applies a random unimodular transform: a row shuffle plus small
    /// integer row additions. Used to diversify repeated harvest passes.
    pub fn randomize_unimodular<R: Rng>(&mut self, rng: &mut R) {
        let n = self.rows.len();
        if n < 2 {
            return;
        }
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            self.rows.swap(i, j);
        }
        let choices = [-2i64, -1, 1, 2];
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            if i == j {
                j = (j + 1) % n;
            }
            let c = BigInt::from(choices[rng.gen_range(0..choices.len())]);
            let (dst, src) = if i < j {
                let (head, tail) = self.rows.split_at_mut(j);
                (&mut head[i], &tail[0])
            } else {
                let (head, tail) = self.rows.split_at_mut(i);
                (&mut tail[0], &head[j])
            };
            for (av, bv) in dst.iter_mut().zip(src.iter()) {
                *av += &c * bv;
            }
        }
        self.invalidate();
    }

    /// Max |mu[i][j]| over the current GSO.
    pub fn max_abs_mu(&mut self) -> Result<f64> {
        let g = self.gso()?;
        Ok(g
            .mu
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row[..i].iter().map(|v| v.abs()))
            .fold(0.0, f64::max))
    }

    /// Checks |mu[i][j]| <= 1/2 + tol.
    pub fn is_size_reduced(&mut self, tol: f64) -> Result<bool> {
        Ok(self.max_abs_mu()? <= 0.5 + tol)
    }

    /// Checks the Lovasz condition delta*|b[i-1]*|^2 <= |b[i]*|^2 +
    /// mu[i][i-1]^2 * |b[i-1]*|^2 on consecutive independent rows.
    pub fn lovasz_satisfied(&mut self, delta: f64, rel_tol: f64) -> Result<bool> {
        let g = self.gso()?;
        for i in 1..g.norms.len() {
            if g.norms[i] == 0.0 || g.norms[i - 1] == 0.0 {
                continue;
            }
            let lhs = delta * g.norms[i - 1];
            let rhs = g.norms[i] + g.mu[i][i - 1].powi(2) * g.norms[i - 1];
            if lhs > rhs * (1.0 + rel_tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verifies the block condition delta^2 * |b_i*|^2 <= lambda_1^2(L_i)
    /// by enumerating every projected block.
    pub fn block_condition_satisfied(
        &mut self,
        params: &ReductionParams,
        rel_tol: f64,
    ) -> Result<bool> {
        let z = self.move_zero_rows_front();
        let g = self.gso()?.clone();
        let rank = g.norms.len() - z;
        for i in 0..rank {
            let l = (i + params.beta - 1).min(rank - 1);
            let mu: Vec<Vec<f64>> =
                g.mu[z + i..=z + l].iter().map(|row| row[z + i..=z + l].to_vec()).collect();
            let norms: Vec<f64> = g.norms[z + i..=z + l].to_vec();
            if norms.iter().any(|&n| n <= 0.0) {
                return Err(Error::InvalidGso);
            }
            let lambda_sq = svp::block_shortest(&mu, &norms, norms[0] * (1.0 + 1e-9))
                .map(|(_, n)| n)
                .unwrap_or(norms[0]);
            if params.delta.powi(2) * norms[0] > lambda_sq * (1.0 + rel_tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Progressive float GSO state shared by size reduction and LLL.
struct LllState<'a> {
    rows: &'a mut Vec<Vec<BigInt>>,
    z: usize,
    r: usize,
    dim: usize,
    mu: Vec<Vec<f64>>,
    norms: Vec<f64>,
    star: Vec<Vec<f64>>,
}

impl<'a> LllState<'a> {
    fn new(rows: &'a mut Vec<Vec<BigInt>>, z: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let r = rows.len() - z;
        let dim = rows[0].len();
        Ok(LllState {
            rows,
            z,
            r,
            dim,
            mu: vec![vec![0.0; r]; r],
            norms: vec![0.0; r],
            star: vec![Vec::new(); r],
        })
    }

    /// Recomputes star/mu/norms for row k from the exact row and the
    /// current earlier stars.
    fn compute_row(&mut self, k: usize) {
        let mut v: Vec<f64> =
            self.rows[self.z + k].iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
        for j in 0..k {
            if self.norms[j] <= 0.0 {
                self.mu[k][j] = 0.0;
                continue;
            }
            let m = dot(&v, &self.star[j]) / self.norms[j];
            self.mu[k][j] = m;
            for (vc, sc) in v.iter_mut().zip(&self.star[j]) {
                *vc -= m * sc;
            }
        }
        self.norms[k] = dot(&v, &v);
        self.star[k] = v;
        let _ = self.dim;
    }

    /// Size-reduces row k against all earlier rows with exact integer row
    /// operations and the textbook inline mu updates, then recomputes the
    /// row from scratch; repeats in the rare case a huge mu left residue.
    fn reduce_row(&mut self, k: usize) {
        for _attempt in 0..8 {
            let mut changed = false;
            for j in (0..k).rev() {
                if self.norms[j] <= 0.0 {
                    continue;
                }
                let m = self.mu[k][j];
                if !(m.abs() > 0.5 + SIZE_REDUCTION_TOL) {
                    continue;
                }
                let rounded = m.round();
                let Some(c) = BigInt::from_f64(rounded) else { continue };
                let (head, tail) = self.rows.split_at_mut(self.z + k);
                let target = &mut tail[0];
                let source = &head[self.z + j];
                for (tv, sv) in target.iter_mut().zip(source.iter()) {
                    *tv -= &c * sv;
                }
                for i in 0..j {
                    self.mu[k][i] -= rounded * self.mu[j][i];
                }
                self.mu[k][j] -= rounded;
                changed = true;
            }
            if !changed {
                return;
            }
            self.compute_row(k);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest-integer quotient (ties away from zero).
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    BigRational::new(a.clone(), b.clone()).round().to_integer()
}

/// Full GSO with validation; falls back to the exact rational computation
/// when the float pass looks degenerate.
fn compute_gso(rows: &[Vec<BigInt>]) -> Result<Gso> {
    if rows.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let r = rows.len();
    let dim = rows[0].len();
    let frows: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().map(|v| v.to_f64().unwrap_or(f64::MAX)).collect())
        .collect();
    let mut mu = vec![vec![0.0; r]; r];
    let mut norms = vec![0.0; r];
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut suspicious = false;
    for i in 0..r {
        let mut v = frows[i].clone();
        for j in 0..i {
            if norms[j] <= 0.0 {
                mu[i][j] = 0.0;
                continue;
            }
            let m = dot(&v, &star[j]) / norms[j];
            mu[i][j] = m;
            for (vc, sc) in v.iter_mut().zip(&star[j]) {
                *vc -= m * sc;
            }
        }
        if rows[i].iter().all(|x| x.is_zero()) {
            norms[i] = 0.0;
            star.push(vec![0.0; dim]);
            continue;
        }
        let n = dot(&v, &v);
        let full = dot(&frows[i], &frows[i]);
        if n < DEPENDENCE_SUSPICION * full.max(1.0) {
            suspicious = true;
        }
        norms[i] = n;
        star.push(v);
    }
    if !suspicious && !validate_gso(&frows, &mu, &norms, &star) {
        suspicious = true;
    }
    if !suspicious {
        return Ok(Gso { mu, norms, star, exact_fallback: false });
    }
    Ok(exact_gso(rows))
}

/// Exact rational Gram-Schmidt; dependence becomes an exact zero norm.
fn exact_gso(rows: &[Vec<BigInt>]) -> Gso {
    let r = rows.len();
    let dim = rows[0].len();
    let mut mu = vec![vec![0.0; r]; r];
    let mut norms = vec![0.0; r];
    let mut star_f = vec![vec![0.0; dim]; r];
    let mut star_q: Vec<Vec<BigRational>> = Vec::with_capacity(r);
    let mut norms_q: Vec<BigRational> = Vec::with_capacity(r);
    for i in 0..r {
        let mut v: Vec<BigRational> =
            rows[i].iter().map(|x| BigRational::from(x.clone())).collect();
        for j in 0..i {
            if norms_q[j].is_zero() {
                continue;
            }
            let num: BigRational = v.iter().zip(&star_q[j]).map(|(a, b)| a * b).sum();
            let m = &num / &norms_q[j];
            mu[i][j] = m.to_f64().unwrap_or(0.0);
            for (vc, sc) in v.iter_mut().zip(&star_q[j]) {
                let s = &m * sc;
                *vc -= s;
            }
        }
        let n: BigRational = v.iter().map(|a| a * a).sum();
        norms[i] = n.to_f64().unwrap_or(0.0);
        for (c, val) in v.iter().enumerate() {
            star_f[i][c] = val.to_f64().unwrap_or(0.0);
        }
        norms_q.push(n);
        star_q.push(v);
    }
    Gso { mu, norms, star: star_f, exact_fallback: true }
}

/// Recomposition and pairwise orthogonality checks on the float GSO.
fn validate_gso(frows: &[Vec<f64>], mu: &[Vec<f64>], norms: &[f64], star: &[Vec<f64>]) -> bool {
    let r = frows.len();
    for i in 0..r {
        // b_i = b_i* + sum_j mu[i][j] b_j*
        for c in 0..frows[i].len() {
            let mut recon = star[i][c];
            for j in 0..i {
                recon += mu[i][j] * star[j][c];
            }
            let scale = frows[i][c].abs().max(1.0);
            if (recon - frows[i][c]).abs() > RECOMPOSITION_TOL * scale {
                return false;
            }
        }
        for j in 0..i {
            if norms[i] <= 0.0 || norms[j] <= 0.0 {
                continue;
            }
            let ip = dot(&star[i], &star[j]);
            if ip.abs() > ORTHOGONALITY_TOL * (norms[i] * norms[j]).sqrt() {
                return false;
            }
        }
    }
    true
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// A unimodular matrix whose first row equals the primitive vector `x`.
///
/// `x` is reduced to a unit vector by elementary column operations; the
/// inverse operations applied in reverse to the identity give a matrix U
/// with x * (recorded ops) = e_1, hence e_1 * U = x as its first row.
fn unimodular_with_first_row(x: &[BigInt]) -> Vec<Vec<BigInt>> {
    enum Op {
        Swap(usize, usize),
        /// w[to] += c * w[from]
        AddMul(usize, usize, BigInt),
        Negate(usize),
    }
    let b = x.len();
    let mut w: Vec<BigInt> = x.to_vec();
    let mut ops: Vec<Op> = Vec::new();
    loop {
        let nz: Vec<usize> = (0..b).filter(|&i| !w[i].is_zero()).collect();
        if nz.len() <= 1 {
            let i = nz.first().copied().expect("x must be nonzero");
            if i != 0 {
                w.swap(0, i);
                ops.push(Op::Swap(0, i));
            }
            if w[0].is_negative() {
                w[0] = -w[0].clone();
                ops.push(Op::Negate(0));
            }
            debug_assert_eq!(w[0], BigInt::from(1), "x must be primitive");
            break;
        }
        let mut idx = nz;
        idx.sort_by_key(|&i| w[i].abs());
        let (s, l) = (idx[0], idx[1]);
        let q = rounded_div(&w[l], &w[s]);
        let c = -&q;
        let delta = &q * &w[s];
        w[l] -= delta;
        ops.push(Op::AddMul(l, s, c));
    }
    // Apply the inverse ops in reverse, as column operations on I.
    let mut u: Vec<Vec<BigInt>> = (0..b)
        .map(|i| (0..b).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();
    for op in ops.iter().rev() {
        match op {
            Op::Swap(a, c) => {
                for row in u.iter_mut() {
                    row.swap(*a, *c);
                }
            }
            Op::AddMul(to, from, c) => {
                // inverse of col[to] += c*col[from] is col[to] -= c*col[from]
                for row in u.iter_mut() {
                    let s = c * &row[*from];
                    row[*to] -= s;
                }
            }
            Op::Negate(a) => {
                for row in u.iter_mut() {
                    row[*a] = -row[*a].clone();
                }
            }
        }
    }
    u
}
