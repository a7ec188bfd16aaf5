//! Linear block codes over a finite field.
//!
//! A code is held as a full-rank generator matrix together with an
//! eagerly computed parity-check matrix, so membership is always a
//! syndrome test. The brute-force minimum-distance search here is the
//! independent oracle the lattice pipeline is checked against.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::Matrix;

/// Refuse brute-force enumeration beyond this many messages by default.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 28;

#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Field,
    n: usize,
    k: usize,
    gen: Matrix,
    check: Matrix,
    sys_perm: Option<Vec<usize>>,
}

/// A length-n vector of canonical symbol values over the code's field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    symbols: Vec<u64>,
}

impl Codeword {
    pub fn new(symbols: Vec<u64>) -> Self {
        Codeword { symbols }
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.symbols.iter().all(|&s| s == 0)
    }

    /// Hamming weight: the number of nonzero symbols.
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    /// Scalar multiple over the given field.
    pub fn scaled(&self, field: Field, c: u64) -> Codeword {
        Codeword { symbols: self.symbols.iter().map(|&s| field.mul_raw(s, c)).collect() }
    }
}

/// Options for the brute-force oracle.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Stop as soon as a word of weight <= cap is found (sequential scan).
    pub cap: Option<usize>,
    /// Refuse when q^k exceeds this.
    pub max_messages: u128,
    /// Message-space partitions for the full scan.
    pub threads: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { cap: None, max_messages: DEFAULT_ORACLE_BUDGET, threads: 1 }
    }
}

impl LinearCode {
    /// Builds a code from generator rows, dropping linearly dependent rows
    /// (the spanned codeword set is unchanged).
    pub fn from_generator(m: Matrix) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        let field = m.field();
        let n = m.cols();
        // Keep the earliest maximal independent subset of the given rows,
        // tracked with an incremental elimination.
        let mut kept: Vec<Vec<u64>> = Vec::new();
        let mut reduced: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot col, reduced row)
        for r in 0..m.rows() {
            let mut row = m.row(r).to_vec();
            for (p, red) in &reduced {
                let factor = row[*p];
                if factor != 0 {
                    for (a, b) in row.iter_mut().zip(red) {
                        *a = field.sub_raw(*a, field.mul_raw(factor, *b));
                    }
                }
            }
            if let Some(p) = row.iter().position(|&v| v != 0) {
                let inv = field.inv_raw(row[p]).expect("nonzero pivot");
                for v in row.iter_mut() {
                    *v = field.mul_raw(*v, inv);
                }
                reduced.push((p, row));
                kept.push(m.row(r).to_vec());
            }
        }
        let gen = Matrix::from_rows(field, kept)?;
        let check = parity_from_generator(&gen)?;
        Ok(LinearCode { field, n, k: gen.rows(), gen, check, sys_perm: None })
    }

    /// Builds the code whose parity-check matrix is `h`.
    pub fn from_parity(h: Matrix) -> Result<Self> {
        let gen = h.nullspace().ok_or(Error::TrivialCode)?;
        let field = h.field();
        let n = h.cols();
        let k = gen.rows();
        debug_assert!(gen.mul(&h.transpose())?.is_zero());
        // Keep the caller's H when it already has full rank, otherwise
        // recompute one from the generator.
        let check = if h.rank() == n - k { h } else { parity_from_generator(&gen)? };
        Ok(LinearCode { field, n, k, gen, check, sys_perm: None })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.check
    }

    /// Column permutation recorded by `systematic_form`: entry j is the
    /// original column now at position j.
    pub fn sys_perm(&self) -> Option<&[usize]> {
        self.sys_perm.as_deref()
    }

    /// True when the generator literally starts with the k x k identity.
    pub fn is_systematic(&self) -> bool {
        (0..self.k).all(|i| (0..self.k).all(|j| self.gen.get(i, j) == u64::from(i == j)))
    }

    /// Gaussian elimination to (I_k | A), swapping a column only when the
    /// pivot column is zero below the row cursor. Returns the permuted code
    /// and the permutation (entry j = original column at position j).
    pub fn systematic_form(&self) -> (LinearCode, Vec<usize>) {
        let f = self.field;
        let mut g = self.gen.clone();
        let mut perm: Vec<usize> = (0..self.n).collect();
        for r in 0..self.k {
            if (r..self.n).all(|c| (r..self.k).all(|i| g.get(i, c) == 0)) {
                unreachable!("generator has full row rank");
            }
            if (r..self.k).all(|i| g.get(i, r) == 0) {
                let c = (r + 1..self.n)
                    .find(|&c| (r..self.k).any(|i| g.get(i, c) != 0))
                    .expect("full rank guarantees a pivot column");
                g.swap_cols(r, c);
                perm.swap(r, c);
            }
            let p = (r..self.k).find(|&i| g.get(i, r) != 0).unwrap();
            g.swap_rows(r, p);
            let inv = f.inv_raw(g.get(r, r)).expect("pivot nonzero");
            if inv != 1 {
                for j in 0..self.n {
                    let v = g.get(r, j);
                    g.set(r, j, f.mul_raw(v, inv));
                }
            }
            for i in 0..self.k {
                if i == r {
                    continue;
                }
                let factor = g.get(i, r);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.n {
                    let v = g.get(i, j);
                    let s = f.mul_raw(factor, g.get(r, j));
                    g.set(i, j, f.sub_raw(v, s));
                }
            }
        }
        let check = parity_from_generator(&g).expect("systematic generator");
        let code = LinearCode {
            field: f,
            n: self.n,
            k: self.k,
            gen: g,
            check,
            sys_perm: Some(perm.clone()),
        };
        (code, perm)
    }

    /// Maps a codeword of the systematic (permuted) code back to the
    /// coordinate order of the original code using the recorded permutation.
    pub fn unpermute(w: &Codeword, perm: &[usize]) -> Codeword {
        let mut out = vec![0u64; w.len()];
        for (j, &orig) in perm.iter().enumerate() {
            out[orig] = w.symbols()[j];
        }
        Codeword::new(out)
    }

    pub fn encode(&self, msg: &[u64]) -> Result<Codeword> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        Ok(Codeword::new(self.gen.vec_mul(msg)?))
    }

    /// Syndrome test H * w^T = 0.
    pub fn contains(&self, w: &Codeword) -> bool {
        if w.len() != self.n {
            return false;
        }
        let f = self.field;
        for r in 0..self.check.rows() {
            let mut acc = 0u64;
            for c in 0..self.n {
                let h = self.check.get(r, c);
                let s = w.symbols()[c];
                if h != 0 && s != 0 {
                    acc = f.add_raw(acc, f.mul_raw(h, s));
                }
            }
            if acc != 0 {
                return false;
            }
        }
        true
    }

    /// Exhaustive minimum-distance search over all q^k - 1 nonzero
    /// messages. Deterministic regardless of thread count: ties break to
    /// the lexicographically least codeword.
    pub fn brute_force_distance(&self, cfg: &OracleConfig) -> Result<(usize, Codeword)> {
        let total = (self.field.q() as u128)
            .checked_pow(self.k as u32)
            .ok_or(Error::BudgetExceeded(u128::MAX))?;
        if total > cfg.max_messages {
            return Err(Error::BudgetExceeded(total));
        }
        let total = total as u64;
        if let Some(cap) = cfg.cap {
            // Early-exit scans run sequentially so the result does not
            // depend on scheduling.
            let mut best: Option<(usize, Codeword)> = None;
            for idx in 1..total {
                let w = self.encode(&self.message_for(idx))?;
                let wt = w.weight();
                if wt == 0 {
                    continue;
                }
                if wt <= cap {
                    return Ok((wt, w));
                }
                match &best {
                    Some((bw, bcw)) if (*bw, bcw) <= (wt, &w) => {}
                    _ => best = Some((wt, w)),
                }
            }
            return best.ok_or(Error::ZeroMatrix);
        }
        let threads = cfg.threads.max(1).min(total.max(2) as usize - 1);
        let best = if threads <= 1 {
            self.scan_messages(1, total)
        } else {
            let chunk = (total - 1).div_ceil(threads as u64);
            let mut results = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for t in 0..threads as u64 {
                    let lo = 1 + t * chunk;
                    let hi = (lo + chunk).min(total);
                    if lo >= hi {
                        continue;
                    }
                    handles.push(scope.spawn(move || self.scan_messages(lo, hi)));
                }
                for h in handles {
                    results.push(h.join().expect("oracle worker panicked"));
                }
            });
            results
                .into_iter()
                .flatten()
                .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        };
        let (w, cw) = best.ok_or(Error::ZeroMatrix)?;
        Ok((w, cw))
    }

    fn scan_messages(&self, lo: u64, hi: u64) -> Option<(usize, Codeword)> {
        let mut best: Option<(usize, Codeword)> = None;
        for idx in lo..hi {
            let w = self.encode(&self.message_for(idx)).expect("message has length k");
            let wt = w.weight();
            if wt == 0 {
                continue;
            }
            match &best {
                Some((bw, bcw)) if (*bw, bcw) <= (wt, &w) => {}
                _ => best = Some((wt, w)),
            }
        }
        best
    }

    /// Message with base-q digits of `idx` (digit i = symbol i).
    fn message_for(&self, mut idx: u64) -> Vec<u64> {
        let q = self.field.q();
        let mut msg = vec![0u64; self.k];
        for slot in msg.iter_mut() {
            *slot = idx % q;
            idx /= q;
            if idx == 0 {
                break;
            }
        }
        msg
    }

    /// Expands a GF(2^m) code to its [mn, mk] binary image: generator row
    /// (i, j) is the bit expansion of the codeword x^j * g_i, so image
    /// codewords are exactly the symbol-wise bit expansions.
    pub fn binary_image(&self) -> Result<LinearCode> {
        let m = match self.field {
            Field::Ext { m, .. } => m as usize,
            Field::Prime { .. } => return Err(Error::ExtensionFieldRequired),
        };
        let gf2 = Field::gf2();
        let mut rows = Vec::with_capacity(self.k * m);
        for i in 0..self.k {
            // regular_rep(g) columns are the expansions of g * x^j.
            let reps: Vec<_> = (0..self.n)
                .map(|t| {
                    let e = self.field.elem(self.gen.get(i, t)).expect("canonical entry");
                    self.field.regular_rep(e).expect("extension field")
                })
                .collect();
            for j in 0..m {
                let mut row = Vec::with_capacity(self.n * m);
                for rep in &reps {
                    let bits = rep.col(j);
                    for l in 0..m {
                        row.push((bits >> l) & 1);
                    }
                }
                rows.push(row);
            }
        }
        LinearCode::from_generator(Matrix::from_rows(gf2, rows)?)
    }

    /// Bit expansion of a codeword of this code into the binary image.
    pub fn expand_codeword(&self, w: &Codeword) -> Result<Codeword> {
        let m = match self.field {
            Field::Ext { m, .. } => m as usize,
            Field::Prime { .. } => return Err(Error::ExtensionFieldRequired),
        };
        let mut bits = Vec::with_capacity(w.len() * m);
        for &s in w.symbols() {
            for l in 0..m {
                bits.push((s >> l) & 1);
            }
        }
        Ok(Codeword::new(bits))
    }
}

/// Parity-check from a generator: bring G to RREF with pivots P and free
/// columns F; row f of H has -1 at f and the RREF column entries at P.
fn parity_from_generator(gen: &Matrix) -> Result<Matrix> {
    let f = gen.field();
    let n = gen.cols();
    let mut g = gen.clone();
    let pivots = g.rref();
    let k = pivots.len();
    debug_assert_eq!(k, gen.rows(), "generator must have full row rank");
    if k == n {
        // Full-space code: a single all-zero syndrome row keeps the
        // membership test uniform.
        return Matrix::from_rows(f, vec![vec![0u64; n]]);
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut rows = Vec::with_capacity(n - k);
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut row = vec![0u64; n];
        row[free] = f.neg_raw(1);
        for (ri, &p) in pivots.iter().enumerate() {
            row[p] = g.get(ri, free);
        }
        rows.push(row);
    }
    Matrix::from_rows(f, rows)
}

/// A quasi-cyclic generator matrix of the (11, 6) ternary Golay code,
/// the golden fixture shared by tests at every layer.
pub fn ternary_golay() -> LinearCode {
    let rows = vec![
        vec![2, 2, 1, 2, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 2, 2, 1, 2, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 2, 2, 1, 2, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 2, 2, 1, 2, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 2, 2, 1, 2, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 2, 2, 1, 2, 0, 1],
    ];
    let m = Matrix::from_rows(Field::gf3(), rows).expect("static matrix");
    LinearCode::from_generator(m).expect("full rank")
}

/// The [7,4] binary Hamming code via its standard parity-check matrix.
pub fn hamming74() -> LinearCode {
    let h = Matrix::from_rows(
        Field::gf2(),
        vec![
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
    )
    .expect("static matrix");
    LinearCode::from_parity(h).expect("nontrivial nullspace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_code(rng: &mut ChaCha8Rng, field: Field, n: usize, k: usize) -> LinearCode {
        loop {
            let rows: Vec<Vec<u64>> =
                (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect()).collect();
            let Ok(m) = Matrix::from_rows(field, rows) else { continue };
            if m.is_zero() {
                continue;
            }
            let c = LinearCode::from_generator(m).unwrap();
            if c.dim() == k {
                return c;
            }
        }
    }

    #[test]
    fn golay_construction() {
        let c = ternary_golay();
        assert_eq!((c.len(), c.dim()), (11, 6));
        assert!(c.generator().mul(&c.parity_check().transpose()).unwrap().is_zero());
    }

    #[test]
    fn identity_generator_full_space() {
        let c = LinearCode::from_generator(Matrix::identity(Field::gf2(), 4)).unwrap();
        assert_eq!((c.len(), c.dim()), (4, 4));
    }

    #[test]
    fn duplicate_rows_dropped() {
        let m = Matrix::from_rows(Field::gf2(), vec![vec![1, 0, 1], vec![1, 0, 1]]).unwrap();
        let c = LinearCode::from_generator(m).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(matches!(
            LinearCode::from_generator(Matrix::zero(Field::gf2(), 2, 3)),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn from_parity_single_check() {
        let h = Matrix::from_rows(Field::gf2(), vec![vec![1, 1, 1]]).unwrap();
        let c = LinearCode::from_parity(h).unwrap();
        assert_eq!((c.len(), c.dim()), (3, 2));
        assert!(matches!(
            LinearCode::from_parity(Matrix::identity(Field::gf2(), 3)),
            Err(Error::TrivialCode)
        ));
    }

    #[test]
    fn hamming_from_parity() {
        let c = hamming74();
        assert_eq!((c.len(), c.dim()), (7, 4));
        assert!(c.generator().mul(&c.parity_check().transpose()).unwrap().is_zero());
        let (d, w) = c.brute_force_distance(&OracleConfig::default()).unwrap();
        assert_eq!(d, 3);
        assert_eq!(w.weight(), 3);
        assert!(c.contains(&w));
    }

    #[test]
    fn systematic_form_identity_when_already_systematic() {
        let m = Matrix::from_rows(Field::gf3(), vec![vec![1, 0, 2, 1], vec![0, 1, 1, 2]]).unwrap();
        let c = LinearCode::from_generator(m.clone()).unwrap();
        let (sys, perm) = c.systematic_form();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        assert_eq!(sys.generator(), &m);
    }

    #[test]
    fn systematic_form_of_golay() {
        // The left 6x6 block of the printed generator is triangular with
        // nonzero diagonal, so leftmost pivoting needs no column swap.
        let c = ternary_golay();
        let (sys, perm) = c.systematic_form();
        assert!(sys.is_systematic());
        assert_eq!(perm, (0..11).collect::<Vec<_>>());
        let d0 = c.brute_force_distance(&OracleConfig::default()).unwrap().0;
        let d1 = sys.brute_force_distance(&OracleConfig::default()).unwrap().0;
        assert_eq!(d0, d1);
    }

    #[test]
    fn systematic_form_needs_column_swap() {
        // Zero pivot column below the cursor forces a swap.
        let m = Matrix::from_rows(Field::gf2(), vec![vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
        let c = LinearCode::from_generator(m).unwrap();
        let (sys, perm) = c.systematic_form();
        assert!(sys.is_systematic());
        assert_ne!(perm, vec![0, 1, 2]);
        // Unpermuted codewords are members of the original code.
        for idx in 1..4u64 {
            let w = sys.encode(&[idx & 1, (idx >> 1) & 1]).unwrap();
            let orig = LinearCode::unpermute(&w, &perm);
            assert!(c.contains(&orig));
            assert_eq!(orig.weight(), w.weight());
        }
    }

    #[test]
    fn systematic_form_preserves_distance_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let c = random_code(&mut rng, Field::gf3(), 8, 4);
            let (sys, _) = c.systematic_form();
            let d0 = c.brute_force_distance(&OracleConfig::default()).unwrap().0;
            let d1 = sys.brute_force_distance(&OracleConfig::default()).unwrap().0;
            assert_eq!(d0, d1);
        }
    }

    #[test]
    fn encode_basics() {
        let c = ternary_golay();
        let zero = c.encode(&[0; 6]).unwrap();
        assert!(zero.is_zero());
        for i in 0..6 {
            let mut msg = [0u64; 6];
            msg[i] = 1;
            assert_eq!(c.encode(&msg).unwrap().symbols(), c.generator().row(i));
        }
        assert!(c.encode(&[0; 5]).is_err());
    }

    #[test]
    fn golay_weight5_word_is_member() {
        // Re-encode the weight-5 word from its information symbols.
        let c = ternary_golay();
        let w = Codeword::new(vec![0, 0, 2, 0, 0, 2, 0, 2, 2, 2, 0]);
        assert_eq!(w.weight(), 5);
        assert!(c.contains(&w));
        let msg = c.generator().solve_left(w.symbols()).unwrap().expect("member");
        assert_eq!(c.encode(&msg).unwrap(), w);
    }

    #[test]
    fn weight_counts_nonzero() {
        assert_eq!(Codeword::new(vec![0; 5]).weight(), 0);
        assert_eq!(Codeword::new(vec![1; 7]).weight(), 7);
        assert_eq!(Codeword::new(vec![0, 0, 2, 0, 0, 2, 0, 2, 2, 2, 0]).weight(), 5);
    }

    #[test]
    fn contains_trivia() {
        let c = ternary_golay();
        assert!(c.contains(&Codeword::new(vec![0; 11])));
        for i in 0..c.dim() {
            assert!(c.contains(&Codeword::new(c.generator().row(i).to_vec())));
        }
        assert!(!c.contains(&Codeword::new(vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn repetition_code_distance() {
        let m = Matrix::from_rows(Field::gf3(), vec![vec![1; 9]]).unwrap();
        let c = LinearCode::from_generator(m).unwrap();
        let (d, w) = c.brute_force_distance(&OracleConfig::default()).unwrap();
        assert_eq!(d, 9);
        assert_eq!(w.weight(), 9);
    }

    #[test]
    fn golay_distance_is_5() {
        let c = ternary_golay();
        let (d, w) = c.brute_force_distance(&OracleConfig::default()).unwrap();
        assert_eq!(d, 5);
        assert!(c.contains(&w));
        assert_eq!(w.weight(), 5);
    }

    #[test]
    fn oracle_budget_refusal() {
        let c = LinearCode::from_generator(Matrix::identity(Field::gf2(), 40)).unwrap();
        let err = c.brute_force_distance(&OracleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(n) if n == 1 << 40));
    }

    #[test]
    fn oracle_cap_early_exit() {
        let c = ternary_golay();
        let cfg = OracleConfig { cap: Some(7), ..OracleConfig::default() };
        let (d, w) = c.brute_force_distance(&cfg).unwrap();
        assert!(d <= 7);
        assert_eq!(w.weight(), d);
        assert!(c.contains(&w));
    }

    #[test]
    fn oracle_thread_invariance() {
        let c = ternary_golay();
        let seq = c.brute_force_distance(&OracleConfig::default()).unwrap();
        let par = c
            .brute_force_distance(&OracleConfig { threads: 4, ..OracleConfig::default() })
            .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn encode_contains_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Field::gf2(), Field::gf3()] {
            let c = random_code(&mut rng, field, 12, 5);
            for _ in 0..100 {
                let msg: Vec<u64> = (0..5).map(|_| rng.gen_range(0..field.q())).collect();
                assert!(c.contains(&c.encode(&msg).unwrap()));
            }
        }
    }

    #[test]
    fn parity_generator_roundtrip_codeword_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let c = random_code(&mut rng, Field::gf2(), 9, 4);
            let back = LinearCode::from_parity(c.parity_check().clone()).unwrap();
            assert_eq!(back.dim(), c.dim());
            // Same codeword set, checked exhaustively.
            let words = |code: &LinearCode| {
                let mut all: Vec<Vec<u64>> = (0..1u64 << code.dim())
                    .map(|i| {
                        let msg: Vec<u64> = (0..code.dim()).map(|b| (i >> b) & 1).collect();
                        code.encode(&msg).unwrap().symbols().to_vec()
                    })
                    .collect();
                all.sort();
                all
            };
            assert_eq!(words(&c), words(&back));
        }
    }

    #[test]
    fn binary_image_of_trivial_gf4_code() {
        let f = Field::extension(2, None).unwrap();
        let c = LinearCode::from_generator(Matrix::from_rows(f, vec![vec![1]]).unwrap()).unwrap();
        let img = c.binary_image().unwrap();
        assert_eq!((img.len(), img.dim()), (2, 2));
        assert_eq!(img.generator(), &Matrix::identity(Field::gf2(), 2));
    }

    #[test]
    fn binary_image_of_gf4_x() {
        let f = Field::extension(2, None).unwrap();
        let c = LinearCode::from_generator(Matrix::from_rows(f, vec![vec![2]]).unwrap()).unwrap();
        let img = c.binary_image().unwrap();
        let (d, _) = img.brute_force_distance(&OracleConfig::default()).unwrap();
        assert_eq!(d, 1);
    }

    #[test]
    fn binary_image_weights_match_expansions() {
        let f = Field::extension(6, None).unwrap();
        let c = LinearCode::from_generator(Matrix::from_rows(f, vec![vec![1, 2]]).unwrap()).unwrap();
        let img = c.binary_image().unwrap();
        assert_eq!((img.len(), img.dim()), (12, 6));
        // Every expanded codeword of c is an image codeword with the
        // bit-expansion weight.
        for a in f.elements().skip(1) {
            let w = c.encode(&[a.value()]).unwrap();
            let bits = c.expand_codeword(&w).unwrap();
            assert!(img.contains(&bits));
            assert_eq!(bits.weight(), w.symbols().iter().map(|s| s.count_ones() as usize).sum());
        }
        let (d, _) = img.brute_force_distance(&OracleConfig::default()).unwrap();
        let min_exp = f
            .elements()
            .skip(1)
            .map(|a| {
                let w = c.encode(&[a.value()]).unwrap();
                c.expand_codeword(&w).unwrap().weight()
            })
            .min()
            .unwrap();
        assert_eq!(d, min_exp);
        assert!(matches!(hamming74().binary_image(), Err(Error::ExtensionFieldRequired)));
    }

    #[test]
    fn binary_image_of_zero_is_zero() {
        let f = Field::extension(2, None).unwrap();
        let c = LinearCode::from_generator(Matrix::from_rows(f, vec![vec![1, 3, 2]]).unwrap())
            .unwrap();
        let z = c.encode(&[0]).unwrap();
        assert!(c.expand_codeword(&z).unwrap().is_zero());
    }
}
