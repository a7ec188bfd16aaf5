//! The four-step distance pipeline: embed, reduce, harvest low-weight
//! candidates from the reduced rows, then certify minimality by
//! enumerating every lattice vector strictly below the best weight.
//!
//! An exhaustive, empty certification enumeration at squared radius
//! w_best - 1 proves d_min = w_best: over GF(2) and GF(3) every codeword
//! has a centered lattice representative whose squared norm equals its
//! Hamming weight, and spurious vectors (multiples of q on one
//! coordinate) are discarded by the syndrome filter.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::{Codeword, LinearCode};
use crate::embed::{embed_general, embed_systematic, extract_codeword, EmbeddedLattice};
use crate::error::{Error, Result};
use crate::lattice::{LatticeBasis, ReductionParams};
use crate::svp::{self, CoordBound, EnumSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The certification enumeration completed exhaustively.
    Certified,
    /// Certification was skipped.
    Heuristic,
    /// Certification hit its node budget; d_best is an upper bound.
    Partial,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Heuristic => "heuristic",
            Status::Partial => "partial",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DistanceConfig {
    /// BKZ block size, clamped to the basis rank.
    pub beta: usize,
    pub delta: f64,
    /// Scaling constant N; 1 routes through the systematic Construction A
    /// embedding, larger values use the tail-augmented general embedding.
    pub scale: u64,
    pub node_budget: u64,
    pub certify: bool,
    pub threads: usize,
    /// Randomized re-reduction passes during harvest.
    pub harvest_rounds: usize,
    /// Use the enumeration radius (n+1) * r_max^2 with the per-coordinate
    /// cap instead of the cheaper w_best - 1 certification radius.
    pub full_radius: bool,
    /// Seed for the harvest re-randomization.
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            beta: 20,
            delta: 0.99,
            scale: 1,
            node_budget: svp::DEFAULT_NODE_BUDGET,
            certify: true,
            threads: 1,
            harvest_rounds: 1,
            full_radius: false,
            seed: 0x1a7d_157,
        }
    }
}

impl DistanceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threads < 1 {
            return Err(Error::Degenerate("thread count must be at least 1"));
        }
        if self.node_budget < 1 {
            return Err(Error::Degenerate("node budget must be at least 1"));
        }
        if !(self.delta > 0.5 && self.delta <= 1.0) {
            return Err(Error::BadDelta(self.delta));
        }
        if self.scale < 1 {
            return Err(Error::BadScale);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct DistanceStats {
    pub nodes: u64,
    pub reduction_rounds: usize,
    pub wall: Duration,
    /// Field the distance was computed over, in CLI spec-string form.
    pub field_spec: String,
    /// Set when the input went through a binary image: (image n, image k).
    pub image_dims: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub d_best: usize,
    /// A nonzero codeword of the input code attaining d_best.
    pub witness: Codeword,
    pub status: Status,
    /// (searched, total) outermost indices of the last certification
    /// enumeration.
    pub progress: (u64, u64),
    pub stats: DistanceStats,
}

/// Observer for long-running stages; all methods have no-op defaults.
pub trait Progress: Sync {
    fn stage(&self, _name: &str) {}
    fn enumeration(&self, _searched: u64, _total: u64) {}
}

pub struct NoProgress;

impl Progress for NoProgress {}

fn check_field(code: &LinearCode) -> Result<()> {
    let q = code.field().q();
    if code.field().is_extension() || !(q == 2 || q == 3) {
        return Err(Error::Unsupported(format!(
            "the lattice pipeline handles GF(2) and GF(3); GF({}) codes go through a binary image",
            q
        )));
    }
    Ok(())
}

fn reduction_params(cfg: &DistanceConfig, rank: usize) -> ReductionParams {
    ReductionParams { beta: cfg.beta.clamp(2, rank.max(2)), delta: cfg.delta, max_rounds: 64 }
}

/// Embeds per the config, BKZ-reduces, prunes zero rows and extracts a
/// codeword from every basis row. Returns deduplicated nonzero candidates
/// of the input code sorted by weight; extra rounds re-randomize the basis
/// with a unimodular transform before re-reducing.
pub fn harvest(code: &LinearCode, cfg: &DistanceConfig) -> Result<Vec<(Codeword, usize)>> {
    cfg.validate()?;
    check_field(code)?;
    let (emb, perm) = if cfg.scale == 1 {
        let (sys, perm) = code.systematic_form();
        (embed_systematic(&sys)?, Some(perm))
    } else {
        (embed_general(code, &BigInt::from(cfg.scale))?, None)
    };
    let candidates = harvest_embedded(&emb, cfg)?;
    let mapped: Vec<(Codeword, usize)> = candidates
        .into_iter()
        .map(|(w, wt)| match &perm {
            Some(p) => (LinearCode::unpermute(&w, p), wt),
            None => (w, wt),
        })
        .collect();
    Ok(mapped)
}

fn harvest_embedded(emb: &EmbeddedLattice, cfg: &DistanceConfig) -> Result<Vec<(Codeword, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let params = reduction_params(cfg, emb.basis().num_rows());
    let mut seen = std::collections::BTreeMap::new();
    for round in 0..cfg.harvest_rounds.max(1) {
        let mut basis = emb.basis().clone();
        if round > 0 {
            basis.randomize_unimodular(&mut rng);
        }
        if basis.num_rows() >= 2 {
            basis.bkz(&params)?;
        }
        basis.prune_zero_rows();
        for row in basis.rows() {
            if let Some((w, wt)) = extract_codeword(row, emb)? {
                seen.entry(w.symbols().to_vec()).or_insert(wt);
            }
        }
    }
    if seen.is_empty() {
        return Err(Error::Internal(
            "a reduced basis of a nontrivial code yielded no nonzero codeword".into(),
        ));
    }
    let mut out: Vec<(Codeword, usize)> =
        seen.into_iter().map(|(symbols, wt)| (Codeword::new(symbols), wt)).collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// One certification pass over the tail-free Construction A lattice of a
/// systematic code: enumerate every vector with squared norm at most
/// w_best - 1 and push each hit through the codeword filter. Returns the
/// lightest surviving codeword if any, whether the enumeration was
/// exhaustive, the outermost progress pair and the node count.
pub fn certify(
    code: &LinearCode,
    w_best: usize,
    cfg: &DistanceConfig,
) -> Result<(Option<(Codeword, usize)>, bool, (u64, u64), u64)> {
    cfg.validate()?;
    check_field(code)?;
    if w_best < 2 {
        return Err(Error::Degenerate("certification needs w_best >= 2"));
    }
    let (sys, perm) = code.systematic_form();
    let ctx = CertContext::new(&sys, cfg)?;
    let (found, exhausted, progress, nodes) = ctx.pass(w_best, cfg, &NoProgress)?;
    let found = found.map(|(w, wt)| (LinearCode::unpermute(&w, &perm), wt));
    Ok((found, exhausted, progress, nodes))
}

/// The reduced certification lattice, reusable across shrinking radii.
struct CertContext {
    emb: EmbeddedLattice,
    reduced: LatticeBasis,
}

impl CertContext {
    fn new(sys: &LinearCode, cfg: &DistanceConfig) -> Result<CertContext> {
        let emb = embed_systematic(sys)?;
        let mut reduced = emb.basis().clone();
        if reduced.num_rows() >= 2 {
            reduced.bkz(&reduction_params(cfg, reduced.num_rows()))?;
        }
        reduced.prune_zero_rows();
        reduced.gso()?;
        Ok(CertContext { emb, reduced })
    }

    fn pass(
        &self,
        w_best: usize,
        cfg: &DistanceConfig,
        progress: &dyn Progress,
    ) -> Result<(Option<(Codeword, usize)>, bool, (u64, u64), u64)> {
        let n = self.emb.code().len();
        let mut spec = EnumSpec::collect_within((w_best - 1) as f64);
        spec.node_budget = cfg.node_budget;
        spec.threads = cfg.threads;
        if cfg.full_radius {
            // Step-4 fidelity: A = (n+1) * r_max^2 with the coordinate cap
            // |v_i| <= r_max, where r_max^2 is the best candidate norm.
            let r_max_sq = w_best as f64;
            spec.radius_sq = (n as f64 + 1.0) * r_max_sq;
            spec.coord_bound = Some(CoordBound {
                r_max: BigInt::from(r_max_sq.sqrt().floor() as i64),
                cols: self.emb.code_cols(),
            });
        }
        let res = svp::enumerate_with_progress(&self.reduced, &spec, &|searched, total| {
            progress.enumeration(searched, total)
        })?;
        let mut best: Option<(Codeword, usize)> = None;
        for v in &res.vectors {
            let Some((w, wt)) = extract_codeword(&v.vector, &self.emb)? else { continue };
            if wt >= w_best {
                continue;
            }
            match &best {
                Some((bw, bwt)) if (*bwt, bw) <= (wt, &w) => {}
                _ => best = Some((w, wt)),
            }
        }
        Ok((best, res.complete, res.top_level_progress, res.nodes_visited))
    }
}

/// Full pipeline: systematic form, harvest, then iterate certification,
/// lowering the bound whenever a lighter word turns up, until the
/// enumeration is exhaustive or the budget runs out.
pub fn min_distance(code: &LinearCode, cfg: &DistanceConfig) -> Result<DistanceResult> {
    min_distance_with_progress(code, cfg, &NoProgress)
}

pub fn min_distance_with_progress(
    code: &LinearCode,
    cfg: &DistanceConfig,
    progress: &dyn Progress,
) -> Result<DistanceResult> {
    cfg.validate()?;
    check_field(code)?;
    let start = Instant::now();
    let field_spec = code.field().spec_string();
    let n = code.len();
    let k = code.dim();
    if k == n {
        // The code is the whole space; a unit vector is a weight-1 word.
        let mut symbols = vec![0u64; n];
        symbols[0] = 1;
        return Ok(DistanceResult {
            d_best: 1,
            witness: Codeword::new(symbols),
            status: Status::Certified,
            progress: (0, 0),
            stats: DistanceStats {
                wall: start.elapsed(),
                field_spec,
                ..DistanceStats::default()
            },
        });
    }

    progress.stage("harvest");
    let candidates = harvest(code, cfg)?;
    let mut reduction_rounds = cfg.harvest_rounds.max(1);
    let (mut witness, mut d_best) = candidates[0].clone();
    let mut nodes = 0u64;
    let mut last_progress = (0u64, 0u64);
    let status;
    if !cfg.certify {
        status = Status::Heuristic;
    } else if d_best == 1 {
        status = Status::Certified;
    } else {
        progress.stage("certify");
        let (sys, perm) = code.systematic_form();
        let ctx = CertContext::new(&sys, cfg)?;
        reduction_rounds += 1;
        loop {
            let (found, exhausted, prog, pass_nodes) = ctx.pass(d_best, cfg, progress)?;
            nodes += pass_nodes;
            last_progress = prog;
            match found {
                Some((w, wt)) => {
                    witness = LinearCode::unpermute(&w, &perm);
                    d_best = wt;
                    if d_best == 1 {
                        status = Status::Certified;
                        break;
                    }
                }
                None => {
                    status = if exhausted { Status::Certified } else { Status::Partial };
                    break;
                }
            }
        }
    }
    debug_assert!(code.contains(&witness) && witness.weight() == d_best);
    Ok(DistanceResult {
        d_best,
        witness,
        status,
        progress: last_progress,
        stats: DistanceStats {
            nodes,
            reduction_rounds,
            wall: start.elapsed(),
            field_spec,
            image_dims: None,
        },
    })
}

/// Distance of the binary image of an extension-field code, with the
/// source field recorded in the stats.
pub fn binary_image_distance(code: &LinearCode, cfg: &DistanceConfig) -> Result<DistanceResult> {
    binary_image_distance_with_progress(code, cfg, &NoProgress)
}

pub fn binary_image_distance_with_progress(
    code: &LinearCode,
    cfg: &DistanceConfig,
    progress: &dyn Progress,
) -> Result<DistanceResult> {
    if !code.field().is_extension() {
        return Err(Error::ExtensionFieldRequired);
    }
    let image = code.binary_image()?;
    let mut result = min_distance_with_progress(&image, cfg, progress)?;
    result.stats.field_spec = code.field().spec_string();
    result.stats.image_dims = Some((image.len(), image.dim()));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{hamming74, ternary_golay, OracleConfig};
    use crate::gf::Field;
    use crate::matrix::Matrix;
    use rand::{Rng, SeedableRng};

    fn random_code(
        rng: &mut ChaCha8Rng,
        field: Field,
        n: usize,
        k: usize,
    ) -> LinearCode {
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
    fn golay_distance_certified() {
        let c = ternary_golay();
        let r = min_distance(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(r.d_best, 5);
        assert_eq!(r.status, Status::Certified);
        assert_eq!(r.witness.weight(), 5);
        assert!(c.contains(&r.witness));
    }

    #[test]
    fn hamming_distance_certified() {
        let c = hamming74();
        let r = min_distance(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(r.d_best, 3);
        assert_eq!(r.status, Status::Certified);
    }

    #[test]
    fn golay_harvest_beta2_n6_finds_weight5_words() {
        let c = ternary_golay();
        let cfg = DistanceConfig {
            beta: 2,
            delta: 0.99,
            scale: 6,
            harvest_rounds: 3,
            ..DistanceConfig::default()
        };
        let candidates = harvest(&c, &cfg).unwrap();
        assert_eq!(candidates[0].1, 5, "lightest harvested candidate has weight 5");
        // Count distinct weight-5 words across candidates and their scalar
        // multiples.
        let mut distinct = std::collections::BTreeSet::new();
        for (w, wt) in &candidates {
            if *wt == 5 {
                distinct.insert(w.symbols().to_vec());
                distinct.insert(w.scaled(c.field(), 2).symbols().to_vec());
            }
        }
        assert!(distinct.len() >= 11, "found {} weight-5 words", distinct.len());
        for s in &distinct {
            let w = Codeword::new(s.clone());
            assert!(c.contains(&w));
            assert_eq!(w.weight(), 5);
        }
    }

    #[test]
    fn repetition_harvest_single_candidate_weight() {
        let c = LinearCode::from_generator(
            Matrix::from_rows(Field::gf3(), vec![vec![1; 7]]).unwrap(),
        )
        .unwrap();
        let candidates = harvest(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(candidates[0].1, 7);
    }

    #[test]
    fn harvest_upper_bounds_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let c = random_code(&mut rng, Field::gf2(), 16, 8);
        let d = c.brute_force_distance(&OracleConfig::default()).unwrap().0;
        let candidates = harvest(&c, &DistanceConfig::default()).unwrap();
        assert!(candidates[0].1 >= d);
    }

    #[test]
    fn certify_golay_exhausts_at_5() {
        let c = ternary_golay();
        let (found, exhausted, _, _) = certify(&c, 5, &DistanceConfig::default()).unwrap();
        assert!(found.is_none());
        assert!(exhausted);
        // and finds a weight-d word when started one higher
        let (found, _, _, _) = certify(&c, 6, &DistanceConfig::default()).unwrap();
        let (w, wt) = found.expect("weight-5 word below 6");
        assert_eq!(wt, 5);
        assert!(c.contains(&w));
    }

    #[test]
    fn certify_down_from_oracle_plus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let c = random_code(&mut rng, Field::gf3(), 14, 7);
        let d = c.brute_force_distance(&OracleConfig::default()).unwrap().0;
        let (found, _, _, _) = certify(&c, d + 1, &DistanceConfig::default()).unwrap();
        let (w, wt) = found.expect("a weight-d word exists below d+1");
        assert_eq!(wt, d);
        assert!(c.contains(&w));
        let (none, exhausted, _, _) = certify(&c, d, &DistanceConfig::default()).unwrap();
        assert!(none.is_none());
        assert!(exhausted);
    }

    #[test]
    fn certify_w2_finds_only_weight1_words() {
        // A code with a weight-1 codeword: certification at w_best = 2
        // must find it.
        let c = LinearCode::from_generator(
            Matrix::from_rows(Field::gf2(), vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap();
        let (found, _, _, _) = certify(&c, 2, &DistanceConfig::default()).unwrap();
        assert_eq!(found.expect("weight-1 word").1, 1);
        // and on a distance-3 code it exhausts empty
        let (none, exhausted, _, _) = certify(&hamming74(), 2, &DistanceConfig::default()).unwrap();
        assert!(none.is_none());
        assert!(exhausted);
    }

    #[test]
    fn no_certify_gives_heuristic_status() {
        let c = ternary_golay();
        let cfg = DistanceConfig { certify: false, ..DistanceConfig::default() };
        let r = min_distance(&c, &cfg).unwrap();
        assert_eq!(r.status, Status::Heuristic);
        assert!(r.d_best >= 5);
    }

    #[test]
    fn full_space_code_distance_one() {
        let c = LinearCode::from_generator(Matrix::identity(Field::gf2(), 5)).unwrap();
        let r = min_distance(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(r.d_best, 1);
        assert_eq!(r.status, Status::Certified);
    }

    #[test]
    fn oracle_equivalence_small_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for field in [Field::gf2(), Field::gf3()] {
            for _ in 0..6 {
                let n = rng.gen_range(8..=14usize);
                let k = rng.gen_range(2..=6usize.min(n - 1));
                let c = random_code(&mut rng, field, n, k);
                let (d, _) = c.brute_force_distance(&OracleConfig::default()).unwrap();
                let r = min_distance(&c, &DistanceConfig::default()).unwrap();
                assert_eq!(r.d_best, d, "q={} n={} k={}", field.q(), n, k);
                assert_eq!(r.status, Status::Certified);
                assert_eq!(r.witness.weight(), d);
                assert!(c.contains(&r.witness));
            }
        }
    }

    #[test]
    fn thread_invariance() {
        let c = ternary_golay();
        let r1 = min_distance(&c, &DistanceConfig::default()).unwrap();
        let r4 =
            min_distance(&c, &DistanceConfig { threads: 4, ..DistanceConfig::default() }).unwrap();
        assert_eq!(r1.d_best, r4.d_best);
        assert_eq!(r1.status, r4.status);
        assert_eq!(r1.witness, r4.witness);
    }

    #[test]
    fn partial_status_on_tiny_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let c = random_code(&mut rng, Field::gf2(), 18, 9);
        let cfg = DistanceConfig { node_budget: 3, ..DistanceConfig::default() };
        let r = min_distance(&c, &cfg).unwrap();
        // With three nodes the certification cannot complete.
        assert_eq!(r.status, Status::Partial);
        assert!(c.contains(&r.witness));
        assert_eq!(r.witness.weight(), r.d_best);
        // partial results are still thread-invariant
        let r8 = min_distance(&c, &DistanceConfig { threads: 8, ..cfg }).unwrap();
        assert_eq!(r.d_best, r8.d_best);
        assert_eq!(r.status, r8.status);
    }

    #[test]
    fn full_radius_mode_agrees() {
        // The step-4 radius (n+1) * r_max^2 explores a much bigger ball, so
        // exercise it on a small code.
        let c = hamming74();
        let cfg = DistanceConfig { full_radius: true, ..DistanceConfig::default() };
        let r = min_distance(&c, &cfg).unwrap();
        assert_eq!(r.d_best, 3);
        assert_eq!(r.status, Status::Certified);

        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let c = random_code(&mut rng, Field::gf3(), 9, 4);
        let d = c.brute_force_distance(&OracleConfig::default()).unwrap().0;
        let r = min_distance(&c, &cfg).unwrap();
        assert_eq!(r.d_best, d);
        assert_eq!(r.status, Status::Certified);
    }

    #[test]
    fn binary_image_distance_matches_oracle() {
        let f = Field::extension(2, None).unwrap();
        // GF(4) [3,1] code [1, x, x+1]
        let c = LinearCode::from_generator(
            Matrix::from_rows(f, vec![vec![1, 2, 3]]).unwrap(),
        )
        .unwrap();
        let img = c.binary_image().unwrap();
        let (d, _) = img.brute_force_distance(&OracleConfig::default()).unwrap();
        let r = binary_image_distance(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(r.d_best, d);
        assert_eq!(r.stats.image_dims, Some((6, 2)));
        assert_eq!(r.stats.field_spec, "2^2:0x7");
        assert!(matches!(
            binary_image_distance(&hamming74(), &DistanceConfig::default()),
            Err(Error::ExtensionFieldRequired)
        ));
    }

    #[test]
    fn gf64_toy_code_binary_image() {
        let f = Field::extension(6, None).unwrap();
        // [2,1] code [1, x]: binary [12, 6] image
        let c = LinearCode::from_generator(Matrix::from_rows(f, vec![vec![1, 2]]).unwrap())
            .unwrap();
        let img = c.binary_image().unwrap();
        let (d, _) = img.brute_force_distance(&OracleConfig::default()).unwrap();
        let r = binary_image_distance(&c, &DistanceConfig::default()).unwrap();
        assert_eq!(r.d_best, d);
        assert_eq!(r.status, Status::Certified);
    }

    #[test]
    fn rejects_unsupported_fields() {
        let c = LinearCode::from_generator(
            Matrix::from_rows(Field::prime(5).unwrap(), vec![vec![1, 2, 3]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            min_distance(&c, &DistanceConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
