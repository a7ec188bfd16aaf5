//! Kannan-Fincke-Pohst enumeration: exact shortest-vector search and full
//! enumeration of all lattice vectors within a radius.
//!
//! The tree is walked in Schnorr-Euchner zig-zag order around the
//! Gram-Schmidt projection centers. Vectors come in +/- pairs; only the
//! representative whose highest-index nonzero coefficient is positive is
//! visited. Floating accumulation prunes with a small slack and every
//! candidate is re-verified with exact integer arithmetic.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;

/// Default cap on visited enumeration nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 36;

/// Relative slack added to the pruning radius so float round-off cannot
/// discard true candidates; exact verification filters the excess.
const RADIUS_SLACK: f64 = 1e-6;

/// Magnitude cap on designated ambient coordinates, applied as a
/// post-filter on candidates.
#[derive(Debug, Clone)]
pub struct CoordBound {
    pub r_max: BigInt,
    pub cols: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct EnumSpec {
    /// Initial squared-norm bound A.
    pub radius_sq: f64,
    /// Optional per-coordinate magnitude cap.
    pub coord_bound: Option<CoordBound>,
    /// Shrink the bound whenever a shorter nonzero vector is found.
    pub update_radius: bool,
    /// Report every vector within the final bound, not just the shortest.
    pub collect_all: bool,
    pub node_budget: u64,
    pub threads: usize,
}

impl EnumSpec {
    pub fn shortest(radius_sq: f64) -> Self {
        EnumSpec {
            radius_sq,
            coord_bound: None,
            update_radius: true,
            collect_all: false,
            node_budget: DEFAULT_NODE_BUDGET,
            threads: 1,
        }
    }

    pub fn collect_within(radius_sq: f64) -> Self {
        EnumSpec {
            radius_sq,
            coord_bound: None,
            update_radius: false,
            collect_all: true,
            node_budget: DEFAULT_NODE_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumVector {
    pub vector: Vec<BigInt>,
    pub norm_sq: BigInt,
}

#[derive(Debug, Clone)]
pub struct EnumResult {
    /// Nonzero vectors within the final bound, one of each +/- pair.
    pub vectors: Vec<EnumVector>,
    pub nodes_visited: u64,
    /// (indices searched, total indices) at the outermost level.
    pub top_level_progress: (u64, u64),
    /// False when the node budget cut the search short.
    pub complete: bool,
}

/// Depth-first enumeration over the basis coefficients using the GSO
/// interval bounds. Requires valid GSO data with strictly positive norms
/// (prune zero rows first).
pub fn enumerate(basis: &LatticeBasis, spec: &EnumSpec) -> Result<EnumResult> {
    enumerate_with_progress(basis, spec, &|_, _| {})
}

/// Like [`enumerate`], reporting (searched, estimated total) outermost
/// indices after each committed batch.
pub fn enumerate_with_progress(
    basis: &LatticeBasis,
    spec: &EnumSpec,
    on_progress: &(dyn Fn(u64, u64) + Sync),
) -> Result<EnumResult> {
    if spec.radius_sq <= 0.0 {
        return Err(Error::Degenerate("enumeration radius must be positive"));
    }
    let gso = basis.gso_ref().ok_or(Error::InvalidGso)?;
    let n = basis.num_rows();
    if n == 0 {
        return Err(Error::EmptyBasis);
    }
    if gso.norms.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidGso);
    }
    let mu = gso.mu.clone();
    let norms = gso.norms.clone();
    let threads = spec.threads.clamp(1, 64);
    let shared_bound = AtomicU64::new(spec.radius_sq.to_bits());
    let top_norm = norms[n - 1];
    let estimate_top = |bound: f64| -> u64 {
        let eff = bound + RADIUS_SLACK * (1.0 + bound.abs());
        ((eff / top_norm).max(0.0).sqrt().floor() as u64) + 1
    };

    // Split the tree on a prefix of the outer levels. The depth is chosen
    // from prefix-count targets only, never from the thread count, so the
    // partition (and therefore any budget cut) is identical no matter how
    // many workers run.
    const PREFIX_TARGET: usize = 4096;
    const PREFIX_CAP: usize = 65536;
    let mut depth = 1usize;
    let (mut prefixes, mut gen_nodes, mut gen_complete) =
        collect_prefixes(&mu, &norms, n, n - depth, spec);
    while gen_complete
        && prefixes.len() < PREFIX_TARGET
        && depth < (n - 1).min(24)
        && gen_nodes <= spec.node_budget
    {
        let deeper = collect_prefixes(&mu, &norms, n, n - depth - 1, spec);
        if deeper.0.len() > PREFIX_CAP {
            break;
        }
        depth += 1;
        prefixes = deeper.0;
        gen_nodes = deeper.1;
        gen_complete = deeper.2;
    }
    let floor = n - depth;
    let mut nodes_total = gen_nodes;
    let mut complete = gen_complete && nodes_total <= spec.node_budget;

    // Group boundaries by outermost index, for the progress pair.
    let mut group_ends: Vec<usize> = Vec::new();
    {
        let mut last_top = None;
        for (i, p) in prefixes.iter().enumerate() {
            let top = *p.coeffs.last().expect("nonempty prefix");
            if last_top != Some(top) {
                if last_top.is_some() {
                    group_ends.push(i);
                }
                last_top = Some(top);
            }
        }
        if last_top.is_some() {
            group_ends.push(prefixes.len());
        }
    }
    let searched_groups = |committed: usize| -> u64 {
        group_ends.iter().filter(|&&end| end <= committed).count() as u64
    };

    // Worker pool: claims go out in prefix order; every subtree is
    // individually capped by the node budget; an approximate global node
    // counter only stops further claims. The deterministic budget cut is
    // applied afterwards, in prefix order, over the computed outcomes.
    let slots: Vec<Mutex<Option<SubtreeOutcome>>> =
        (0..prefixes.len()).map(|_| Mutex::new(None)).collect();
    if complete && !prefixes.is_empty() {
        let worker_count = threads.min(prefixes.len());
        let next = AtomicU64::new(0);
        let nodes_seen = AtomicU64::new(nodes_total);
        let active = AtomicU64::new(worker_count as u64);
        std::thread::scope(|scope| {
            for _ in 0..worker_count {
                let prefixes = &prefixes;
                let slots = &slots;
                let mu = &mu;
                let norms = &norms;
                let shared_bound = &shared_bound;
                let next = &next;
                let nodes_seen = &nodes_seen;
                let active = &active;
                scope.spawn(move || {
                    loop {
                        // The stop heuristic only limits new claims; the
                        // deterministic budget cut happens in the commit
                        // pass below.
                        if nodes_seen.load(Ordering::Relaxed) > spec.node_budget {
                            break;
                        }
                        let i = next.fetch_add(1, Ordering::Relaxed) as usize;
                        if i >= prefixes.len() {
                            break;
                        }
                        let out =
                            run_subtree(basis, mu, norms, spec, shared_bound, &prefixes[i], floor);
                        nodes_seen.fetch_add(out.nodes, Ordering::Relaxed);
                        *slots[i].lock().expect("slot lock") = Some(out);
                    }
                    active.fetch_sub(1, Ordering::Release);
                });
            }
            // Progress reporting while the workers run (display only; the
            // returned pair is recomputed deterministically afterwards).
            let mut consecutive = 0usize;
            loop {
                while consecutive < slots.len()
                    && slots[consecutive].lock().expect("slot lock").is_some()
                {
                    consecutive += 1;
                }
                let bound_now = f64::from_bits(shared_bound.load(Ordering::Acquire));
                on_progress(
                    searched_groups(consecutive),
                    estimate_top(bound_now).max(searched_groups(consecutive)),
                );
                if consecutive == slots.len() || active.load(Ordering::Acquire) == 0 {
                    break;
                }
                std::thread::sleep(std::time::Duration::from_millis(200));
            }
        });
    }

    // Deterministic commit pass in prefix order.
    let mut committed: Vec<SubtreeOutcome> = Vec::new();
    let mut idx = 0usize;
    if complete {
        for slot in slots {
            let Some(outcome) = slot.into_inner().expect("slot lock") else {
                complete = false;
                break;
            };
            nodes_total += outcome.nodes;
            if !outcome.complete || nodes_total > spec.node_budget {
                complete = false;
                break;
            }
            committed.push(outcome);
            idx += 1;
        }
    }

    let final_bound = f64::from_bits(shared_bound.load(Ordering::Acquire));
    // Exact acceptance: integer norms within the final bound.
    let exact_bound = BigInt::from((final_bound + RADIUS_SLACK * (1.0 + final_bound)) as i128);
    let mut vectors: Vec<EnumVector> = committed
        .into_iter()
        .flat_map(|o| o.vectors)
        .filter(|v| v.norm_sq <= exact_bound)
        .collect();
    if spec.update_radius && !spec.collect_all {
        // Shortest mode: keep exactly the minimum, ties to the lexicographic
        // least vector.
        if let Some(min) = vectors.iter().map(|v| v.norm_sq.clone()).min() {
            vectors.retain(|v| v.norm_sq == min);
            vectors.sort_by(|a, b| a.vector.cmp(&b.vector));
            vectors.truncate(1);
        }
    } else if spec.update_radius {
        let min = vectors.iter().map(|v| v.norm_sq.clone()).min();
        if let Some(min) = min {
            vectors.retain(|v| v.norm_sq <= min);
        }
    }
    vectors.sort_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then_with(|| a.vector.cmp(&b.vector)));
    let searched = searched_groups(idx);
    let total_top = if complete { searched } else { estimate_top(final_bound).max(searched) };
    on_progress(searched, total_top);
    Ok(EnumResult {
        vectors,
        nodes_visited: nodes_total,
        top_level_progress: (searched, total_top),
        complete,
    })
}

/// A fixed assignment of the outermost levels `floor..n`, enumerated with
/// the initial bound so the partition is identical for every thread count.
#[derive(Debug, Clone)]
struct Prefix {
    /// coeffs[j] = coefficient at level floor + j.
    coeffs: Vec<i64>,
    rho: f64,
}

fn collect_prefixes(
    mu: &[Vec<f64>],
    norms: &[f64],
    n: usize,
    floor: usize,
    spec: &EnumSpec,
) -> (Vec<Prefix>, u64, bool) {
    let mut out = Vec::new();
    let mut engine = Engine {
        mu,
        norms,
        floor,
        bound: spec.radius_sq,
        nodes: 0,
        node_budget: spec.node_budget,
        x: vec![0; n],
        active: Vec::new(),
        aborted: false,
    };
    let top_norm = norms[n - 1];
    let mut t = 0i64;
    loop {
        let contrib = (t as f64) * (t as f64) * top_norm;
        if contrib > engine.effective_bound() || engine.aborted {
            break;
        }
        engine.nodes += 1;
        engine.x[n - 1] = t;
        if t != 0 {
            engine.active.push(n - 1);
        }
        engine.walk(n - 1, contrib, t == 0, &mut |x: &[i64], rho: f64| {
            out.push(Prefix { coeffs: x[floor..].to_vec(), rho });
            None
        });
        if t != 0 {
            engine.active.pop();
        }
        engine.x[n - 1] = 0;
        t += 1;
    }
    (out, engine.nodes, !engine.aborted)
}

/// Convenience wrapper: LLL-preprocess a copy, seed the bound with the
/// minimum row norm and enumerate for the exact shortest vector.
pub fn shortest_vector(basis: &LatticeBasis) -> Result<(Vec<BigInt>, BigInt)> {
    let mut b = basis.clone();
    b.prune_zero_rows();
    if b.num_rows() == 0 {
        return Err(Error::EmptyBasis);
    }
    b.lll(0.99)?;
    b.prune_zero_rows();
    if b.num_rows() == 0 {
        return Err(Error::EmptyBasis);
    }
    let seed = (0..b.num_rows())
        .map(|i| b.row_norm_sq(i).to_f64().unwrap_or(f64::MAX))
        .fold(f64::MAX, f64::min);
    b.gso()?;
    let spec = EnumSpec::shortest(seed * (1.0 + 1e-9));
    let res = enumerate(&b, &spec)?;
    let best = res
        .vectors
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("seeded enumeration found no vector".into()))?;
    Ok((best.vector, best.norm_sq))
}

/// Shortest nonzero coefficient vector of a projected block, given the
/// block's GSO view. Used by BKZ and the block-condition predicate.
pub fn block_shortest(mu: &[Vec<f64>], norms: &[f64], radius_sq: f64) -> Option<(Vec<i64>, f64)> {
    let n = norms.len();
    let mut best: Option<(Vec<i64>, f64)> = None;
    let mut engine = Engine {
        mu,
        norms,
        floor: 0,
        bound: radius_sq,
        nodes: 0,
        node_budget: DEFAULT_NODE_BUDGET,
        x: vec![0; n],
        active: Vec::new(),
        aborted: false,
    };
    let mut t = 0i64;
    loop {
        let eff = engine.effective_bound();
        let contrib = (t as f64) * (t as f64) * norms[n - 1];
        if contrib > eff {
            break;
        }
        engine.x[n - 1] = t;
        if t != 0 {
            engine.active.push(n - 1);
        }
        engine.walk(n - 1, contrib, t == 0, &mut |x, norm| {
            if x.iter().all(|&c| c == 0) {
                return None;
            }
            match &best {
                Some((_, bn)) if *bn <= norm => None,
                _ => {
                    best = Some((x.to_vec(), norm));
                    Some(norm)
                }
            }
        });
        if t != 0 {
            engine.active.pop();
        }
        engine.x[n - 1] = 0;
        t += 1;
    }
    best
}

#[derive(Debug, Clone)]
struct SubtreeOutcome {
    vectors: Vec<EnumVector>,
    nodes: u64,
    complete: bool,
}

/// Enumerates the subtree below a fixed prefix of outer coefficients.
fn run_subtree(
    basis: &LatticeBasis,
    mu: &[Vec<f64>],
    norms: &[f64],
    spec: &EnumSpec,
    shared_bound: &AtomicU64,
    prefix: &Prefix,
    floor: usize,
) -> SubtreeOutcome {
    let n = norms.len();
    let mut out = SubtreeOutcome { vectors: Vec::new(), nodes: 0, complete: true };
    let bound = f64::from_bits(shared_bound.load(Ordering::Acquire));
    let mut engine = Engine {
        mu,
        norms,
        floor: 0,
        bound,
        nodes: 0,
        node_budget: spec.node_budget,
        x: vec![0; n],
        active: Vec::new(),
        aborted: false,
    };
    for (j, &c) in prefix.coeffs.iter().enumerate() {
        engine.x[floor + j] = c;
        if c != 0 {
            engine.active.push(floor + j);
        }
    }
    if prefix.rho > engine.effective_bound() {
        return out;
    }
    let all_zero = prefix.coeffs.iter().all(|&c| c == 0);
    let rows = basis.rows();
    let mut sink = |x: &[i64], _norm_f: f64| -> Option<f64> {
        if x.iter().all(|&c| c == 0) {
            return None;
        }
        let mut v = vec![BigInt::zero(); rows[0].len()];
        for (c, row) in x.iter().zip(rows) {
            if *c == 0 {
                continue;
            }
            let cb = BigInt::from(*c);
            for (vc, rc) in v.iter_mut().zip(row) {
                *vc += &cb * rc;
            }
        }
        let norm_sq: BigInt = v.iter().map(|a| a * a).sum();
        if let Some(cb) = &spec.coord_bound {
            let ok = cb.cols.clone().all(|c| v[c].abs() <= cb.r_max);
            if !ok {
                return None;
            }
        }
        out.vectors.push(EnumVector { vector: v, norm_sq: norm_sq.clone() });
        if spec.update_radius {
            let norm_f = norm_sq.to_f64().unwrap_or(f64::MAX);
            // Monotone CAS-min on the shared bound.
            let mut cur = shared_bound.load(Ordering::Acquire);
            while norm_f < f64::from_bits(cur) {
                match shared_bound.compare_exchange(
                    cur,
                    norm_f.to_bits(),
                    Ordering::AcqRel,
                    Ordering::Acquire,
                ) {
                    Ok(_) => break,
                    Err(actual) => cur = actual,
                }
            }
            Some(f64::from_bits(shared_bound.load(Ordering::Acquire)))
        } else {
            None
        }
    };
    engine.walk(floor, prefix.rho, all_zero, &mut sink);
    out.nodes = engine.nodes;
    out.complete = !engine.aborted;
    if !spec.collect_all && !out.vectors.is_empty() {
        // Shortest mode: only the per-subtree best is needed.
        let best = out
            .vectors
            .iter()
            .min_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then_with(|| a.vector.cmp(&b.vector)))
            .cloned()
            .expect("nonempty");
        out.vectors = vec![best];
    }
    out
}

/// The single-threaded tree walker. `x[level..]` is fixed on entry to
/// `walk(level, ...)`; the walk fills levels down to `floor` and reports
/// a leaf there. `active` tracks the nonzero coefficient levels so the
/// projection centers cost only the support size.
struct Engine<'a> {
    mu: &'a [Vec<f64>],
    norms: &'a [f64],
    /// Leaves live at this level; 0 for full enumeration.
    floor: usize,
    bound: f64,
    nodes: u64,
    node_budget: u64,
    x: Vec<i64>,
    active: Vec<usize>,
    aborted: bool,
}

impl<'a> Engine<'a> {
    fn effective_bound(&self) -> f64 {
        self.bound + RADIUS_SLACK * (1.0 + self.bound.abs())
    }

    /// Center of level i given the fixed coefficients above it.
    fn center(&self, i: usize) -> f64 {
        let mut c = 0.0;
        for &j in &self.active {
            c -= self.x[j] as f64 * self.mu[j][i];
        }
        c
    }

    fn leaf(&mut self, rho: f64, sink: &mut impl FnMut(&[i64], f64) -> Option<f64>) {
        if let Some(new_bound) = sink(&self.x, rho) {
            if new_bound < self.bound {
                self.bound = new_bound;
            }
        }
    }

    /// Descends from `level` (whose coefficient and accumulated norm `rho`
    /// are already fixed) toward the floor.
    fn walk(
        &mut self,
        level: usize,
        rho: f64,
        all_above_zero: bool,
        sink: &mut impl FnMut(&[i64], f64) -> Option<f64>,
    ) {
        if level == self.floor {
            self.leaf(rho, sink);
            return;
        }
        let i = level - 1;
        let c = self.center(i);
        let nonneg = all_above_zero; // center is exactly 0 in that case
        let start = if nonneg { 0 } else { c.round() as i64 };
        let mut up = start;
        let mut down = start - 1;
        let mut up_dead = false;
        let mut down_dead = nonneg;
        loop {
            if self.aborted {
                return;
            }
            let take_up = if up_dead {
                if down_dead {
                    return;
                }
                false
            } else if down_dead {
                true
            } else {
                (up as f64 - c).abs() <= (c - down as f64).abs()
            };
            let xi = if take_up { up } else { down };
            self.nodes += 1;
            if self.nodes > self.node_budget {
                self.aborted = true;
                return;
            }
            let diff = xi as f64 - c;
            let contrib = diff * diff * self.norms[i];
            if rho + contrib > self.effective_bound() {
                if take_up {
                    up_dead = true;
                } else {
                    down_dead = true;
                }
            } else {
                self.x[i] = xi;
                if xi != 0 {
                    self.active.push(i);
                }
                self.walk(i, rho + contrib, all_above_zero && xi == 0, sink);
                if xi != 0 {
                    self.active.pop();
                }
                self.x[i] = 0;
            }
            if take_up {
                up += 1;
            } else {
                down -= 1;
            }
        }
    }
}
