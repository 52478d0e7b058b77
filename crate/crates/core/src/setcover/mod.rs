//! k-Set Cover through k-Set Partitioning and three-way partitioning.
//!
//! A cover instance is replaced by the down-closure of its family, which has
//! an exact partition into `t` sets iff the original family has a cover with
//! `t` sets. Partitions into one or two sets are found by lookup. Partitions
//! into three or more sets are grouped into three parts of at most
//! `⌊n/3⌋ + k` elements each, so it suffices to stratify the small sets `X`
//! by their cover number `C[X]` and ask, for each triple `t₁ ≤ t₂ ≤ t₃` with
//! `t₁ + t₂ + t₃ ≤ t`, whether `𝒞_{t₁} × 𝒞_{t₂} × 𝒞_{t₃}` contains a
//! three-way partition of the universe.

mod constants;

pub use constants::{
    binary_entropy, check_epsilon, runtime_exponent_bases, validate_constants, ConstantsCheck, RuntimeBases,
};

use std::collections::{HashMap, HashSet};

use crate::broken::{BlockStructure, TaggedQDecomposition};
use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::ring::ExactRational;
use crate::subsetconv::{max_dense_n, trilinear_from_transforms, BorderTransforms, SetFamily};

/// Largest set size accepted by [`down_closure`].
pub const MAX_CLOSURE_K: usize = 20;

/// Largest universe accepted by [`baseline_bellman`].
pub const BELLMAN_MAX_N: usize = 26;

/// A k-Set Cover instance `(U = [n], F, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub family: SetFamily,
    pub t: usize,
    pub k: usize,
}

impl SetCoverInstance {
    /// `k` is taken as the largest member size.
    pub fn new(family: SetFamily, t: usize) -> Result<Self> {
        let k = family.members().iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
        Self::with_k(family, t, k)
    }

    pub fn with_k(family: SetFamily, t: usize, k: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Parameter("budget t must be at least 1".into()));
        }
        if let Some(m) = family.members().iter().find(|m| m.count_ones() as usize > k) {
            return Err(Error::Parameter(format!("set {m:#b} has more than k = {k} elements")));
        }
        Ok(SetCoverInstance { family, t, k })
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }
}

/// All subsets of members of `f`, in increasing mask order.
pub fn down_closure(f: &SetFamily, k: usize) -> Result<SetFamily> {
    if k > MAX_CLOSURE_K {
        return Err(Error::TooLarge(format!("down-closure limited to k ≤ {MAX_CLOSURE_K}")));
    }
    let mut seen = HashSet::new();
    for &m in f.members() {
        if m.count_ones() as usize > k {
            return Err(Error::Parameter(format!("set {m:#b} has more than k = {k} elements")));
        }
        let mut y = m;
        loop {
            seen.insert(y);
            if y == 0 {
                break;
            }
            y = (y - 1) & m;
        }
    }
    let mut masks: Vec<u64> = seen.into_iter().collect();
    masks.sort_unstable();
    SetFamily::new(f.n(), masks)
}

/// True iff every subset of a member is a member.
pub fn is_down_closed(f: &SetFamily) -> bool {
    let set: HashSet<u64> = f.members().iter().copied().collect();
    f.members().iter().all(|&m| (0..64).filter(|b| m >> b & 1 == 1).all(|b| set.contains(&(m & !(1 << b)))))
}

/// `C[X]`: the fewest members of a down-closed family partitioning `X`,
/// for every `X` with `|X| ≤ cap`.
#[derive(Clone, Debug)]
pub struct CoverNumberTable {
    n: usize,
    cap: usize,
    values: Vec<u8>,
}

impl CoverNumberTable {
    /// Sentinel for unreachable sets; strictly larger than any `n`.
    pub const INFINITY: u8 = u8::MAX;

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `Some(C[X])` for reachable `X` with `|X| ≤ cap`.
    pub fn get(&self, x: u64) -> Option<usize> {
        if x.count_ones() as usize > self.cap {
            return None;
        }
        let v = self.values[x as usize];
        (v != Self::INFINITY).then_some(v as usize)
    }
}

/// Evaluate `C[X] = min_{∅≠Y∈F, Y⊆X} C[X∖Y] + 1` over masks in increasing
/// popcount order up to `size_cap`.
pub fn cover_number_dp(f_sp: &SetFamily, size_cap: usize) -> Result<CoverNumberTable> {
    let n = f_sp.n();
    if n > max_dense_n() {
        return Err(Error::TooLarge(format!("cover-number table for n = {n} exceeds the dense cap")));
    }
    let cap = size_cap.min(n);
    let members: Vec<u64> = f_sp.members().iter().copied().filter(|&m| m != 0).collect();
    let mut values = vec![CoverNumberTable::INFINITY; 1 << n];
    values[0] = 0;
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for x in 1..1u64 << n {
        let s = x.count_ones() as usize;
        if s <= cap {
            by_size[s].push(x);
        }
    }
    for layer in by_size.iter().skip(1) {
        for &x in layer {
            let mut best = CoverNumberTable::INFINITY;
            for &y in &members {
                if y & !x == 0 {
                    let prev = values[(x ^ y) as usize];
                    if prev != CoverNumberTable::INFINITY {
                        best = best.min(prev + 1);
                    }
                }
            }
            values[x as usize] = best;
        }
    }
    Ok(CoverNumberTable { n, cap, values })
}

/// `𝒞_i = {X : 1 ≤ |X| ≤ cap, C[X] = i}` for `i = 1, 2, …`; entry `i − 1`
/// of the result holds `𝒞_i`.
pub fn stratify(table: &CoverNumberTable) -> Vec<SetFamily> {
    let mut layers: Vec<Vec<u64>> = Vec::new();
    for x in 1..1u64 << table.n {
        if let Some(c) = table.get(x) {
            if layers.len() < c {
                layers.resize(c, Vec::new());
            }
            layers[c - 1].push(x);
        }
    }
    layers.into_iter().map(|ms| SetFamily::new(table.n, ms).expect("masks within [n]")).collect()
}

/// Size cap for the stratified families: `min(n, max(⌊(1/3+τ)n⌋, ⌊n/3⌋ + k))`.
///
/// The second term is the bound the grouping argument actually delivers;
/// `⌊(1/3+τ)n⌋` alone is too small whenever `k > τn`.
pub fn size_cap(n: usize, k: usize, tau: &Real) -> usize {
    let scaled = Real::from_ratio(1, 3).add(tau).mul(&Real::from_i64(n as i64));
    let slack_cap = scaled.floor_bigint().ok().and_then(|c| usize::try_from(c).ok()).unwrap_or(n);
    n.min(slack_cap.max(n / 3 + k))
}

/// Split the sets of a partition into three groups whose unions have at
/// most `⌊n/3⌋ + k` elements each, by repeatedly moving a set from an
/// oversized group to the smallest one.
pub fn rebalance_parts(sets: &[u64], n: usize, k: usize) -> [Vec<u64>; 3] {
    let limit = n / 3 + k;
    let mut parts: [Vec<u64>; 3] = [sets.to_vec(), Vec::new(), Vec::new()];
    let size = |p: &Vec<u64>| p.iter().map(|s| s.count_ones() as usize).sum::<usize>();
    loop {
        let sizes = [size(&parts[0]), size(&parts[1]), size(&parts[2])];
        let Some(big) = (0..3).find(|&i| sizes[i] > limit) else {
            return parts;
        };
        let small = (0..3).min_by_key(|&i| sizes[i]).expect("three parts");
        let set = parts[big].pop().expect("oversized part is nonempty");
        parts[small].push(set);
    }
}

/// Which three-way partitioner answers the triple queries.
#[derive(Clone, Debug)]
pub enum Backend {
    /// Exact counting with the trilinear form of `P^⊗n` over the rationals.
    Exact,
    /// The broken algorithm with random permutations.
    Broken(BrokenConfig),
}

#[derive(Clone, Debug)]
pub struct BrokenConfig {
    pub decomposition: TaggedQDecomposition,
    /// Number of `Q^⊗d` factors; clamped so that `3dq ≤ n`.
    pub q: usize,
    pub repeats: u64,
    pub seed: u64,
}

/// How a YES answer was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The universe is empty.
    Empty,
    /// `[n]` itself is a member.
    Single,
    /// Two disjoint members cover `[n]`.
    Pair,
    /// A three-way partition from `𝒞_{t₁} × 𝒞_{t₂} × 𝒞_{t₃}`.
    Triple(usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub answer: bool,
    pub witness: Option<Witness>,
    /// Triples submitted to the backend.
    pub triples_tried: usize,
    /// Broken-algorithm repeats consumed (zero for the exact backend).
    pub repeats: u64,
}

impl SolveOutcome {
    fn yes(w: Witness, triples_tried: usize, repeats: u64) -> Self {
        SolveOutcome { answer: true, witness: Some(w), triples_tried, repeats }
    }
}

/// Triples `1 ≤ t₁ ≤ t₂ ≤ t₃ ≤ t − 2` with `t₁ + t₂ + t₃ ≤ t`, in
/// lexicographic order.
pub fn budget_triples(t: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for t1 in 1..=t.saturating_sub(2) {
        for t2 in t1..=t.saturating_sub(2) {
            for t3 in t2..=t.saturating_sub(2) {
                if t1 + t2 + t3 <= t {
                    out.push((t1, t2, t3));
                }
            }
        }
    }
    out
}

/// Decide whether the down-closed family of `inst` partitions `[n]` into at
/// most `t` members.
pub fn solve_partitioning(inst: &SetCoverInstance, backend: &Backend, tau: &Real) -> Result<SolveOutcome> {
    let n = inst.n();
    let fam = &inst.family;
    if n == 0 {
        return Ok(SolveOutcome::yes(Witness::Empty, 0, 0));
    }
    if n > max_dense_n() {
        return Err(Error::TooLarge(format!("n = {n} exceeds the dense cap {}", max_dense_n())));
    }
    let full = (1u64 << n) - 1;
    let members: HashSet<u64> = fam.members().iter().copied().collect();
    if members.contains(&full) {
        return Ok(SolveOutcome::yes(Witness::Single, 0, 0));
    }
    // Any cover needs at most n nonempty disjoint sets.
    let t = inst.t.min(n);
    if t >= 2 && fam.members().iter().any(|&x| x != 0 && members.contains(&(full ^ x))) {
        return Ok(SolveOutcome::yes(Witness::Pair, 0, 0));
    }
    if t < 3 {
        return Ok(SolveOutcome { answer: false, witness: None, triples_tried: 0, repeats: 0 });
    }

    let cap = size_cap(n, inst.k, tau);
    let table = cover_number_dp(fam, cap)?;
    let layers = stratify(&table);
    let layer = |i: usize| layers.get(i - 1).filter(|f| !f.is_empty());

    let mut exact_cache: HashMap<usize, BorderTransforms<ExactRational>> = HashMap::new();
    let mut tried = 0;
    let mut repeats = 0;
    for (t1, t2, t3) in budget_triples(t) {
        let (Some(f), Some(g), Some(h)) = (layer(t1), layer(t2), layer(t3)) else {
            continue;
        };
        tried += 1;
        let found = match backend {
            Backend::Exact => {
                for i in [t1, t2, t3] {
                    if let std::collections::hash_map::Entry::Vacant(e) = exact_cache.entry(i) {
                        let fam = layer(i).expect("nonempty layer");
                        e.insert(BorderTransforms::new(&fam.indicator::<ExactRational>()?)?);
                    }
                }
                let count = trilinear_from_transforms(&exact_cache[&t1], &exact_cache[&t2], &exact_cache[&t3])?;
                count != ExactRational::integer(0)
            }
            Backend::Broken(cfg) => {
                let d = cfg.decomposition.d();
                let q = cfg.q.min(n / (3 * d));
                let bs = BlockStructure::for_universe(n, d, q)?;
                let out = cfg.decomposition.wrapper(f, g, h, &bs, cfg.repeats, cfg.seed)?;
                repeats += out.repeats;
                out.found
            }
        };
        if found {
            return Ok(SolveOutcome::yes(Witness::Triple(t1, t2, t3), tried, repeats));
        }
    }
    Ok(SolveOutcome { answer: false, witness: None, triples_tried: tried, repeats })
}

/// Down-close the family and solve the partitioning instance.
pub fn solve_setcover(inst: &SetCoverInstance, backend: &Backend, tau: &Real) -> Result<SolveOutcome> {
    let closed = down_closure(&inst.family, inst.k)?;
    let sp = SetCoverInstance { family: closed, t: inst.t, k: inst.k };
    solve_partitioning(&sp, backend, tau)
}

/// The fewest members covering `[n]` by the `O(2^n·m)` dynamic program,
/// or `None` if the union of the family is not `[n]`.
pub fn min_cover_size(family: &SetFamily) -> Result<Option<usize>> {
    let n = family.n();
    if n > BELLMAN_MAX_N {
        return Err(Error::TooLarge(format!("dynamic program limited to n ≤ {BELLMAN_MAX_N}")));
    }
    let inf = u8::MAX;
    let mut best = vec![inf; 1 << n];
    best[0] = 0;
    for x in 0..best.len() {
        let b = best[x];
        if b == inf {
            continue;
        }
        for &s in family.members() {
            let y = x | s as usize;
            if best[y] > b + 1 {
                best[y] = b + 1;
            }
        }
    }
    let v = best[(1usize << n) - 1];
    Ok((v != inf).then_some(v as usize))
}

/// Classic dynamic-programming decision: is there a cover with at most `t` sets?
pub fn baseline_bellman(inst: &SetCoverInstance) -> Result<bool> {
    Ok(min_cover_size(&inst.family)?.is_some_and(|c| c <= inst.t))
}
