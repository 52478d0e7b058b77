//! Subset convolution and three-way partition counting through the border
//! decomposition of `P`.
//!
//! With `K(Aε, Bε, Cε) = ε·P + ε²·Eε`, taking n-th Kronecker powers gives
//! `K(Aε^⊗n, Bε^⊗n, Cε^⊗n) = εⁿ·P^⊗n + O(εⁿ⁺¹)`. Hence
//!
//! ```text
//! P^⊗n[u, v]   = {εⁿ} Aε^⊗n·((Bεᵀ)^⊗n u ⊙ (Cεᵀ)^⊗n v)
//! P^⊗n[f, g, h] = {εⁿ} ((Aεᵀ)^⊗n f)ᵀ((Bεᵀ)^⊗n g ⊙ (Cεᵀ)^⊗n h)
//! ```
//!
//! and every Kronecker product is applied with Yates's algorithm. Only
//! coefficients up to εⁿ are ever needed, so all ε-polynomials are truncated
//! at degree n.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ring::{EpsPoly, Ring, ScalarRing};
use crate::tensor::{border_p_factors_like, Matrix};
use crate::yates::{yates_matvec, FactorList};

pub use crate::tensor::border_p_factors;

/// Default cap on `n` for dense length-`2^n` vectors.
pub const DEFAULT_MAX_DENSE_N: usize = 24;

/// Largest universe stored as a bit mask.
pub const MAX_MASK_N: usize = 63;

/// Dense-vector cap, overridable through the `TC_MAX_N` environment variable.
pub fn max_dense_n() -> usize {
    std::env::var("TC_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DENSE_N)
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    let cap = max_dense_n();
    if n > cap {
        return Err(Error::TooLarge(format!("dense vectors of length 2^{n} exceed the cap 2^{cap}")));
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A family of subsets of `[n]`, stored as bit masks without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    members: Vec<u64>,
}

impl SetFamily {
    /// Keeps the first occurrence of each mask.
    pub fn new(n: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_MASK_N {
            return Err(Error::TooLarge(format!("universe of size {n} exceeds {MAX_MASK_N}")));
        }
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for m in masks {
            if m & !full_mask(n) != 0 {
                return Err(Error::Parameter(format!("mask {m:#b} is not a subset of [{n}]")));
            }
            if seen.insert(m) {
                members.push(m);
            }
        }
        Ok(SetFamily { n, members })
    }

    pub fn empty(n: usize) -> Self {
        SetFamily { n, members: Vec::new() }
    }

    /// All `2^n` subsets of `[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        check_dense(n)?;
        Self::new(n, 0..1u64 << n)
    }

    /// Build from element lists.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            let mut m = 0u64;
            for &e in s {
                if e >= n {
                    return Err(Error::Parameter(format!("element {e} outside [{n}]")));
                }
                m |= 1 << e;
            }
            masks.push(m);
        }
        Self::new(n, masks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }

    pub fn filter(&self, keep: impl Fn(u64) -> bool) -> Self {
        SetFamily { n: self.n, members: self.members.iter().copied().filter(|&m| keep(m)).collect() }
    }

    /// Image under the permutation `perm` of `[n]` (element `j` goes to `perm[j]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Shape(format!("permutation of length {} for n = {}", perm.len(), self.n)));
        }
        let image = |m: u64| {
            (0..self.n).filter(|&j| m >> j & 1 == 1).fold(0u64, |acc, j| acc | 1 << perm[j])
        };
        Ok(SetFamily { n: self.n, members: self.members.iter().map(|&m| image(m)).collect() })
    }

    /// The indicator vector `f_x = [X ∈ F]`.
    pub fn indicator<R: ScalarRing>(&self) -> Result<IndicatorVector<R>> {
        self.indicator_like(&R::one())
    }

    pub fn indicator_like<R: Ring>(&self, proto: &R) -> Result<IndicatorVector<R>> {
        check_dense(self.n)?;
        let mut entries = vec![proto.zero_like(); 1 << self.n];
        for &m in &self.members {
            entries[m as usize] = proto.one_like();
        }
        Ok(IndicatorVector { n: self.n, entries })
    }
}

/// A vector of length `2^n` indexed by subset masks.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorVector<R> {
    n: usize,
    entries: Vec<R>,
}

impl<R: Ring> IndicatorVector<R> {
    pub fn new(n: usize, entries: Vec<R>) -> Result<Self> {
        check_dense(n)?;
        if entries.len() != 1 << n {
            return Err(Error::Shape(format!("vector for n = {n} needs {} entries, got {}", 1u64 << n, entries.len())));
        }
        Ok(IndicatorVector { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<R> {
        self.entries
    }

    pub fn get(&self, mask: u64) -> &R {
        &self.entries[mask as usize]
    }
}

/// `w̄_x = w_{x̄}` with the complement taken within `n` bits.
pub fn complement_vector<R: Ring>(w: &IndicatorVector<R>) -> IndicatorVector<R> {
    let full = full_mask(w.n) as usize;
    let entries = (0..w.entries.len()).map(|x| w.entries[full ^ x].clone()).collect();
    IndicatorVector { n: w.n, entries }
}

fn same_n(ns: &[usize]) -> Result<usize> {
    let n = ns[0];
    if ns.iter().any(|&m| m != n) {
        return Err(Error::Shape(format!("operands over different universes: {ns:?}")));
    }
    Ok(n)
}

pub(crate) fn lift<R: Ring>(v: &[R], bound: usize) -> Vec<EpsPoly<R>> {
    v.iter().map(|x| EpsPoly::constant(x.clone(), bound)).collect()
}

/// `(Mᵀ)^⊗n` for a 2×2 border factor `M`.
fn transposed_power<R: Ring>(m: &Matrix<EpsPoly<R>>, n: usize) -> Result<FactorList<EpsPoly<R>>> {
    FactorList::repeated(m.transpose(), n)
}

fn proto_of<R: Ring>(v: &[R]) -> Result<&R> {
    v.first().ok_or_else(|| Error::Shape("empty vector".into()))
}

/// `P^⊗n[u, v]` through the border decomposition.
pub fn partition_bilinear<R: Ring>(u: &IndicatorVector<R>, v: &IndicatorVector<R>) -> Result<IndicatorVector<R>> {
    let n = same_n(&[u.n, v.n])?;
    let proto = proto_of(&u.entries)?;
    if n == 0 {
        return Ok(IndicatorVector { n, entries: vec![u.entries[0].mul(&v.entries[0])] });
    }
    let dec = border_p_factors_like(proto, n);
    let (uh, vh) = rayon::join(
        || yates_matvec(&transposed_power(&dec.b, n)?, &lift(&u.entries, n)),
        || yates_matvec(&transposed_power(&dec.c, n)?, &lift(&v.entries, n)),
    );
    let prod: Vec<EpsPoly<R>> = uh?.vector.iter().zip(&vh?.vector).map(|(a, b)| a.mul(b)).collect();
    let w = yates_matvec(&FactorList::repeated(dec.a.clone(), n)?, &prod)?;
    let entries = w.vector.iter().map(|e| e.coeff(n)).collect::<Result<_>>()?;
    Ok(IndicatorVector { n, entries })
}

/// `(u∗v)_X = Σ_{Y⊆X} u_Y·v_{X∖Y}`, computed as the complement of
/// `P^⊗n[u, v]`.
pub fn subset_convolution<R: Ring>(u: &IndicatorVector<R>, v: &IndicatorVector<R>) -> Result<IndicatorVector<R>> {
    Ok(complement_vector(&partition_bilinear(u, v)?))
}

/// The three Yates transforms of a vector used by the trilinear form; the
/// `A` and `B` factors of `P` coincide, so one transform serves both.
#[derive(Clone, Debug)]
pub struct BorderTransforms<R> {
    n: usize,
    ab: Vec<EpsPoly<R>>,
    c: Vec<EpsPoly<R>>,
}

impl<R: Ring> BorderTransforms<R> {
    pub fn new(f: &IndicatorVector<R>) -> Result<Self> {
        let n = f.n;
        let bound = n.max(1);
        let proto = proto_of(&f.entries)?;
        let dec = border_p_factors_like(proto, bound);
        let lifted = lift(&f.entries, bound);
        if n == 0 {
            return Ok(BorderTransforms { n, ab: lifted.clone(), c: lifted });
        }
        let (ab, c) = rayon::join(
            || yates_matvec(&transposed_power(&dec.a, n)?, &lifted),
            || yates_matvec(&transposed_power(&dec.c, n)?, &lifted),
        );
        Ok(BorderTransforms { n, ab: ab?.vector, c: c?.vector })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `P^⊗n[f, g, h]` from precomputed transforms: `f` and `g` contribute their
/// `A`/`B` transforms, `h` its `C` transform.
pub fn trilinear_from_transforms<R: Ring>(
    f: &BorderTransforms<R>,
    g: &BorderTransforms<R>,
    h: &BorderTransforms<R>,
) -> Result<R> {
    let n = same_n(&[f.n, g.n, h.n])?;
    Ok(eps_triple_dot(&f.ab, &g.ab, &h.c, n))
}

/// `{ε^k} Σ_l f_l·g_l·h_l` without forming the full products.
pub(crate) fn eps_triple_dot<R: Ring>(f: &[EpsPoly<R>], g: &[EpsPoly<R>], h: &[EpsPoly<R>], k: usize) -> R {
    let mut acc = f[0].coeffs()[0].zero_like();
    for ((a, b), c) in f.iter().zip(g).zip(h) {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            continue;
        }
        let (ac, bc, cc) = (a.coeffs(), b.coeffs(), c.coeffs());
        for (i, x) in ac.iter().enumerate().take(k + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bc.iter().enumerate().take(k + 1 - i) {
                if y.is_zero() {
                    continue;
                }
                if let Some(z) = cc.get(k - i - j) {
                    if !z.is_zero() {
                        acc.add_assign(&x.mul(y).mul(z));
                    }
                }
            }
        }
    }
    acc
}

/// `P^⊗n[f, g, h]` for arbitrary vectors.
pub fn partition_trilinear<R: Ring>(
    f: &IndicatorVector<R>,
    g: &IndicatorVector<R>,
    h: &IndicatorVector<R>,
) -> Result<R> {
    same_n(&[f.n, g.n, h.n])?;
    let (tf, (tg, th)) =
        rayon::join(|| BorderTransforms::new(f), || rayon::join(|| BorderTransforms::new(g), || BorderTransforms::new(h)));
    trilinear_from_transforms(&tf?, &tg?, &th?)
}

/// Number of triples `(X, Y, Z) ∈ F×G×H` with `X ∪̇ Y ∪̇ Z = [n]`, as an
/// element of `R` (reduced modulo the characteristic).
pub fn trilinear_partition_count<R: ScalarRing>(f: &SetFamily, g: &SetFamily, h: &SetFamily) -> Result<R> {
    partition_trilinear(&f.indicator::<R>()?, &g.indicator::<R>()?, &h.indicator::<R>()?)
}

/// Largest `n` accepted by [`brute_subset_convolution`].
pub const BRUTE_CONVOLUTION_MAX_N: usize = 16;

/// Largest family accepted by [`brute_partition_count`].
pub const BRUTE_COUNT_MAX_FAMILY: usize = 10_000;

/// Direct `O(3^n)` evaluation of the subset convolution.
pub fn brute_subset_convolution<R: Ring>(u: &IndicatorVector<R>, v: &IndicatorVector<R>) -> Result<IndicatorVector<R>> {
    let n = same_n(&[u.n, v.n])?;
    if n > BRUTE_CONVOLUTION_MAX_N {
        return Err(Error::TooLarge(format!("brute-force convolution limited to n ≤ {BRUTE_CONVOLUTION_MAX_N}")));
    }
    let proto = proto_of(&u.entries)?;
    let entries = (0..1usize << n)
        .map(|x| {
            let mut acc = proto.zero_like();
            let mut y = x;
            loop {
                acc.add_assign(&u.entries[y].mul(&v.entries[x ^ y]));
                if y == 0 {
                    break;
                }
                y = (y - 1) & x;
            }
            acc
        })
        .collect();
    Ok(IndicatorVector { n, entries })
}

/// Count triples partitioning `[n]` by looping over `F×G` and looking up
/// the forced third set in `H`.
pub fn brute_partition_count(f: &SetFamily, g: &SetFamily, h: &SetFamily) -> Result<u64> {
    let n = same_n(&[f.n, g.n, h.n])?;
    if [f, g, h].iter().any(|fam| fam.len() > BRUTE_COUNT_MAX_FAMILY) {
        return Err(Error::TooLarge(format!("brute-force count limited to {BRUTE_COUNT_MAX_FAMILY} sets per family")));
    }
    let full = full_mask(n);
    let hs: HashSet<u64> = h.members.iter().copied().collect();
    let mut count = 0;
    for &x in &f.members {
        for &y in &g.members {
            if x & y == 0 && hs.contains(&(full ^ x ^ y)) {
                count += 1;
            }
        }
    }
    Ok(count)
}
