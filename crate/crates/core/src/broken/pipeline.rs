use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::BlockStructure;
use crate::error::{Error, Result};
use crate::ring::{
    construct_extension_field, EpsPoly, ExactRational, ExtElem, Fp, Gf2, Gf3, Gf5, Gf7, Ring, RingTag, ScalarRing,
};
use crate::seed::{derive, label, stream};
use crate::subsetconv::{eps_triple_dot, lift, max_dense_n, SetFamily};
use crate::tensor::partition::MAX_DENSE_Q_POWER;
use crate::tensor::{border_p_factors_like, build_q_power, trivial_rank_decomposition, Matrix};
use crate::yates::{yates_matvec, FactorList};

/// A rank decomposition `K(A_Q, B_Q, C_Q) = Q^⊗d` with `7^d × r` factors.
///
/// The pipeline only accepts a decomposition once [`QDecomposition::verify`]
/// has succeeded (or [`QDecomposition::assume_verified`] was called).
#[derive(Clone, Debug, PartialEq)]
pub struct QDecomposition<R> {
    d: usize,
    a: Matrix<R>,
    b: Matrix<R>,
    c: Matrix<R>,
    verified: bool,
}

impl<R: ScalarRing> QDecomposition<R> {
    pub fn new(d: usize, a: Matrix<R>, b: Matrix<R>, c: Matrix<R>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("Q power d must be at least 1".into()));
        }
        let side = u32::try_from(d)
            .ok()
            .and_then(|d| 7usize.checked_pow(d))
            .ok_or_else(|| Error::TooLarge(format!("7^{d} overflows")))?;
        let r = a.cols();
        for (name, m) in [("A_Q", &a), ("B_Q", &b), ("C_Q", &c)] {
            if m.rows() != side || m.cols() != r {
                return Err(Error::Shape(format!(
                    "{name} is {}×{}, expected {side}×{r}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(QDecomposition { d, a, b, c, verified: false })
    }

    /// The rank-`24^d` decomposition with one term per support element of
    /// `Q^⊗d`; verified on construction.
    pub fn trivial(d: usize) -> Result<Self> {
        let t = build_q_power::<R>(d)?;
        let dec = trivial_rank_decomposition(&t)?;
        let mut out = Self::new(d, dec.a, dec.b, dec.c)?;
        out.verified = true;
        Ok(out)
    }

    /// Reassemble and compare with `Q^⊗d` entrywise. Only `d ≤ 2` can be
    /// checked densely.
    pub fn verify(&mut self) -> Result<bool> {
        if self.d > MAX_DENSE_Q_POWER {
            return Err(Error::TooLarge(format!(
                "dense verification of Q^⊗{} is limited to d ≤ {MAX_DENSE_Q_POWER}",
                self.d
            )));
        }
        let target = build_q_power::<R>(self.d)?;
        let ok = crate::tensor::kruskal(&self.a, &self.b, &self.c)? == target;
        self.verified = ok;
        Ok(ok)
    }

    /// Accept the decomposition without checking it.
    pub fn assume_verified(&mut self) {
        self.verified = true;
    }
}

impl<R: Ring> QDecomposition<R> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn factors(&self) -> (&Matrix<R>, &Matrix<R>, &Matrix<R>) {
        (&self.a, &self.b, &self.c)
    }

    fn ready_for(&self, bs: &BlockStructure) -> Result<()> {
        if !self.verified {
            return Err(Error::Unverified);
        }
        if bs.q() > 0 && self.d != bs.d() {
            return Err(Error::Shape(format!("decomposition of Q^⊗{} for block power d = {}", self.d, bs.d())));
        }
        Ok(())
    }
}

fn check_families(bs: &BlockStructure, fams: [&SetFamily; 3]) -> Result<usize> {
    if fams.iter().any(|f| f.n() != bs.n()) {
        return Err(Error::Shape(format!("families must be over [{}]", bs.n())));
    }
    if bs.n() > max_dense_n() {
        return Err(Error::TooLarge(format!("n = {} exceeds the dense cap {}", bs.n(), max_dense_n())));
    }
    bs.good_count().ok_or_else(|| Error::TooLarge("index space overflows".into()))
}

/// The vector `f̲` with `f̲_x̲ = [X ∈ F̲]·weight(x̲)`, bad sets dropped.
fn underline_vector<R: Ring>(
    fam: &SetFamily,
    bs: &BlockStructure,
    len: usize,
    zero: &R,
    weight: impl Fn(usize) -> R,
) -> Result<Vec<R>> {
    let mut v = vec![zero.zero_like(); len];
    for &x in fam.members() {
        if bs.is_good(x) {
            let i = bs.mixed_base_index(x)?;
            v[i] = weight(i);
        }
    }
    Ok(v)
}

/// `Γ = {ε^p}(f̃ᵀ(g̃ ⊙ h̃))` with `f̃ = ((Aεᵀ)^⊗p ⊗ (A_Qᵀ)^⊗q) f̲` and likewise
/// for `g̃`, `h̃`.
fn gamma<R: Ring>(
    vectors: [Vec<R>; 3],
    bs: &BlockStructure,
    q_factors: [&Matrix<R>; 3],
    proto: &R,
) -> Result<R> {
    let bound = bs.p();
    let border = (bs.p() > 0).then(|| border_p_factors_like(proto, bound));
    let lift_q = |m: &Matrix<R>| m.transpose().map(|x| EpsPoly::constant(x.clone(), bound));
    let factor_list = |role: usize| -> Option<FactorList<EpsPoly<R>>> {
        let mut fs = Vec::with_capacity(bs.p() + bs.q());
        if let Some(dec) = &border {
            let m = [&dec.a, &dec.b, &dec.c][role].transpose();
            fs.extend(std::iter::repeat_n(m, bs.p()));
        }
        fs.extend(std::iter::repeat_n(lift_q(q_factors[role]), bs.q()));
        FactorList::new(fs).ok()
    };
    let transform = |role: usize, v: &[R]| -> Result<Vec<EpsPoly<R>>> {
        let lifted = lift(v, bound);
        match factor_list(role) {
            Some(fl) => Ok(yates_matvec(&fl, &lifted)?.vector),
            None => Ok(lifted),
        }
    };
    let [f, g, h] = vectors;
    let (ft, (gt, ht)) = rayon::join(|| transform(0, &f), || rayon::join(|| transform(1, &g), || transform(2, &h)));
    Ok(eps_triple_dot(&ft?, &gt?, &ht?, bound))
}

/// The broken algorithm with every random scalar set to 1: the number of
/// good three-way partitions in `F × G × H`.
pub fn broken_count_rational(
    f: &SetFamily,
    g: &SetFamily,
    h: &SetFamily,
    bs: &BlockStructure,
    dec: &QDecomposition<ExactRational>,
) -> Result<u64> {
    dec.ready_for(bs)?;
    let len = check_families(bs, [f, g, h])?;
    let one = ExactRational::one();
    let unit = |_: usize| ExactRational::one();
    let vectors = [
        underline_vector(f, bs, len, &one, unit)?,
        underline_vector(g, bs, len, &one, unit)?,
        underline_vector(h, bs, len, &one, unit)?,
    ];
    let (a, b, c) = dec.factors();
    let gamma = gamma(vectors, bs, [a, b, c], &one)?;
    gamma
        .to_bigint()
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::Parameter(format!("count {gamma} is not a nonnegative integer")))
}

/// The broken algorithm over `𝔼 = GF(P^n)` with independent uniform scalars
/// `φ_x̲, ψ_y̲, χ_z̲`. The field and each scalar come from streams keyed by
/// `seed` (and the index), so the result is independent of evaluation order.
pub fn broken_gamma_field<const P: u8>(
    f: &SetFamily,
    g: &SetFamily,
    h: &SetFamily,
    bs: &BlockStructure,
    dec: &QDecomposition<Fp<P>>,
    seed: u64,
) -> Result<ExtElem> {
    dec.ready_for(bs)?;
    let len = check_families(bs, [f, g, h])?;
    let field = construct_extension_field(P, bs.n().max(1), derive(seed, &[label::FIELD]))?;
    let zero = ExtElem::zero(&field);
    let scalar = |role: u64| {
        let field = field.clone();
        move |i: usize| ExtElem::random(&field, &mut stream(seed, &[role, i as u64]))
    };
    let vectors = [
        underline_vector(f, bs, len, &zero, scalar(label::SCALAR_F))?,
        underline_vector(g, bs, len, &zero, scalar(label::SCALAR_G))?,
        underline_vector(h, bs, len, &zero, scalar(label::SCALAR_H))?,
    ];
    let embed = |m: &Matrix<Fp<P>>| m.map(|x| ExtElem::constant(&field, i64::from(x.value())));
    let (a, b, c) = dec.factors();
    let (a, b, c) = (embed(a), embed(b), embed(c));
    gamma(vectors, bs, [&a, &b, &c], &zero)
}

/// `Γ ≠ 0` for [`broken_gamma_field`].
pub fn broken_detect_field<const P: u8>(
    f: &SetFamily,
    g: &SetFamily,
    h: &SetFamily,
    bs: &BlockStructure,
    dec: &QDecomposition<Fp<P>>,
    seed: u64,
) -> Result<bool> {
    Ok(!broken_gamma_field(f, g, h, bs, dec, seed)?.is_zero())
}

/// Repeats evaluated together; fixed so the work done does not depend on
/// the thread count.
pub const WRAPPER_BATCH: u64 = 8;

/// Result of [`random_permutation_wrapper`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WrapperOutcome {
    pub found: bool,
    /// Repeats up to and including the first success (all `s` on failure).
    pub repeats: u64,
}

/// Run up to `s` repeats, each on a uniformly permuted copy of the input,
/// and stop at the first nonzero `Γ`. Repeat `i` uses streams keyed by
/// `(seed, i)`; batches of repeats run in parallel and the reported success
/// is always the lowest-numbered one.
pub fn random_permutation_wrapper<const P: u8>(
    f: &SetFamily,
    g: &SetFamily,
    h: &SetFamily,
    bs: &BlockStructure,
    dec: &QDecomposition<Fp<P>>,
    s: u64,
    seed: u64,
) -> Result<WrapperOutcome> {
    dec.ready_for(bs)?;
    check_families(bs, [f, g, h])?;
    permutation_repeats(bs.n(), s, seed, |perm, rs| {
        broken_detect_field(&f.permuted(perm)?, &g.permuted(perm)?, &h.permuted(perm)?, bs, dec, rs)
    })
}

/// The permutation loop shared by the field and rational variants:
/// `detect(π, repeat_seed)` is called for repeats `0..s` in batches.
fn permutation_repeats(
    n: usize,
    s: u64,
    seed: u64,
    detect: impl Fn(&[usize], u64) -> Result<bool> + Sync,
) -> Result<WrapperOutcome> {
    let repeat = |i: u64| -> Result<bool> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut stream(seed, &[label::PERMUTATION, i]));
        detect(&perm, derive(seed, &[label::REPEAT, i]))
    };
    let mut start = 0;
    while start < s {
        let end = s.min(start + WRAPPER_BATCH);
        let hits: Vec<bool> = (start..end).into_par_iter().map(repeat).collect::<Result<_>>()?;
        if let Some(k) = hits.iter().position(|&b| b) {
            return Ok(WrapperOutcome { found: true, repeats: start + k as u64 + 1 });
        }
        start = end;
    }
    Ok(WrapperOutcome { found: false, repeats: s })
}

/// A Q decomposition over one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq)]
pub enum TaggedQDecomposition {
    Rational(QDecomposition<ExactRational>),
    Gf2(QDecomposition<Gf2>),
    Gf3(QDecomposition<Gf3>),
    Gf5(QDecomposition<Gf5>),
    Gf7(QDecomposition<Gf7>),
}

macro_rules! each_tagged {
    ($self:expr, $d:ident => $body:expr) => {
        match $self {
            TaggedQDecomposition::Rational($d) => $body,
            TaggedQDecomposition::Gf2($d) => $body,
            TaggedQDecomposition::Gf3($d) => $body,
            TaggedQDecomposition::Gf5($d) => $body,
            TaggedQDecomposition::Gf7($d) => $body,
        }
    };
}

impl TaggedQDecomposition {
    /// The verified trivial decomposition over the ring `tag`.
    pub fn trivial(tag: RingTag, d: usize) -> Result<Self> {
        Ok(match tag {
            RingTag::Rational => Self::Rational(QDecomposition::trivial(d)?),
            RingTag::Gf2 => Self::Gf2(QDecomposition::trivial(d)?),
            RingTag::Gf3 => Self::Gf3(QDecomposition::trivial(d)?),
            RingTag::Gf5 => Self::Gf5(QDecomposition::trivial(d)?),
            RingTag::Gf7 => Self::Gf7(QDecomposition::trivial(d)?),
        })
    }

    pub fn tag(&self) -> RingTag {
        match self {
            Self::Rational(_) => RingTag::Rational,
            Self::Gf2(_) => RingTag::Gf2,
            Self::Gf3(_) => RingTag::Gf3,
            Self::Gf5(_) => RingTag::Gf5,
            Self::Gf7(_) => RingTag::Gf7,
        }
    }

    pub fn d(&self) -> usize {
        each_tagged!(self, x => x.d())
    }

    pub fn rank(&self) -> usize {
        each_tagged!(self, x => x.rank())
    }

    pub fn is_verified(&self) -> bool {
        each_tagged!(self, x => x.is_verified())
    }

    pub fn verify(&mut self) -> Result<bool> {
        each_tagged!(self, x => x.verify())
    }

    pub fn assume_verified(&mut self) {
        each_tagged!(self, x => x.assume_verified())
    }

    /// Run the permutation wrapper with this decomposition. Over a finite
    /// field each repeat is the randomized broken algorithm; over the
    /// rationals each repeat counts good partitions exactly (unit scalars)
    /// and succeeds when the count is positive.
    pub fn wrapper(
        &self,
        f: &SetFamily,
        g: &SetFamily,
        h: &SetFamily,
        bs: &BlockStructure,
        s: u64,
        seed: u64,
    ) -> Result<WrapperOutcome> {
        match self {
            Self::Rational(dec) => {
                dec.ready_for(bs)?;
                check_families(bs, [f, g, h])?;
                permutation_repeats(bs.n(), s, seed, |perm, _| {
                    let count =
                        broken_count_rational(&f.permuted(perm)?, &g.permuted(perm)?, &h.permuted(perm)?, bs, dec)?;
                    Ok(count > 0)
                })
            }
            Self::Gf2(dec) => random_permutation_wrapper(f, g, h, bs, dec, s, seed),
            Self::Gf3(dec) => random_permutation_wrapper(f, g, h, bs, dec, s, seed),
            Self::Gf5(dec) => random_permutation_wrapper(f, g, h, bs, dec, s, seed),
            Self::Gf7(dec) => random_permutation_wrapper(f, g, h, bs, dec, s, seed),
        }
    }
}
