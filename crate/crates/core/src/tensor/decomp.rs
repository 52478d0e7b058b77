use super::{Matrix, Tensor3};
use crate::error::{Error, Result};
use crate::ring::{EpsPoly, Ring, ScalarRing};

/// The Kruskal product `T[i, j, k] = Σ_l A[i, l]·B[j, l]·C[k, l]`.
pub fn kruskal<R: Ring>(a: &Matrix<R>, b: &Matrix<R>, c: &Matrix<R>) -> Result<Tensor3<R>> {
    let r = a.cols();
    if b.cols() != r || c.cols() != r {
        return Err(Error::Shape(format!(
            "Kruskal factors have {}, {} and {} columns",
            a.cols(),
            b.cols(),
            c.cols()
        )));
    }
    let dims = (a.rows(), b.rows(), c.rows());
    let proto = a
        .entries()
        .first()
        .or(b.entries().first())
        .or(c.entries().first())
        .ok_or_else(|| Error::Shape("empty Kruskal factors".into()))?;
    let mut out = Tensor3::zeros_like(dims, proto);
    for l in 0..r {
        for i in 0..dims.0 {
            let x = a.get(i, l);
            if x.is_zero() {
                continue;
            }
            for j in 0..dims.1 {
                let y = b.get(j, l);
                if y.is_zero() {
                    continue;
                }
                let xy = x.mul(y);
                for k in 0..dims.2 {
                    let z = c.get(k, l);
                    if z.is_zero() {
                        continue;
                    }
                    let mut v = out.get(i, j, k).clone();
                    v.add_assign(&xy.mul(z));
                    out.set(i, j, k, v);
                }
            }
        }
    }
    Ok(out)
}

/// A rank-`r` witness `T = K(A, B, C)`.
#[derive(Clone, PartialEq, Debug)]
pub struct RankDecomposition<R> {
    pub a: Matrix<R>,
    pub b: Matrix<R>,
    pub c: Matrix<R>,
}

impl<R: Ring> RankDecomposition<R> {
    pub fn new(a: Matrix<R>, b: Matrix<R>, c: Matrix<R>) -> Result<Self> {
        if a.cols() != b.cols() || a.cols() != c.cols() {
            return Err(Error::Shape("decomposition factors disagree on rank".into()));
        }
        Ok(RankDecomposition { a, b, c })
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    /// Target shape `(rows A, rows B, rows C)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.rows(), self.b.rows(), self.c.rows())
    }

    pub fn reassemble(&self) -> Result<Tensor3<R>> {
        kruskal(&self.a, &self.b, &self.c)
    }

    /// Kruskal product equals `target` entrywise. Shape mismatch is reported
    /// as failure.
    pub fn verify(&self, target: &Tensor3<R>) -> bool {
        self.dims() == target.dims() && self.reassemble().is_ok_and(|t| &t == target)
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> RankDecomposition<S> {
        RankDecomposition { a: self.a.map(&f), b: self.b.map(&f), c: self.c.map(&f) }
    }

    /// `K(A,B,C) ⊗ K(A',B',C') = K(A⊗A', B⊗B', C⊗C')`.
    pub fn kron(&self, rhs: &Self) -> Self {
        RankDecomposition { a: self.a.kron(&rhs.a), b: self.b.kron(&rhs.b), c: self.c.kron(&rhs.c) }
    }
}

pub fn verify_rank_decomposition<R: Ring>(d: &RankDecomposition<R>, t: &Tensor3<R>) -> bool {
    d.verify(t)
}

/// One rank-one term per support element of a 0/1 tensor.
pub fn trivial_rank_decomposition<R: ScalarRing>(t: &Tensor3<R>) -> Result<RankDecomposition<R>> {
    if t.entries().iter().any(|v| !v.is_zero() && !v.is_one()) {
        return Err(Error::Parameter("trivial decomposition needs a 0/1 tensor".into()));
    }
    let support = t.support();
    let (m, n, p) = t.dims();
    let r = support.len();
    let column = |rows: usize, pick: fn(&(usize, usize, usize)) -> usize| {
        Matrix::from_fn(rows, r, |i, l| if pick(&support[l]) == i { R::one() } else { R::zero() })
    };
    Ok(RankDecomposition { a: column(m, |s| s.0), b: column(n, |s| s.1), c: column(p, |s| s.2) })
}

/// A border witness `K(Aε, Bε, Cε) = ε^d·T + ε^(d+1)·Eε`.
#[derive(Clone, PartialEq, Debug)]
pub struct BorderDecomposition<R> {
    pub a: Matrix<EpsPoly<R>>,
    pub b: Matrix<EpsPoly<R>>,
    pub c: Matrix<EpsPoly<R>>,
    pub degree: usize,
    pub error: Option<Tensor3<EpsPoly<R>>>,
}

impl<R: Ring> BorderDecomposition<R> {
    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.rows(), self.b.rows(), self.c.rows())
    }

    /// No factor entry has ε-degree above `degree`.
    pub fn degrees_within_bound(&self) -> bool {
        [&self.a, &self.b, &self.c]
            .iter()
            .flat_map(|m| m.entries())
            .all(|e| e.degree().is_none_or(|k| k <= self.degree))
    }

    fn rebound(m: &Matrix<EpsPoly<R>>, bound: usize) -> Matrix<EpsPoly<R>> {
        m.map(|e| EpsPoly::from_coeffs(e.coeffs().to_vec(), bound))
    }

    /// The full (untruncated) Kruskal product over `R[ε]`.
    pub fn product(&self) -> Result<Tensor3<EpsPoly<R>>> {
        let max_deg = [&self.a, &self.b, &self.c]
            .iter()
            .flat_map(|m| m.entries())
            .filter_map(EpsPoly::degree)
            .max()
            .unwrap_or(0);
        let bound = 3 * max_deg.max(self.degree) + 3;
        kruskal(&Self::rebound(&self.a, bound), &Self::rebound(&self.b, bound), &Self::rebound(&self.c, bound))
    }

    /// Checks that the coefficient tensors of degree below `d` vanish, the
    /// degree-`d` coefficient tensor equals `target`, and, when an error tensor
    /// is attached, that the remaining terms equal `ε^(d+1)·Eε` exactly.
    pub fn verify(&self, target: &Tensor3<R>) -> bool {
        if self.dims() != target.dims() || self.b.cols() != self.rank() || self.c.cols() != self.rank() {
            return false;
        }
        let Ok(prod) = self.product() else {
            return false;
        };
        let d = self.degree;
        let (m, n, p) = target.dims();
        for i in 0..m {
            for j in 0..n {
                for k in 0..p {
                    let e = prod.get(i, j, k);
                    let coeffs = e.coeffs();
                    let zero = target.get(i, j, k).zero_like();
                    let at = |deg: usize| coeffs.get(deg).cloned().unwrap_or_else(|| zero.clone());
                    if (0..d).any(|deg| !at(deg).is_zero()) {
                        return false;
                    }
                    if &at(d) != target.get(i, j, k) {
                        return false;
                    }
                    if let Some(err) = &self.error {
                        if err.dims() != target.dims() {
                            return false;
                        }
                        let tail = err.get(i, j, k).coeffs();
                        let top = coeffs.len().max(d + 1 + tail.len());
                        for deg in (d + 1)..top {
                            let expect = tail.get(deg - d - 1).cloned().unwrap_or_else(|| zero.clone());
                            if at(deg) != expect {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Lift a rank decomposition to a border decomposition of degree 0.
    pub fn from_rank(d: &RankDecomposition<R>) -> Self {
        let lift = |m: &Matrix<R>| m.map(|x| EpsPoly::constant(x.clone(), 0));
        BorderDecomposition { a: lift(&d.a), b: lift(&d.b), c: lift(&d.c), degree: 0, error: None }
    }
}

pub fn verify_border_decomposition<R: Ring>(d: &BorderDecomposition<R>, t: &Tensor3<R>) -> bool {
    d.verify(t)
}
