use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::{Field, Ring, ScalarRing};

/// A dense order-3 tensor indexed by (level, row, column).
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor3<R> {
    dims: (usize, usize, usize),
    data: Vec<R>,
}

/// Which flattening to take; see [`Tensor3::flatten`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
    Third,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::First, Axis::Second, Axis::Third];

    pub fn from_number(k: usize) -> Option<Self> {
        match k {
            1 => Some(Axis::First),
            2 => Some(Axis::Second),
            3 => Some(Axis::Third),
            _ => None,
        }
    }
}

impl<R: Ring> Tensor3<R> {
    pub fn new(dims: (usize, usize, usize), data: Vec<R>) -> Result<Self> {
        let len = dims.0 * dims.1 * dims.2;
        if data.len() != len {
            return Err(Error::Shape(format!(
                "{}×{}×{} tensor needs {len} entries, got {}",
                dims.0,
                dims.1,
                dims.2,
                data.len()
            )));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn from_fn(dims: (usize, usize, usize), mut f: impl FnMut(usize, usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(dims.0 * dims.1 * dims.2);
        for i in 0..dims.0 {
            for j in 0..dims.1 {
                for k in 0..dims.2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3 { dims, data }
    }

    pub fn zeros_like(dims: (usize, usize, usize), proto: &R) -> Self {
        Tensor3 { dims, data: vec![proto.zero_like(); dims.0 * dims.1 * dims.2] }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims.1 + j) * self.dims.2 + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> &R {
        &self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: R) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Tensor3<S> {
        Tensor3 { dims: self.dims, data: self.data.iter().map(f).collect() }
    }

    /// Nonzero positions in (level, row, column) lexicographic order.
    pub fn support(&self) -> Vec<(usize, usize, usize)> {
        let (_, n, p) = self.dims;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(o, _)| (o / (n * p), (o / p) % n, o % p))
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// `(S⊗T)[i·u + a, j·v + b, k·w + c] = S[i, j, k]·T[a, b, c]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (u, v, w) = rhs.dims;
        let dims = (self.dims.0 * u, self.dims.1 * v, self.dims.2 * w);
        Self::from_fn(dims, |x, y, z| {
            let a = self.get(x / u, y / v, z / w);
            if a.is_zero() {
                return a.clone();
            }
            a.mul(rhs.get(x % u, y % v, z % w))
        })
    }

    /// The flattenings `S^[1]`, `S^[2]`, `S^[3]` with
    /// `S^[1][i, j·p + k] = S^[2][j, k·m + i] = S^[3][k, i·n + j] = S[i, j, k]`.
    pub fn flatten(&self, axis: Axis) -> Matrix<R> {
        let (m, n, p) = self.dims;
        match axis {
            Axis::First => Matrix::from_fn(m, n * p, |i, c| self.get(i, c / p, c % p).clone()),
            Axis::Second => Matrix::from_fn(n, p * m, |j, c| self.get(c % m, j, c / m).clone()),
            Axis::Third => Matrix::from_fn(p, m * n, |k, c| self.get(c / n, c % n, k).clone()),
        }
    }

    /// Zero the listed entries.
    pub fn punch_holes(&self, coords: &[(usize, usize, usize)]) -> Result<Self> {
        let mut out = self.clone();
        for &(i, j, k) in coords {
            if i >= self.dims.0 || j >= self.dims.1 || k >= self.dims.2 {
                return Err(Error::Shape(format!("hole ({i},{j},{k}) outside {:?}", self.dims)));
            }
            let z = out.get(i, j, k).zero_like();
            out.set(i, j, k, z);
        }
        Ok(out)
    }

    /// Keep only the listed indices along each axis, in the given order.
    pub fn restrict(&self, levels: &[usize], rows: &[usize], cols: &[usize]) -> Result<Self> {
        let (m, n, p) = self.dims;
        if levels.iter().any(|&i| i >= m) || rows.iter().any(|&j| j >= n) || cols.iter().any(|&k| k >= p) {
            return Err(Error::Shape("restriction index out of range".into()));
        }
        Ok(Self::from_fn((levels.len(), rows.len(), cols.len()), |a, b, c| {
            self.get(levels[a], rows[b], cols[c]).clone()
        }))
    }

    /// The bilinear map `T[u, v]_i = Σ_{j,k} T[i, j, k]·u_j·v_k`.
    pub fn bilinear(&self, u: &[R], v: &[R]) -> Result<Vec<R>> {
        let (m, n, p) = self.dims;
        if u.len() != n || v.len() != p {
            return Err(Error::Shape("bilinear map operand lengths".into()));
        }
        let Some(proto) = u.first().or(self.data.first()) else {
            return Ok(Vec::new());
        };
        Ok((0..m)
            .map(|i| {
                let mut acc = proto.zero_like();
                for j in 0..n {
                    for k in 0..p {
                        let t = self.get(i, j, k);
                        if !t.is_zero() {
                            acc.add_assign(&t.mul(&u[j]).mul(&v[k]));
                        }
                    }
                }
                acc
            })
            .collect())
    }

    /// The trilinear form `T[f, g, h] = Σ T[i, j, k]·f_i·g_j·h_k`.
    pub fn trilinear(&self, f: &[R], g: &[R], h: &[R]) -> Result<R> {
        let (m, n, p) = self.dims;
        if f.len() != m || g.len() != n || h.len() != p {
            return Err(Error::Shape("trilinear form operand lengths".into()));
        }
        let proto = f.first().or(self.data.first()).ok_or_else(|| Error::Shape("empty tensor".into()))?;
        let mut acc = proto.zero_like();
        for (i, j, k) in self.support() {
            acc.add_assign(&self.get(i, j, k).mul(&f[i]).mul(&g[j]).mul(&h[k]));
        }
        Ok(acc)
    }
}

impl<R: ScalarRing> Tensor3<R> {
    pub fn zeros(dims: (usize, usize, usize)) -> Self {
        Tensor3 { dims, data: vec![R::zero(); dims.0 * dims.1 * dims.2] }
    }

    /// The 1×1×1 tensor `[1]`, the unit of the Kronecker product.
    pub fn unit() -> Self {
        Tensor3 { dims: (1, 1, 1), data: vec![R::one()] }
    }

    /// A 0/1 tensor with ones exactly at `support`.
    pub fn from_support(dims: (usize, usize, usize), support: &[(usize, usize, usize)]) -> Result<Self> {
        Self::zeros(dims).with_ones(support)
    }

    fn with_ones(mut self, support: &[(usize, usize, usize)]) -> Result<Self> {
        for &(i, j, k) in support {
            if i >= self.dims.0 || j >= self.dims.1 || k >= self.dims.2 {
                return Err(Error::Shape(format!("({i},{j},{k}) outside {:?}", self.dims)));
            }
            self.set(i, j, k, R::one());
        }
        Ok(self)
    }
}

impl<F: Field> Tensor3<F> {
    /// Ranks of the three flattenings.
    pub fn flattening_ranks(&self) -> [usize; 3] {
        Axis::ALL.map(|a| self.flatten(a).rank())
    }

    /// True iff every flattening has full row rank.
    pub fn is_concise(&self) -> bool {
        let (m, n, p) = self.dims;
        self.flattening_ranks() == [m, n, p]
    }
}

pub fn kronecker_t3<R: Ring>(s: &Tensor3<R>, t: &Tensor3<R>) -> Tensor3<R> {
    s.kron(t)
}

pub fn flatten<R: Ring>(t: &Tensor3<R>, axis: Axis) -> Matrix<R> {
    t.flatten(axis)
}

pub fn is_concise<F: Field>(t: &Tensor3<F>) -> bool {
    t.is_concise()
}

pub fn punch_holes<R: Ring>(t: &Tensor3<R>, coords: &[(usize, usize, usize)]) -> Result<Tensor3<R>> {
    t.punch_holes(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRational, Gf2};

    type Q = ExactRational;

    #[test]
    fn flatten_scalar_tensor() {
        let t = Tensor3::new((1, 1, 1), vec![Q::integer(5)]).unwrap();
        for axis in Axis::ALL {
            assert_eq!(t.flatten(axis), Matrix::new(1, 1, vec![Q::integer(5)]).unwrap());
        }
    }

    #[test]
    fn flatten_index_conventions() {
        let t = Tensor3::<Q>::from_fn((2, 3, 4), |i, j, k| Q::integer((100 * i + 10 * j + k) as i64));
        let f1 = t.flatten(Axis::First);
        let f2 = t.flatten(Axis::Second);
        let f3 = t.flatten(Axis::Third);
        assert_eq!(f1.shape(), (2, 12));
        assert_eq!(f2.shape(), (3, 8));
        assert_eq!(f3.shape(), (4, 6));
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..4 {
                    let v = t.get(i, j, k);
                    assert_eq!(f1.get(i, j * 4 + k), v);
                    assert_eq!(f2.get(j, k * 2 + i), v);
                    assert_eq!(f3.get(k, i * 3 + j), v);
                }
            }
        }
    }

    #[test]
    fn zero_tensor_is_not_concise() {
        assert!(!Tensor3::<Gf2>::zeros((2, 2, 2)).is_concise());
    }

    #[test]
    fn holes_out_of_range() {
        let t = Tensor3::<Gf2>::zeros((2, 2, 2));
        assert!(t.punch_holes(&[(2, 0, 0)]).is_err());
        assert_eq!(t.punch_holes(&[(1, 1, 1)]).unwrap(), t);
    }

    #[test]
    fn kron_shapes_multiply() {
        let s = Tensor3::<Gf2>::zeros((2, 3, 1));
        let t = Tensor3::<Gf2>::zeros((1, 2, 5));
        assert_eq!(s.kron(&t).dims(), (2, 6, 5));
    }
}
