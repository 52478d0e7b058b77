use crate::error::{Error, Result};
use crate::ring::{Field, Ring, ScalarRing};

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros_like(rows: usize, cols: usize, proto: &R) -> Self {
        Matrix { rows, cols, data: vec![proto.zero_like(); rows * cols] }
    }

    pub fn identity_like(n: usize, proto: &R) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let proto = self.data.first().or(rhs.data.first());
        let Some(proto) = proto else {
            return Ok(Matrix { rows: self.rows, cols: rhs.cols, data: Vec::new() });
        };
        let mut out = Self::zeros_like(self.rows, rhs.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.mul(rhs.get(k, j));
                    out.data[i * rhs.cols + j].add_assign(&prod);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[R]) -> Result<Vec<R>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let Some(proto) = x.first().or(self.data.first()) else {
            return Ok(Vec::new());
        };
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(proto.zero_like(), |mut acc, (a, b)| {
                    acc.add_assign(&a.mul(b));
                    acc
                })
            })
            .collect())
    }

    /// Kronecker product: `(A⊗B)[i·u + k, j·v + l] = A[i, j]·B[k, l]` for `B`
    /// of shape `u×v`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (u, v) = rhs.shape();
        Self::from_fn(self.rows * u, self.cols * v, |r, c| {
            self.get(r / u, c / v).mul(rhs.get(r % u, c % v))
        })
    }
}

impl<R: ScalarRing> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    /// Build from integer rows; entries are mapped into the ring.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| R::from_i64(rows[i][j]))
    }
}

impl<F: Field> Matrix<F> {
    /// Matrix rank by elimination (fraction-free over the rationals).
    pub fn rank(&self) -> usize {
        F::rank_of(self.rows, self.cols, &self.data)
    }
}

/// Kronecker product of two matrices.
pub fn kronecker_mat<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    a.kron(b)
}

/// Rank of a matrix over a field.
pub fn rank_over_field<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRational, Gf3};

    type Q = ExactRational;

    #[test]
    fn identity_kron_identity() {
        let i2 = Matrix::<Q>::identity(2);
        assert_eq!(i2.kron(&i2), Matrix::identity(4));
    }

    #[test]
    fn kron_index_formula() {
        let a = Matrix::<Q>::from_ints(&[&[0, 1], &[1, 0]]);
        let b = Matrix::<Q>::from_ints(&[&[1], &[0]]);
        let expect = Matrix::<Q>::from_ints(&[&[0, 1], &[0, 0], &[1, 0], &[0, 0]]);
        assert_eq!(a.kron(&b), expect);
    }

    #[test]
    fn ranks() {
        assert_eq!(Matrix::<Q>::identity(7).rank(), 7);
        let a = Matrix::<Gf3>::from_ints(&[&[1, 2], &[2, 1]]);
        // det = 1 − 4 = −3 ≡ 0 (mod 3)
        assert_eq!(a.rank(), 1);
        assert_eq!(Matrix::<Q>::from_ints(&[&[1, 2], &[2, 1]]).rank(), 2);
        assert_eq!(Matrix::<Q>::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::<Q>::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert!(a.matvec(&[Q::integer(1)]).is_err());
        assert!(Matrix::<Q>::new(2, 2, vec![Q::integer(1)]).is_err());
    }
}
