//! Yates's algorithm: multiply a vector by `A⁽¹⁾ ⊗ A⁽²⁾ ⊗ … ⊗ A⁽ᵖ⁾` without
//! forming the Kronecker product.
//!
//! The product factors as `A^[1]·A^[2]⋯A^[p]` with
//! `A^[ℓ] = I ⊗ … ⊗ I ⊗ A⁽ˡ⁾ ⊗ I ⊗ … ⊗ I`, and each stage is applied as a
//! blocked sparse loop over the vector viewed as a `left × n_ℓ × right`
//! array. Zero factor entries are skipped, and multiplications by one are
//! replaced with additions; the returned count covers the remaining ring
//! multiplications.

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::tensor::Matrix;

/// A nonempty list of Kronecker factors over a common ring.
#[derive(Clone, Debug)]
pub struct FactorList<R> {
    factors: Vec<Matrix<R>>,
}

impl<R: Ring> FactorList<R> {
    pub fn new(factors: Vec<Matrix<R>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Shape("empty factor list".into()));
        }
        Ok(FactorList { factors })
    }

    /// `count` copies of one factor.
    pub fn repeated(factor: Matrix<R>, count: usize) -> Result<Self> {
        Self::new(vec![factor; count])
    }

    pub fn factors(&self) -> &[Matrix<R>] {
        &self.factors
    }

    /// `∏ n_ℓ`.
    pub fn input_len(&self) -> usize {
        self.factors.iter().map(Matrix::cols).product()
    }

    /// `∏ m_ℓ`.
    pub fn output_len(&self) -> usize {
        self.factors.iter().map(Matrix::rows).product()
    }
}

/// The product together with the number of ring multiplications spent.
#[derive(Clone, Debug)]
pub struct YatesOutput<R> {
    pub vector: Vec<R>,
    pub multiplications: u64,
}

/// Apply `I_left ⊗ A ⊗ I_right` to `x` (length `left·cols(A)·right`).
fn apply_stage<R: Ring>(x: &[R], left: usize, a: &Matrix<R>, right: usize, mults: &mut u64) -> Vec<R> {
    let (m, n) = a.shape();
    debug_assert_eq!(x.len(), left * n * right);
    let zero = x[0].zero_like();
    let mut out = vec![zero; left * m * right];
    for l in 0..left {
        let src = &x[l * n * right..(l + 1) * n * right];
        let dst = &mut out[l * m * right..(l + 1) * m * right];
        for i in 0..m {
            let row = &mut dst[i * right..(i + 1) * right];
            for (j, coef) in a.row(i).iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let col = &src[j * right..(j + 1) * right];
                if coef.is_one() {
                    for (d, s) in row.iter_mut().zip(col) {
                        if !s.is_zero() {
                            d.add_assign(s);
                        }
                    }
                } else {
                    for (d, s) in row.iter_mut().zip(col) {
                        if !s.is_zero() {
                            d.add_assign(&coef.mul(s));
                            *mults += 1;
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_len<R: Ring>(factors: &FactorList<R>, x: &[R]) -> Result<()> {
    if x.len() != factors.input_len() {
        return Err(Error::Shape(format!(
            "vector of length {} for a Kronecker product with {} columns",
            x.len(),
            factors.input_len()
        )));
    }
    if x.is_empty() {
        return Err(Error::Shape("empty vector".into()));
    }
    Ok(())
}

/// `(A⁽¹⁾ ⊗ … ⊗ A⁽ᵖ⁾)·x`, applying `A^[p]` first and `A^[1]` last.
pub fn yates_matvec<R: Ring>(factors: &FactorList<R>, x: &[R]) -> Result<YatesOutput<R>> {
    check_len(factors, x)?;
    let fs = &factors.factors;
    let mut mults = 0u64;
    let mut v = x.to_vec();
    // Before stage ℓ the vector has shape (n_1, …, n_ℓ, m_{ℓ+1}, …, m_p).
    for l in (0..fs.len()).rev() {
        let left: usize = fs[..l].iter().map(Matrix::cols).product();
        let right: usize = fs[l + 1..].iter().map(Matrix::rows).product();
        v = apply_stage(&v, left, &fs[l], right, &mut mults);
    }
    Ok(YatesOutput { vector: v, multiplications: mults })
}

/// Same product with the stages in the opposite order (`A^[1]` first).
pub fn yates_matvec_forward<R: Ring>(factors: &FactorList<R>, x: &[R]) -> Result<YatesOutput<R>> {
    check_len(factors, x)?;
    let fs = &factors.factors;
    let mut mults = 0u64;
    let mut v = x.to_vec();
    // Before stage ℓ the vector has shape (m_1, …, m_{ℓ-1}, n_ℓ, …, n_p).
    for l in 0..fs.len() {
        let left: usize = fs[..l].iter().map(Matrix::rows).product();
        let right: usize = fs[l + 1..].iter().map(Matrix::cols).product();
        v = apply_stage(&v, left, &fs[l], right, &mut mults);
    }
    Ok(YatesOutput { vector: v, multiplications: mults })
}
