use super::Ring;
use crate::error::{Error, Result};

/// A polynomial in ε over `R`, truncated above degree `bound`.
///
/// The coefficient of ε^k in a product depends only on coefficients of degree
/// at most k in the operands, so truncation never disturbs the coefficients
/// that are kept. Coefficients are stored low degree first with trailing zeros
/// trimmed; at least the constant term is always present.
#[derive(Clone, PartialEq, Debug)]
pub struct EpsPoly<R> {
    coeffs: Vec<R>,
    bound: usize,
}

impl<R: Ring> EpsPoly<R> {
    pub fn constant(c: R, bound: usize) -> Self {
        EpsPoly { coeffs: vec![c], bound }.trimmed()
    }

    /// `c·ε^k`; zero when `k` exceeds the bound.
    pub fn monomial(c: R, k: usize, bound: usize) -> Self {
        if k > bound {
            return Self::constant(c.zero_like(), bound);
        }
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        EpsPoly { coeffs, bound }.trimmed()
    }

    /// Build from coefficients (low degree first); terms above the bound are
    /// dropped. `coeffs` must be nonempty.
    pub fn from_coeffs(mut coeffs: Vec<R>, bound: usize) -> Self {
        assert!(!coeffs.is_empty(), "need at least a constant term");
        coeffs.truncate(bound + 1);
        EpsPoly { coeffs, bound }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Stored coefficients, low degree first (trailing zeros trimmed).
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Degree of the highest nonzero term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// `{ε^k}` of this polynomial.
    pub fn coeff(&self, k: usize) -> Result<R> {
        if k > self.bound {
            return Err(Error::Parameter(format!("ε-degree {k} exceeds bound {}", self.bound)));
        }
        Ok(self.coeffs.get(k).cloned().unwrap_or_else(|| self.coeffs[0].zero_like()))
    }

    /// Truncated product; fails when the bounds differ.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.bound != rhs.bound {
            return Err(Error::Shape(format!("ε-bounds differ: {} vs {}", self.bound, rhs.bound)));
        }
        Ok(self.mul_truncated(rhs))
    }

    fn mul_truncated(&self, rhs: &Self) -> Self {
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(self.bound + 1);
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j].add_assign(&a.mul(b));
            }
        }
        EpsPoly { coeffs: out, bound: self.bound }.trimmed()
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.bound, rhs.bound, "ε-bounds differ");
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..len)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&zero), rhs.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        EpsPoly { coeffs, bound: self.bound }.trimmed()
    }

    /// Multiply every coefficient by a scalar of the base ring.
    pub fn scale(&self, c: &R) -> Self {
        EpsPoly { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(), bound: self.bound }.trimmed()
    }
}

impl<R: Ring> Ring for EpsPoly<R> {
    fn zero_like(&self) -> Self {
        EpsPoly { coeffs: vec![self.coeffs[0].zero_like()], bound: self.bound }
    }

    fn one_like(&self) -> Self {
        EpsPoly { coeffs: vec![self.coeffs[0].one_like()], bound: self.bound }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, R::add)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, R::sub)
    }

    /// Panics when the bounds differ; see [`EpsPoly::try_mul`].
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.bound, rhs.bound, "ε-bounds differ");
        self.mul_truncated(rhs)
    }

    fn neg(&self) -> Self {
        EpsPoly { coeffs: self.coeffs.iter().map(R::neg).collect(), bound: self.bound }
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Self::constant(self.coeffs[0].from_i64_like(v), self.bound)
    }

    fn add_assign(&mut self, rhs: &Self) {
        assert_eq!(self.bound, rhs.bound, "ε-bounds differ");
        if rhs.coeffs.len() > self.coeffs.len() {
            let zero = self.coeffs[0].zero_like();
            self.coeffs.resize(rhs.coeffs.len(), zero);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            a.add_assign(b);
        }
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRational, Gf2};

    fn poly(cs: &[i64], bound: usize) -> EpsPoly<ExactRational> {
        EpsPoly::from_coeffs(cs.iter().map(|&c| ExactRational::integer(c)).collect(), bound)
    }

    #[test]
    fn difference_of_squares() {
        let p = poly(&[1, 1], 2).mul(&poly(&[1, -1], 2));
        assert_eq!(p, poly(&[1, 0, -1], 2));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let e = poly(&[0, 1], 1);
        assert!(e.mul(&e).is_zero());
    }

    #[test]
    fn coefficient_extraction() {
        let a = poly(&[3, 5], 2);
        assert_eq!(a.coeff(0).unwrap(), ExactRational::integer(3));
        assert_eq!(a.coeff(2).unwrap(), ExactRational::integer(0));
        assert!(a.coeff(3).is_err());
        let prod = poly(&[1, 1], 2).mul(&poly(&[2, 1], 2));
        assert_eq!(prod.coeff(1).unwrap(), ExactRational::integer(3));
    }

    #[test]
    fn mismatched_bounds_are_an_error() {
        assert!(poly(&[1], 1).try_mul(&poly(&[1], 2)).is_err());
    }

    #[test]
    fn characteristic_two_signs() {
        let a = EpsPoly::from_coeffs(vec![Gf2::new(1), Gf2::new(-1)], 3);
        assert_eq!(a.add(&a), a.zero_like());
    }
}
