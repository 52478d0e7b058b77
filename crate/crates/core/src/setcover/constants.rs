//! The numeric side conditions of the reduction, evaluated in high precision.

use crate::broken::theta_inner;
use crate::error::{Error, Result};
use crate::numeric::{Real, PRECISION_DIGITS};

/// `H(λ) = −λ·log₂λ − (1−λ)·log₂(1−λ)` for `0 < λ < 1`.
pub fn binary_entropy(lambda: &Real) -> Result<Real> {
    let one = Real::from_i64(1);
    if !(lambda.is_positive() && *lambda < one) {
        return Err(Error::Parameter(format!("entropy argument {lambda:.6} must lie in (0, 1)")));
    }
    let rest = one.sub(lambda);
    Ok(lambda.mul(&lambda.log2()?).add(&rest.mul(&rest.log2()?)).neg())
}

/// Result of [`validate_constants`].
#[derive(Clone, Debug)]
pub struct ConstantsCheck {
    /// `(2 − β)·2^κ·2^{H(κ)}`.
    pub lhs: Real,
    /// The largest `j` with `lhs < 2 − 10^{−j}`.
    pub epsilon_exponent: usize,
}

impl ConstantsCheck {
    pub fn epsilon(&self) -> Real {
        Real::from_i64(1).div(&Real::from_i64(10).powi(self.epsilon_exponent))
    }
}

fn constants_lhs(kappa: &Real, beta: &Real) -> Result<Real> {
    if !(beta.is_positive() && *beta < Real::from_i64(2)) {
        return Err(Error::Parameter(format!("β = {beta:.6} must lie in (0, 2)")));
    }
    let h = binary_entropy(kappa)?;
    Ok(Real::from_i64(2).sub(beta).mul(&Real::exp2(kappa)?).mul(&Real::exp2(&h)?))
}

/// Whether `(2 − β)·2^κ·2^{H(κ)} < 2 − ε`.
pub fn check_epsilon(kappa: &Real, beta: &Real, epsilon: &Real) -> Result<bool> {
    Ok(constants_lhs(kappa, beta)? < Real::from_i64(2).sub(epsilon))
}

/// Find the largest `ε = 10^{−j}` with `(2 − β)·2^κ·2^{H(κ)} < 2 − ε`, or
/// fail when even `ε = 10^{−76}` does not fit under the working precision.
pub fn validate_constants(kappa: &Real, beta: &Real) -> Result<ConstantsCheck> {
    let lhs = constants_lhs(kappa, beta)?;
    let two = Real::from_i64(2);
    for j in 0..=PRECISION_DIGITS {
        let eps = Real::from_i64(1).div(&Real::from_i64(10).powi(j));
        if lhs < two.sub(&eps) {
            return Ok(ConstantsCheck { lhs, epsilon_exponent: j });
        }
    }
    Err(Error::Parameter(format!("no ε = 10^-j works: (2−β)·2^κ·2^H(κ) = {lhs:.40}")))
}

/// The two bases of the running-time bound.
#[derive(Clone, Debug)]
pub struct RuntimeBases {
    /// `2^{H(1/3+τ)}·(1 − 3(1/3+τ)³/(1−3σ)³)^{−σ}`.
    pub b1: Real,
    /// `2^{1−3σ}·7^{(1+ρ)σ}·(1 − 3(1/3+τ)³/(1−3σ)³)^{−σ}`.
    pub b2: Real,
}

impl RuntimeBases {
    pub fn max(&self) -> Real {
        self.b1.clone().max(self.b2.clone())
    }

    /// `2 − max(b₁, b₂)`.
    pub fn margin(&self) -> Real {
        Real::from_i64(2).sub(&self.max())
    }
}

/// Evaluate both bases for `0 < σ < 1/12`, `0 < τ < 1/6`, `ρ > 0`.
pub fn runtime_exponent_bases(sigma: &Real, tau: &Real, rho: &Real) -> Result<RuntimeBases> {
    if !rho.is_positive() {
        return Err(Error::Parameter(format!("ρ = {rho:.6} must be positive")));
    }
    let inner = theta_inner(sigma, tau)?;
    let penalty = inner.pow(&sigma.neg())?;
    let one = Real::from_i64(1);
    let h = binary_entropy(&Real::from_ratio(1, 3).add(tau))?;
    let b1 = Real::exp2(&h)?.mul(&penalty);
    let two_part = Real::exp2(&one.sub(&sigma.mul(&Real::from_i64(3))))?;
    let seven_part = Real::from_i64(7).pow(&one.add(rho).mul(sigma))?;
    let b2 = two_part.mul(&seven_part).mul(&penalty);
    Ok(RuntimeBases { b1, b2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(&Real::from_ratio(1, 2)).unwrap(), Real::from_i64(1));
        assert_eq!(binary_entropy(&Real::from_ratio(1, 3)).unwrap().to_sci(7), "9.182958e-1");
        assert!(binary_entropy(&Real::from_i64(1)).is_err());
    }

    #[test]
    fn published_constants() {
        let kappa = Real::from_ratio(1, 10_000_000);
        let beta = Real::from_ratio(1, 100_000);
        let check = validate_constants(&kappa, &beta).unwrap();
        assert!(check.epsilon_exponent <= 7);
        assert!(check_epsilon(&kappa, &beta, &kappa).unwrap());
        let s = Real::from_ratio(1, 1000);
        let bases = runtime_exponent_bases(&s, &s, &s).unwrap();
        assert!(bases.max() < Real::from_i64(2));
    }
}
