use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::BlockStructure;
use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::seed::{label, stream};

fn check_ranges(sigma: &Real, tau: &Real) -> Result<()> {
    let zero = Real::from_i64(0);
    if !(*tau > zero && *tau < Real::from_ratio(1, 6)) {
        return Err(Error::Parameter(format!("τ = {tau:.6} must lie in (0, 1/6)")));
    }
    if !(*sigma > zero && *sigma < Real::from_ratio(1, 12)) {
        return Err(Error::Parameter(format!("σ = {sigma:.6} must lie in (0, 1/12)")));
    }
    Ok(())
}

/// `1 − 3(1/3 + τ)³/(1 − 3σ)³`, the per-block survival bound.
pub fn theta_inner(sigma: &Real, tau: &Real) -> Result<Real> {
    check_ranges(sigma, tau)?;
    let num = Real::from_ratio(1, 3).add(tau).powi(3).mul(&Real::from_i64(3));
    let den = Real::from_i64(1).sub(&sigma.mul(&Real::from_i64(3))).powi(3);
    let inner = Real::from_i64(1).sub(&num.div(&den));
    if !inner.is_positive() {
        return Err(Error::Parameter("survival bound is not positive".into()));
    }
    Ok(inner)
}

/// `θ = (1 − 3(1/3 + τ)³/(1 − 3σ)³)^σ` for `0 < τ < 1/6`, `0 < σ < 1/12`.
pub fn theta_value(sigma: &Real, tau: &Real) -> Result<Real> {
    theta_inner(sigma, tau)?.pow(sigma)
}

/// `θ^n`, the lower bound on the probability that a random permutation
/// makes a fixed three-way partition good when `dq ≤ σn`.
pub fn good_probability_lower_bound(n: usize, sigma: &Real, tau: &Real) -> Result<Real> {
    Ok(theta_value(sigma, tau)?.powi(n))
}

/// `s = ⌈θ^{−n}·n⌉` for `0 < θ < 1`.
pub fn repeat_count(n: usize, theta: &Real) -> Result<BigInt> {
    if !(theta.is_positive() && *theta < Real::from_i64(1)) {
        return Err(Error::Parameter(format!("θ = {theta:.6} must lie in (0, 1)")));
    }
    Real::from_i64(n as i64).div(&theta.powi(n)).ceil_bigint()
}

/// Fraction of `trials` uniform permutations `π` under which `π(X)`,
/// `π(Y)` and `π(Z)` are all good. Trial `i` draws its permutation from the
/// stream keyed by `(seed, i)`.
pub fn monte_carlo_good_probability(bs: &BlockStructure, sets: &[u64], trials: u64, seed: u64) -> Result<f64> {
    let n = bs.n();
    if sets.iter().any(|&x| n < 64 && x >> n != 0) {
        return Err(Error::Parameter(format!("sets must be subsets of [{n}]")));
    }
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut stream(seed, &[label::PERMUTATION, i]));
            sets.iter().all(|&x| {
                let image = (0..n).filter(|&j| x >> j & 1 == 1).fold(0u64, |acc, j| acc | 1 << perm[j]);
                bs.is_good(image)
            })
        })
        .count();
    Ok(hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeat_count_example() {
        assert_eq!(repeat_count(3, &Real::from_ratio(1, 2)).unwrap(), BigInt::from(24));
        assert!(repeat_count(3, &Real::from_i64(1)).is_err());
    }

    #[test]
    fn theta_in_unit_interval() {
        let s = Real::from_ratio(1, 1000);
        let th = theta_value(&s, &s).unwrap();
        assert!(th.is_positive() && th < Real::from_i64(1));
        assert!(theta_value(&Real::from_ratio(1, 12), &s).is_err());
        assert!(theta_value(&s, &Real::from_ratio(1, 6)).is_err());
    }

    #[test]
    fn monte_carlo_trivial_cases() {
        let bs = BlockStructure::new(0, 1, 1).unwrap();
        assert_eq!(monte_carlo_good_probability(&bs, &[0b111], 50, 1).unwrap(), 0.0);
        assert_eq!(monte_carlo_good_probability(&bs, &[0b011, 0b100], 50, 1).unwrap(), 1.0);
    }
}
