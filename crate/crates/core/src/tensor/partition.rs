//! The three-way partitioning tensor `P`, its Kronecker powers, the 7×7×7
//! tensor `Q` cut out of `P^⊗3`, and the degree-1 border decomposition of `P`.

use super::{BorderDecomposition, Matrix, Tensor3};
use crate::error::{Error, Result};
use crate::ring::{EpsPoly, Ring, ScalarRing};

/// Largest Kronecker power of `P` built densely (`2^8` per axis).
pub const MAX_DENSE_P_POWER: usize = 8;

/// Largest Kronecker power of `Q` built densely (`7^2` per axis).
pub const MAX_DENSE_Q_POWER: usize = 2;

/// Support of `P`: exactly one of the three indices is 1.
pub const P_SUPPORT: [(usize, usize, usize); 3] = [(0, 0, 1), (0, 1, 0), (1, 0, 0)];

/// The entries of `P^⊗3` turned into zeros to form `Q`.
pub const Q_HOLES: [(usize, usize, usize); 3] = [(0, 0, 7), (0, 7, 0), (7, 0, 0)];

/// `P[x, y, z] = 1` iff exactly one of `x, y, z` is 1.
pub fn build_p<R: ScalarRing>() -> Tensor3<R> {
    Tensor3::from_support((2, 2, 2), &P_SUPPORT).expect("static support")
}

/// `P^⊗n`; `P^⊗0` is the 1×1×1 unit tensor.
pub fn build_p_power<R: ScalarRing>(n: usize) -> Result<Tensor3<R>> {
    if n > MAX_DENSE_P_POWER {
        return Err(Error::TooLarge(format!("P^⊗{n} exceeds the dense limit {MAX_DENSE_P_POWER}")));
    }
    let p = build_p::<R>();
    Ok((0..n).fold(Tensor3::unit(), |acc, _| acc.kron(&p)))
}

/// `Q`: punch the three holes in `P^⊗3`, then drop index 7 on every axis.
pub fn build_q<R: ScalarRing>() -> Tensor3<R> {
    let cube = build_p_power::<R>(3).expect("small power");
    let keep: Vec<usize> = (0..7).collect();
    cube.punch_holes(&Q_HOLES)
        .and_then(|t| t.restrict(&keep, &keep, &keep))
        .expect("indices in range")
}

/// `Q^⊗d`.
pub fn build_q_power<R: ScalarRing>(d: usize) -> Result<Tensor3<R>> {
    if d > MAX_DENSE_Q_POWER {
        return Err(Error::TooLarge(format!("Q^⊗{d} exceeds the dense limit {MAX_DENSE_Q_POWER}")));
    }
    let q = build_q::<R>();
    Ok((0..d).fold(Tensor3::unit(), |acc, _| acc.kron(&q)))
}

fn eps_matrix<R: Ring>(proto: &R, rows: &[[&[i64]; 2]; 2], bound: usize) -> Matrix<EpsPoly<R>> {
    Matrix::from_fn(2, 2, |i, j| {
        EpsPoly::from_coeffs(rows[i][j].iter().map(|&c| proto.from_i64_like(c)).collect(), bound)
    })
}

/// The rank-2, degree-1 border decomposition of `P`:
///
/// ```text
/// Aε = Bε = [1 1; ε 0],  Cε = [1 −1; ε 0],
/// K(Aε, Bε, Cε) = ε·P + ε²·Eε,  Eε = [0 0; 0 1 | 0 1; 1 ε].
/// ```
///
/// Entries carry ε-bound `bound` (at least 1).
pub fn border_p_factors<R: ScalarRing>(bound: usize) -> BorderDecomposition<R> {
    border_p_factors_like(&R::one(), bound)
}

/// [`border_p_factors`] over the ring of `proto`, for rings whose elements
/// need runtime context.
pub fn border_p_factors_like<R: Ring>(proto: &R, bound: usize) -> BorderDecomposition<R> {
    assert!(bound >= 1, "the factors have ε-degree 1");
    let a = eps_matrix(proto, &[[&[1], &[1]], [&[0, 1], &[0]]], bound);
    let b = a.clone();
    let c = eps_matrix(proto, &[[&[1], &[-1]], [&[0, 1], &[0]]], bound);
    let e = |cs: &[i64]| EpsPoly::from_coeffs(cs.iter().map(|&c| proto.from_i64_like(c)).collect(), bound);
    let error = Tensor3::new(
        (2, 2, 2),
        vec![e(&[0]), e(&[0]), e(&[0]), e(&[1]), e(&[0]), e(&[1]), e(&[1]), e(&[0, 1])],
    )
    .expect("2×2×2");
    BorderDecomposition { a, b, c, degree: 1, error: Some(error) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRational, Gf2, Gf3};
    use crate::tensor::Axis;

    #[test]
    fn p_support_and_power_support() {
        let p = build_p::<Gf2>();
        assert_eq!(p.support(), vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)]);
        assert_eq!(build_p_power::<Gf2>(2).unwrap().support_size(), 9);
        assert_eq!(build_p_power::<Gf2>(3).unwrap().support_size(), 27);
        assert_eq!(p.kron(&Tensor3::unit()), p);
        assert!(build_p_power::<Gf2>(9).is_err());
    }

    #[test]
    fn q_shape_and_support() {
        let q = build_q::<Gf2>();
        assert_eq!(q.dims(), (7, 7, 7));
        assert_eq!(q.support_size(), 24);
    }

    #[test]
    fn q_flattenings_coincide() {
        let q = build_q::<ExactRational>();
        let f1 = q.flatten(Axis::First);
        assert_eq!(f1, q.flatten(Axis::Second));
        assert_eq!(f1, q.flatten(Axis::Third));
    }

    #[test]
    fn p_flattening_row_sums() {
        let f = build_p::<ExactRational>().flatten(Axis::First);
        let sums: Vec<_> = (0..2)
            .map(|i| f.row(i).iter().fold(ExactRational::integer(0), |a, b| a.add(b)))
            .collect();
        assert_eq!(sums, vec![ExactRational::integer(2), ExactRational::integer(1)]);
    }

    #[test]
    fn border_factors_match_displayed_entries() {
        let d = border_p_factors::<Gf3>(1);
        assert_eq!(d.c.get(0, 1).coeff(0).unwrap(), Gf3::new(-1));
        assert!(d.degrees_within_bound());
        let d2 = border_p_factors::<Gf2>(1);
        assert_eq!(d2.c.get(0, 1).coeff(0).unwrap(), Gf2::new(1));
    }
}
