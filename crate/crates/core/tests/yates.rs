use proptest::prelude::*;
use tcover::ring::{ExactRational, Gf3, Ring, ScalarRing};
use tcover::tensor::{kronecker_mat, Matrix};
use tcover::yates::{yates_matvec, yates_matvec_forward, FactorList};

type Q = ExactRational;

fn dense_product<R: Ring>(fs: &[Matrix<R>]) -> Matrix<R> {
    fs[1..].iter().fold(fs[0].clone(), |acc, f| kronecker_mat(&acc, f))
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = Matrix<Q>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
        prop::collection::vec(-3i64..=3, m * n)
            .prop_map(move |v| Matrix::new(m, n, v.into_iter().map(Q::integer).collect()).unwrap())
    })
}

fn factors_and_vector() -> impl Strategy<Value = (Vec<Matrix<Q>>, Vec<Q>)> {
    prop::collection::vec(matrix_strategy(3), 1..=4).prop_flat_map(|fs| {
        let len: usize = fs.iter().map(Matrix::cols).product();
        (Just(fs), prop::collection::vec((-4i64..=4).prop_map(Q::integer), len))
    })
}

proptest! {
    #[test]
    fn matches_dense_kronecker_product((fs, x) in factors_and_vector()) {
        let dense = dense_product(&fs).matvec(&x).unwrap();
        let list = FactorList::new(fs).unwrap();
        prop_assert_eq!(&yates_matvec(&list, &x).unwrap().vector, &dense);
        prop_assert_eq!(&yates_matvec_forward(&list, &x).unwrap().vector, &dense);
    }

    #[test]
    fn linear_in_the_input((fs, x) in factors_and_vector(), c in -3i64..=3) {
        let list = FactorList::new(fs).unwrap();
        let scaled: Vec<Q> = x.iter().map(|v| v.mul(&Q::integer(c))).collect();
        let y = yates_matvec(&list, &x).unwrap().vector;
        let ys = yates_matvec(&list, &scaled).unwrap().vector;
        let expect: Vec<Q> = y.iter().map(|v| v.mul(&Q::integer(c))).collect();
        prop_assert_eq!(ys, expect);
    }
}

#[test]
fn square_factor_cost_bound() {
    // Dense factors with no zero or unit entries, dense input.
    for b in [2usize, 3] {
        let a = Matrix::from_fn(b, b, |_, _| Gf3::from_i64(2));
        for p in 1..=6 {
            let list = FactorList::repeated(a.clone(), p).unwrap();
            let x = vec![Gf3::from_i64(2); b.pow(p as u32)];
            let out = yates_matvec(&list, &x).unwrap();
            let bound = (b as u64).pow(p as u32 + 1) * p as u64;
            assert!(out.multiplications <= bound, "b={b} p={p}: {} > {bound}", out.multiplications);
        }
    }
}

#[test]
fn zeros_and_ones_cost_nothing() {
    let id = Matrix::<Q>::identity(3);
    let list = FactorList::repeated(id, 4).unwrap();
    let x: Vec<Q> = (0..81).map(Q::integer).collect();
    let out = yates_matvec(&list, &x).unwrap();
    assert_eq!(out.vector, x);
    assert_eq!(out.multiplications, 0);
}

#[test]
fn rejects_bad_lengths() {
    let list = FactorList::repeated(Matrix::<Q>::identity(2), 3).unwrap();
    assert!(yates_matvec(&list, &vec![Q::integer(1); 7]).is_err());
    assert!(FactorList::<Q>::new(Vec::new()).is_err());
}
