use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use reductlab::eklab::*;
use reductlab::suites;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Determinant by cofactor expansion.
fn cofactor(m: &[Vec<BigRational>]) -> BigRational {
    if m.is_empty() {
        return BigRational::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigRational>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect()).collect();
            let t = &m[0][j] * cofactor(&minor);
            if j % 2 == 0 { t } else { -t }
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// All minors nonzero, by cofactor expansion; modulo `p` when given.
fn all_minors_nonzero(x: &ExactMatrix, p: Option<i64>) -> bool {
    let (r, c) = (x.rows(), x.cols());
    (1..=r.min(c)).all(|k| {
        (0..r).combinations(k).all(|rows| {
            (0..c).combinations(k).all(|cols| {
                let m: Vec<Vec<BigRational>> = rows.iter().map(|&i| cols.iter().map(|&j| x.get(i, j).clone()).collect()).collect();
                let d = cofactor(&m);
                match p {
                    None => !d.is_zero(),
                    Some(p) => !(d.to_integer() % p).is_zero(),
                }
            })
        })
    })
}

#[test]
fn built_matrices_verify() {
    suites::eklab_build_verifies(6).unwrap();
}

#[test]
fn built_matrices_pass_cofactor_oracle() {
    for m in 1..=4 {
        let x = build_sli_matrix(m, ExactField::Rational, ValueOrder::Canonical).unwrap();
        assert!(all_minors_nonzero(x.matrix(), None));
        let p = suites::greedy_prime(m);
        let y = build_sli_matrix(m, ExactField::prime(p).unwrap(), ValueOrder::Canonical).unwrap();
        assert!(all_minors_nonzero(y.matrix(), Some(p as i64)));
        assert_eq!(y.checked_minors() as u64, minor_count(m, m));
    }
}

#[test]
fn cauchy_matrices_verify() {
    suites::eklab_cauchy(5).unwrap();
}

#[test]
fn zero_counts_stay_below_support() {
    suites::eklab_zero_count_all(4).unwrap();
}

#[test]
fn no_sli_matrix_of_size_four_over_f5() {
    assert_eq!(search_sli(4, 5).unwrap(), None);
    assert!(search_sli(4, 7).unwrap().is_some());
}

#[test]
fn singularizing_value_is_the_unique_root() {
    suites::eklab_singularizing_roots(1000, 3).unwrap();
}

#[test]
fn reduced_power_counts_and_dimensions() {
    suites::eklab_reduced_power(4, 3).unwrap();
    suites::eklab_dimension(3, &[2, 3, 4, 5, 7, 8, 9]).unwrap();
}

#[test]
fn greedy_bound_is_enforced() {
    assert_eq!(prime_bound(6), 252);
    assert_eq!(suites::greedy_prime(6), 257);
    assert!(matches!(
        build_sli_matrix(6, ExactField::prime(251).unwrap(), ValueOrder::Canonical),
        Err(EkError::FieldTooSmall { needed: 252, .. })
    ));
}

proptest! {
    #[test]
    fn verify_agrees_with_cofactor_oracle(n in 1usize..5, entries in proptest::collection::vec(-3i64..4, 16)) {
        let x = ExactMatrix::from_ints(ExactField::Rational, n, n, &entries[..n * n]).unwrap();
        prop_assert_eq!(verify_sli(&x).holds(), all_minors_nonzero(&x, None));
    }

    #[test]
    fn verify_mod_p_agrees_with_cofactor_oracle(n in 1usize..5, pi in 0usize..4, entries in proptest::collection::vec(0i64..11, 16)) {
        let p = [2i64, 3, 7, 11][pi];
        let x = ExactMatrix::from_ints(ExactField::prime(p as u64).unwrap(), n, n, &entries[..n * n]).unwrap();
        prop_assert_eq!(verify_sli(&x).holds(), all_minors_nonzero(&x, Some(p)));
    }

    #[test]
    fn singularizing_value_zeroes_the_determinant(n in 2usize..5, entries in proptest::collection::vec(-5i64..6, 16)) {
        let x = ExactMatrix::from_ints(ExactField::Rational, n, n, &entries[..n * n]).unwrap();
        let head: Vec<usize> = (0..n - 1).collect();
        let ul: Vec<Vec<BigRational>> = head.iter().map(|&i| head.iter().map(|&j| x.get(i, j).clone()).collect()).collect();
        prop_assume!(!cofactor(&ul).is_zero());
        let v = singularizing_value(&x).unwrap();
        let mut rows: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| x.get(i, j).clone()).collect()).collect();
        rows[n - 1][n - 1] = v.clone();
        prop_assert!(cofactor(&rows).is_zero());
        rows[n - 1][n - 1] = v + q(1);
        prop_assert!(!cofactor(&rows).is_zero());
    }

    #[test]
    fn cauchy_with_rational_parameters(a in proptest::collection::btree_set(1i64..30, 1..5), b in proptest::collection::btree_set(1i64..30, 1..5)) {
        let a: Vec<BigRational> = a.into_iter().map(|v| BigRational::new(v.into(), 3.into())).collect();
        let b: Vec<BigRational> = b.into_iter().map(q).collect();
        let x = cauchy_oracle(&a, &b).unwrap();
        prop_assert!(verify_sli(&x).holds());
    }
}
