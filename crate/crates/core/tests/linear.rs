use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use exactcat::intlin::{column_lattice_basis, smith_normal_form, solve_integer, Mat};

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = Mat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |e| Mat::from_i64(r, c, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_certified_decomposition(a in matrix(6, 9)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        prop_assert_eq!(&s.u_inv * &s.u, Mat::identity(a.rows()));
        prop_assert_eq!(&s.v_inv * &s.v, Mat::identity(a.cols()));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|d| d.is_positive()));
        prop_assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
    }

    #[test]
    fn square_determinant_is_the_product_of_factors(a in (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-9i64..=9, n * n).prop_map(move |e| Mat::from_i64(n, n, &e))
    })) {
        let s = smith_normal_form(&a);
        let det = a.determinant().unwrap().abs();
        let prod: BigInt = if s.rank() == a.rows() { s.invariant_factors().iter().product() } else { BigInt::zero() };
        prop_assert_eq!(det, prod);
    }

    #[test]
    fn smith_form_is_idempotent(a in matrix(5, 20)) {
        let d = smith_normal_form(&a).d;
        prop_assert_eq!(smith_normal_form(&d).d, d);
    }

    #[test]
    fn consistent_systems_are_solved(a in matrix(5, 9), seed in prop::collection::vec(-5i64..=5, 5)) {
        let x = Mat::from_i64(a.cols(), 1, &seed[..a.cols()]);
        let b = &a * &x;
        let sol = solve_integer(&a, &b).unwrap();
        let p = sol.particular.expect("b is in the column lattice");
        prop_assert_eq!(&a * &p, b);
        prop_assert!((&a * &sol.kernel).is_zero());
        // x − p lies in the span of the kernel basis
        let diff = &x - &p;
        prop_assert!(solve_integer(&sol.kernel, &diff).unwrap().particular.is_some());
    }

    #[test]
    fn lattice_basis_spans_the_same_lattice(a in matrix(4, 9)) {
        let basis = column_lattice_basis(&a);
        prop_assert!(solve_integer(&basis, &a).unwrap().particular.is_some());
        prop_assert!(solve_integer(&a, &basis).unwrap().particular.is_some());
        prop_assert_eq!(basis.cols(), smith_normal_form(&a).rank());
    }
}

#[test]
fn unsolvable_modulo_a_factor() {
    let a = Mat::from_i64(1, 1, &[2]);
    let sol = solve_integer(&a, &Mat::from_i64(1, 1, &[3])).unwrap();
    assert!(sol.particular.is_none());
    assert_eq!(sol.kernel.cols(), 0);
}

#[test]
fn text_round_trip() {
    let a = Mat::from_rows(3, &[&[1, -2, 0], &[4, 5, 6]]);
    assert_eq!(a.to_text().parse::<Mat>().unwrap(), a);
}
