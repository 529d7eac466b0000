mod common;

use arithdeg::degree::{
    arithmetic_degree_set, degree_report, dynamical_degree, Block, Delta, DegreeError,
};
use arithdeg::linalg::{charpoly, mat_poly_eval, minpoly_matrix};
use arithdeg::polyfactor::factor_over_q;
use arithdeg::{DegreeOptions, IntMatrix, IntPoly, SemiAbelianEndo};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn char_matrix_at(m: &IntMatrix, t: i64) -> Vec<Vec<BigInt>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { BigInt::from(t) } else { BigInt::from(0) };
                    d - m.get(i, j)
                })
                .collect()
        })
        .collect()
}

fn tol9() -> BigRational {
    BigRational::new(1.into(), BigInt::from(10).pow(9))
}

fn endo_strategy() -> impl Strategy<Value = SemiAbelianEndo> {
    let block = prop_oneof![
        (1usize..=3).prop_flat_map(|n| small_matrix(n, 3)).prop_map(Block::Matrix),
        proptest::collection::vec(-4i64..=4, 1..=3).prop_map(|mut c| {
            c.push(1);
            Block::Poly(IntPoly::from_i64s(&c))
        }),
    ];
    let abelian = prop_oneof![
        (1usize..=2).prop_flat_map(|g| small_matrix(2 * g, 2)).prop_map(Block::Matrix),
        proptest::collection::vec(-4i64..=4, 1..=2).prop_map(|mut c| {
            c.push(1);
            Block::Poly(IntPoly::from_i64s(&c))
        }),
    ];
    (proptest::option::of(block), proptest::option::of(abelian), any::<bool>())
        .prop_filter("nonempty", |(t, a, _)| t.is_some() || a.is_some())
        .prop_map(|(t, a, f)| SemiAbelianEndo::new(t, a, f).unwrap())
}

#[test]
fn hand_oracle_examples() {
    let g = golden();
    let cases: [(Option<&str>, Option<&str>, Vec<f64>, f64); 4] = [
        (Some("t^2 - 3t + 1"), None, vec![1.0, g], g),
        (None, Some("t - 2"), vec![1.0, 4.0], 4.0),
        (Some("t - 2"), Some("t - 2"), vec![1.0, 2.0, 4.0], 4.0),
        (Some("t^2 - 3t + 1"), Some("t - 2"), vec![1.0, g, 4.0], 4.0),
    ];
    for (t, a, set, delta) in cases {
        let e = SemiAbelianEndo::from_polys(t.map(poly), a.map(poly), false).unwrap();
        let d = dynamical_degree(&e, &tol9()).unwrap();
        assert!(d.width() <= tol9());
        assert!((d.midpoint() - delta).abs() < 1e-9);
        let got = arithmetic_degree_set(&e, &DegreeOptions::default()).unwrap();
        assert_eq!(got.len(), set.len());
        for (x, y) in got.iter().zip(&set) {
            assert!((x.midpoint() - y).abs() < 1e-9, "{x} vs {y}");
        }
    }
}

#[test]
fn non_surjective_endo_reports_degree_growth() {
    let e = SemiAbelianEndo::from_polys(Some(poly("t^2")), Some(poly("t^2 - 3t + 3")), false).unwrap();
    assert_eq!(dynamical_degree(&e, &tol9()), Err(DegreeError::NotSurjective));
    let r = degree_report(&e, &DegreeOptions::default()).unwrap();
    assert!(!r.surjective);
    match &r.delta {
        Delta::NotDominant { degree_growth } => assert!((degree_growth.midpoint() - 3.0).abs() < 1e-12),
        d => panic!("unexpected {d:?}"),
    }
    let mids: Vec<f64> = r.alpha_set.iter().map(|x| x.midpoint()).collect();
    assert_eq!(mids.len(), 2);
    assert!((mids[0] - 1.0).abs() < 1e-12 && (mids[1] - 3.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn charpoly_matches_leibniz(m in any_small_matrix()) {
        let chi = charpoly(&m);
        prop_assert!(chi.is_monic());
        prop_assert_eq!(chi.degree(), Some(m.dim()));
        for t in 0..=m.dim() as i64 {
            prop_assert_eq!(chi.eval(&BigInt::from(t)), leibniz_det(&char_matrix_at(&m, t)));
        }
    }

    #[test]
    fn minpoly_divides_charpoly_and_is_minimal(m in any_small_matrix()) {
        let mu = minpoly_matrix(&m);
        prop_assert!(mu.is_monic());
        prop_assert!(mu.divides(&charpoly(&m)));
        prop_assert!(mat_poly_eval(&mu, &m).is_zero());
        // Every proper monic divisor drops one irreducible factor.
        let fp = factor_over_q(&mu).unwrap();
        for i in 0..fp.factors.len() {
            let smaller = fp.factors.iter().enumerate().fold(IntPoly::one(), |acc, (j, (f, e))| {
                let e = if i == j { e - 1 } else { *e };
                &acc * &f.pow(e)
            });
            prop_assert!(!mat_poly_eval(&smaller, &m).is_zero());
        }
    }

    #[test]
    fn block_triangular_charpoly_is_product(
        (a, b, c) in (1usize..=3, 1usize..=3).prop_flat_map(|(n, k)| {
            (small_matrix(n, 3), small_matrix(k, 3),
             proptest::collection::vec(proptest::collection::vec(-3i64..=3, k), n))
        })
    ) {
        let c: Vec<Vec<BigInt>> = c.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let m = IntMatrix::block_upper(&a, &c, &b);
        prop_assert_eq!(charpoly(&m), &charpoly(&a) * &charpoly(&b));
    }

    #[test]
    fn similarity_invariance(
        (m, (u, v)) in (1usize..=4).prop_flat_map(|n| (small_matrix(n, 3), unimodular(n)))
    ) {
        prop_assert!((&u * &v) == IntMatrix::identity(m.dim()));
        let conj = &(&u * &m) * &v;
        prop_assert_eq!(charpoly(&conj), charpoly(&m));
        prop_assert_eq!(minpoly_matrix(&conj), minpoly_matrix(&m));
        let opts = DegreeOptions::default();
        let e1 = SemiAbelianEndo::new(Some(Block::Matrix(m)), None, false).unwrap();
        let e2 = SemiAbelianEndo::new(Some(Block::Matrix(conj)), None, false).unwrap();
        prop_assert_eq!(degree_report(&e1, &opts).unwrap(), degree_report(&e2, &opts).unwrap());
    }

    #[test]
    fn translation_flag_changes_only_itself(e in endo_strategy()) {
        let opts = DegreeOptions::default();
        let mut on = degree_report(&e.with_translation(true), &opts).unwrap();
        let off = degree_report(&e.with_translation(false), &opts).unwrap();
        prop_assert!(on.has_translation && !off.has_translation);
        on.has_translation = false;
        prop_assert_eq!(on, off);
    }

    #[test]
    fn alpha_set_shape(e in endo_strategy()) {
        let r = degree_report(&e, &DegreeOptions::default()).unwrap();
        prop_assert!(r.alpha_set[0].contains_f64(1.0));
        for w in r.alpha_set.windows(2) {
            prop_assert!(w[0].hi() < w[1].lo());
        }
        // The largest arithmetic degree is the dynamical degree.
        let top = r.alpha_set.last().unwrap();
        let d = r.delta.value();
        prop_assert!(top.overlaps(d) || (top.midpoint() - d.midpoint()).abs() < 1e-11,
            "{} vs {}", top, d);
        prop_assert_eq!(r.alpha_one_locus.is_some(), r.surjective);
    }
}
