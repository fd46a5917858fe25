use mdist::counting::enumerate_reciprocal;
use mdist::distfun::{distance, RootFunctionKind};
use mdist::exactalg::{determinant, pfaffian, BigRational, SkewMatrix};
use mdist::moments::{MomentClosedForm, MomentType};
use mdist::polyroots::Polynomial;
use num_bigint::BigInt;
use proptest::prelude::*;

fn kinds() -> Vec<RootFunctionKind> {
    ["mahler", "reciprocal", "trec:1/3"].iter().map(|k| k.parse().unwrap()).collect()
}

/// Generic real coefficients, so clustered roots (which cost accuracy in
/// double precision) almost never occur.
fn real_poly() -> impl Strategy<Value = Vec<f64>> {
    (1usize..5).prop_flat_map(|len| {
        (0.5f64..4.0, prop::collection::vec(-5.0f64..5.0, len)).prop_map(|(lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            c
        })
    })
}

fn int_poly() -> impl Strategy<Value = Vec<i64>> {
    (1usize..5).prop_flat_map(|len| {
        (1i64..6, prop::collection::vec(-6i64..=6, len)).prop_map(|(lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            c
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_multiplicative(p in real_poly(), q in real_poly()) {
        let (p, q) = (Polynomial::from_real(&p), Polynomial::from_real(&q));
        let pq = &p * &q;
        for kind in kinds() {
            let lhs = distance(&kind, &pq).unwrap().0;
            let rhs = distance(&kind, &p).unwrap().0 * distance(&kind, &q).unwrap().0;
            prop_assert!((lhs - rhs).abs() <= 1e-7 * rhs.max(1.0), "{}: {lhs} vs {rhs}", kind.label());
        }
    }

    #[test]
    fn mahler_measure_is_invariant_under_reflection(p in int_poly()) {
        let reflected: Vec<i64> = p.iter().rev().copied().collect();
        prop_assume!(reflected[0] != 0);
        let kind = RootFunctionKind::Mahler;
        let a = distance(&kind, &Polynomial::from_ints(&p)).unwrap().0;
        let b = distance(&kind, &Polynomial::from_ints(&reflected)).unwrap().0;
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1.0));
    }

    #[test]
    fn pfaffian_squares_to_determinant(half in 1usize..4, seed in prop::collection::vec(-9i64..=9, 21)) {
        let size = 2 * half;
        let mut next = seed.iter().cycle();
        let skew = SkewMatrix::from_upper(size, |_, _| BigRational::from_integer(BigInt::from(*next.next().unwrap())));
        let pf = pfaffian(&skew).unwrap();
        let det = determinant(skew.matrix()).unwrap();
        prop_assert_eq!(&pf * &pf, det);
    }
}

#[test]
fn counts_grow_with_the_bound() {
    let mut previous = 0;
    for bound in [2.0, 4.0, 8.0, 16.0] {
        let count = enumerate_reciprocal(2, bound, Some(1), false).unwrap().exact_count;
        assert!(count >= previous, "count fell from {previous} to {count} at T = {bound}");
        previous = count;
    }
}

#[test]
fn closed_form_poles_are_nonzero_integers_bounded_by_the_degree() {
    for kind in kinds() {
        for moment in [MomentType::H, MomentType::F] {
            let Ok(form) = MomentClosedForm::for_kind(&kind, moment, 3) else {
                assert!(matches!(kind, RootFunctionKind::TReciprocal(_)) && moment == MomentType::F);
                continue;
            };
            assert!(form.poles().iter().all(|&(at, order)| (1..=3).contains(&at.abs()) && order >= 1), "{}", form);
        }
    }
}
