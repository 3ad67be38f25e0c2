//! End-to-end runs of the analysis pipeline and cross-module properties.

use proptest::prelude::*;
use quintic_core::normal_form::{block_set_b, classify_torus, BlockClass, Verdict};
use quintic_core::resonance::{default_bound, enumerate_sets};
use quintic_core::small_divisors::{check_a0, check_a1, check_a2, A2Verdict};
use quintic_core::{Error, RhoBox, TorusSpec};

fn spec(internal: &[i64], rho: &[f64], nu: f64, domain: RhoBox) -> TorusSpec {
    TorusSpec::with_domain(internal.to_vec(), rho.to_vec(), nu, domain).unwrap()
}

#[test]
fn two_torus_pipeline_is_stable_and_nonresonant() {
    let nu = 0.01;
    let s = spec(&[0, 1], &[1.5, 1.5], nu, RhoBox::cube(2, 1.0, 2.0));
    let cat = enumerate_sets(&s.internal, default_bound(&s.internal)).unwrap();
    let (eff, class) = classify_torus(&s, &cat).unwrap();
    assert_eq!(class.verdict, Verdict::Stable);
    assert!(class.hyperbolic_modes.is_empty());
    assert!(check_a0(&eff).pass);
    assert!(check_a1(&eff, 4.0 * nu * nu).pass);
    let a2 = check_a2(&eff, 4.0 * nu * nu, 10, &s.domain.grid(8));
    assert!(a2.pass());
    assert_eq!(a2.count(A2Verdict::Violated), 0);
}

#[test]
fn three_torus_pipeline_is_unstable_near_the_resonant_point() {
    let nu = 0.01;
    let s = spec(&[-3, 10, -6], &[2.0, 1.0, 9.0], nu, RhoBox::around(&[2.0, 1.0, 9.0], 1e-2));
    let cat = enumerate_sets(&s.internal, default_bound(&s.internal)).unwrap();
    let (eff, class) = classify_torus(&s, &cat).unwrap();
    assert_eq!(class.verdict, Verdict::Unstable);
    assert_eq!(class.hyperbolic_modes, vec![1, 9]);
    assert!((class.max_im - 108.0 * nu * nu).abs() < 1e-10 * class.max_im);
    let b = eff.block_of(9).unwrap();
    assert_eq!(b.classification, BlockClass::Hyperbolic);
    assert!(check_a2(&eff, nu * nu, 10, &s.domain.grid(4)).pass());
}

#[test]
fn same_torus_is_elliptic_on_the_unit_cube() {
    let s = spec(&[-3, 10, -6], &[1.5, 1.5, 1.5], 0.01, RhoBox::cube(3, 1.0, 2.0));
    let cat = enumerate_sets(&s.internal, default_bound(&s.internal)).unwrap();
    let (_, class) = classify_torus(&s, &cat).unwrap();
    assert_eq!(class.verdict, Verdict::Stable);
}

#[test]
fn refusals_carry_their_reason() {
    let s = spec(&[-4, -3, -1], &[1.5, 1.5, 1.5], 0.01, RhoBox::cube(3, 1.0, 2.0));
    let cat = enumerate_sets(&s.internal, default_bound(&s.internal)).unwrap();
    assert!(!cat.one_mode_solutions.is_empty());
    assert!(matches!(classify_torus(&s, &cat), Err(Error::PreconditionViolated(_))));
    assert!(matches!(enumerate_sets(&[-3, 10, -6], 12), Err(Error::BoundTooSmall { .. })));
}

fn distinct_pair() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, -20i64..=20).prop_filter("distinct", |(p, q)| p != q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_is_independent_of_a_larger_bound((p, q) in distinct_pair()) {
        let b = default_bound(&[p, q]);
        let x = enumerate_sets(&[p, q], b).unwrap();
        let y = enumerate_sets(&[p, q], b + 17).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn external_pairs_avoid_internal_modes_and_resonate((p, q) in distinct_pair()) {
        let cat = enumerate_sets(&[p, q], default_bound(&[p, q])).unwrap();
        for pair in cat.all_pairs() {
            prop_assert!(pair.identities_hold());
            prop_assert!(![p, q].contains(&pair.s) && ![p, q].contains(&pair.t));
        }
    }

    #[test]
    fn two_tori_are_stable((p, q) in distinct_pair(), r1 in 1.0f64..2.0, r2 in 1.0f64..2.0) {
        let s = spec(&[p, q], &[r1, r2], 0.05, RhoBox::cube(2, 1.0, 2.0));
        let cat = enumerate_sets(&s.internal, default_bound(&s.internal)).unwrap();
        match classify_torus(&s, &cat) {
            Ok((_, class)) => prop_assert_eq!(class.verdict, Verdict::Stable),
            Err(e) => prop_assert!(matches!(e, Error::DegenerateBlock { .. }), "{e}"),
        }
    }

    #[test]
    fn b_growth_scales_as_nu_squared(
        d1 in -1e-2f64..1e-2, d2 in -1e-2f64..1e-2, d3 in -1e-2f64..1e-2, nu in 1e-3f64..5e-2,
    ) {
        let rho = [2.0 + d1, 1.0 + d2, 9.0 + d3];
        let cat = enumerate_sets(&[-3, 10, -6], 48).unwrap();
        let im = |nu: f64| {
            let s = spec(&[-3, 10, -6], &rho, nu, RhoBox::around(&rho, 0.0));
            block_set_b(&s, &cat.b[0]).unwrap().max_im
        };
        let ratio = im(2.0 * nu) / im(nu);
        prop_assert!((ratio - 4.0).abs() < 4e-7, "ratio {}", ratio);
    }

    #[test]
    fn hyperbolic_modes_match_block_classes(d1 in -2e-2f64..2e-2, d3 in -2e-2f64..2e-2) {
        let rho = [2.0 + d1, 1.0, 9.0 + d3];
        let s = spec(&[-3, 10, -6], &rho, 0.01, RhoBox::around(&rho, 0.0));
        let cat = enumerate_sets(&s.internal, 48).unwrap();
        let (eff, class) = classify_torus(&s, &cat).unwrap();
        let mut hyper: Vec<i64> = eff
            .blocks
            .iter()
            .filter(|b| b.classification == BlockClass::Hyperbolic)
            .flat_map(|b| b.modes.clone())
            .collect();
        hyper.sort_unstable();
        prop_assert_eq!(&class.hyperbolic_modes, &hyper);
        prop_assert_eq!(class.verdict == Verdict::Unstable, !hyper.is_empty());
        prop_assert_eq!(class.max_im > 0.0, !hyper.is_empty());
    }
}
