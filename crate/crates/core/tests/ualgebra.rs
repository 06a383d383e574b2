mod common;

use common::{ctx, sample_contexts, small_shape};
use ffr_core::random;
use ffr_core::ualgebra::{ad, apply_uelement, bracket, commutator_residual, theta};
use ffr_core::{q, qi, Error, Generator, Kind, UElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Extends the generator bracket linearly to combinations of single
/// generators (scalars are central).
fn lin_bracket(u: &UElement, g: Generator) -> UElement {
    let mut out = UElement::zero();
    for w in u.words() {
        match w.factors.as_slice() {
            [] => {}
            [(h, 1)] => out = out.add(&bracket(*h, g).scale(&w.coeff)),
            other => panic!("not a Lie element: {other:?}"),
        }
    }
    out
}

fn gen_strategy() -> impl Strategy<Value = Generator> {
    prop_oneof![
        (-4i64..=4).prop_map(Generator::E),
        (-4i64..=4).prop_map(Generator::F),
        (-4i64..=4).prop_map(Generator::H),
        Just(Generator::C),
        Just(Generator::Dg),
    ]
}

proptest! {
    #[test]
    fn bracket_is_antisymmetric(a in gen_strategy(), b in gen_strategy()) {
        prop_assert_eq!(bracket(a, b), bracket(b, a).scale(&qi(-1)));
    }

    #[test]
    fn jacobi_identity(a in gen_strategy(), b in gen_strategy(), c in gen_strategy()) {
        let t1 = lin_bracket(&lin_bracket(&UElement::gen(a), b), c);
        let t2 = lin_bracket(&lin_bracket(&UElement::gen(b), c), a);
        let t3 = lin_bracket(&lin_bracket(&UElement::gen(c), a), b);
        prop_assert!(t1.add(&t2).add(&t3).is_zero());
    }

    #[test]
    fn ad_agrees_with_commutator_in_modules(seed in any::<u64>(), which in 0usize..7) {
        let c = &sample_contexts()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random::uelement(&mut rng, 3, 2, 2);
        let g = random::generator(&mut rng, 3);
        let v = random::member(&mut rng, c, &small_shape());
        let lhs = apply_uelement(&ad(g, &u).unwrap(), &v, c).unwrap();
        let comm = UElement::gen(g).mul(&u).sub(&u.mul(&UElement::gen(g)));
        prop_assert_eq!(lhs, apply_uelement(&comm, &v, c).unwrap());
    }
}

#[test]
fn residuals_vanish_on_examples() {
    let c = ctx(Kind::Verma, None, &[], qi(0), qi(0), qi(1));
    let v = common::oracle_apply(Generator::F(-1), &ffr_core::Element::x(2), &c);
    for (a, b) in [
        (Generator::E(1), Generator::F(-1)),
        (Generator::H(2), Generator::H(-2)),
        (Generator::Dg, Generator::E(-3)),
    ] {
        assert!(commutator_residual(a, b, &v, &c).unwrap().is_zero());
    }
}

#[test]
fn theta_on_generators() {
    let z = q(2, 7);
    let h0 = UElement::gen(Generator::H(0));
    assert_eq!(
        theta(&z, &h0, 0).unwrap(),
        h0.add(&UElement::scalar(qi(2) * &z))
    );
    let f = UElement::gen(Generator::F(3));
    assert_eq!(theta(&z, &f, 0).unwrap(), f);
    assert_eq!(
        theta(&qi(0), &UElement::gen(Generator::E(2)), 1).unwrap(),
        UElement::gen(Generator::E(2))
    );
}

#[test]
fn theta_reports_non_nilpotent_inputs() {
    let u = UElement::pow(Generator::E(0), 4);
    assert_eq!(
        ffr_core::ualgebra::theta_with_bound(&q(1, 2), &u, 0, 3),
        Err(Error::NonNilpotent { bound: 3 })
    );
}

/// Twisting by `x_i^{−z}` matches `Θ_z` on the untwisted localization;
/// `Θ` composes additively; for integer `z` it is conjugation by `f_i^z`.
#[test]
fn theta_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, z, w, j, k) in [
        (1, q(2, 7), q(1, 5), q(1, 3), qi(2)),
        (0, q(-1, 2), q(3, 4), qi(0), qi(1)),
        (-2, q(5, 3), q(-2, 3), q(7, 2), q(1, 3)),
    ] {
        let tw_neg = ctx(
            Kind::Twisted,
            Some(i),
            &[],
            -z.clone(),
            j.clone(),
            k.clone(),
        );
        let tw = ctx(Kind::Twisted, Some(i), &[], z.clone(), j.clone(), k.clone());
        let loc = ctx(Kind::LocFull, Some(i), &[], qi(0), j, k);
        for _ in 0..20 {
            let u = random::uelement(&mut rng, 3, 2, 2);
            let v = random::member(&mut rng, &tw, &small_shape());
            let th = theta(&z, &u, i).unwrap();
            assert_eq!(
                apply_uelement(&u, &v, &tw_neg).unwrap(),
                apply_uelement(&th, &v, &loc).unwrap()
            );
            let th_neg = theta(&-z.clone(), &u, i).unwrap();
            assert_eq!(
                apply_uelement(&u, &v, &tw).unwrap(),
                apply_uelement(&th_neg, &v, &loc).unwrap()
            );
            let twice = theta(&z, &theta(&w, &u, i).unwrap(), i).unwrap();
            let once = theta(&(&z + &w), &u, i).unwrap();
            assert_eq!(
                apply_uelement(&twice, &v, &loc).unwrap(),
                apply_uelement(&once, &v, &loc).unwrap()
            );
            let conj = UElement::pow(Generator::F(i), 2)
                .mul(&u)
                .mul(&UElement::pow(Generator::F(i), -2));
            assert_eq!(
                apply_uelement(&theta(&qi(2), &u, i).unwrap(), &v, &loc).unwrap(),
                apply_uelement(&conj, &v, &loc).unwrap()
            );
        }
    }
}
