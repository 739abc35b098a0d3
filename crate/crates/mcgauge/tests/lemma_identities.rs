//! Composite identities of the ∞-morphism calculus on random data.
//!
//! In the operadic case a composite `(g; h) ⊚ f` with the mark on the outer
//! level equals `h ⊚ f`, so every identity below is phrased with
//! `compose_infty`, `marked_composite`, `right_action` and `star` only.

use std::sync::Arc;

use mcgauge::ainf::random::{random_isotopy, random_series, RandomShape};
use mcgauge::ainf::{compose_infty, differential, invert_infty, marked_composite, right_action, star, OpSeries};
use mcgauge::graded::GradedSpace;
use mcgauge::linalg::Field;
use mcgauge::samples::heisenberg;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A_MAX: usize = 6;

struct Data {
    f: OpSeries,
    g: OpSeries,
    k: OpSeries,
    l: OpSeries,
    l2: OpSeries,
    y: OpSeries,
    phi: OpSeries,
}

fn map(space: &Arc<GradedSpace>, lo: usize, rng: &mut ChaCha8Rng) -> OpSeries {
    let degree = rng.gen_range(-2..=1);
    let shape = RandomShape { degree, arities: lo..=3, entries: 3, normalized: false };
    random_series(space, space, A_MAX, &shape, rng)
}

fn data(seed: u64) -> Data {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = heisenberg(Field::Rational, A_MAX);
    let a = &s.space;
    let iso = |rng: &mut ChaCha8Rng| random_isotopy(a, 3, 2, rng).with_max_arity(A_MAX);
    Data {
        f: iso(&mut rng),
        g: iso(&mut rng),
        k: iso(&mut rng),
        l: map(a, 1, &mut rng),
        l2: map(a, 1, &mut rng),
        y: map(a, 1, &mut rng),
        phi: s.structure.clone(),
    }
}

fn c(a: &OpSeries, b: &OpSeries) -> OpSeries {
    compose_infty(a, b).unwrap()
}

fn m(a: &OpSeries, b: &OpSeries, l: &OpSeries) -> OpSeries {
    marked_composite(a, b, l).unwrap()
}

fn inv(a: &OpSeries) -> OpSeries {
    invert_infty(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn identity_1_outer_associativity(seed in any::<u64>()) {
        let d = data(seed);
        prop_assert_eq!(c(&d.y, &c(&d.g, &d.f)), c(&c(&d.y, &d.g), &d.f));
    }

    #[test]
    fn identity_2_marked_inner_composite(seed in any::<u64>()) {
        let d = data(seed);
        let lhs = m(&c(&d.y, &d.g), &d.f, &d.l);
        let rhs = m(&d.y, &c(&d.g, &d.f), &m(&d.g, &d.f, &d.l));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_3_marked_then_composed(seed in any::<u64>()) {
        let d = data(seed);
        let lhs = c(&m(&d.g, &d.f, &d.l), &d.k);
        let rhs = m(&d.g, &c(&d.f, &d.k), &c(&d.l, &d.k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_4_left_action_is_an_action(seed in any::<u64>()) {
        let d = data(seed);
        prop_assert_eq!(c(&d.phi, &c(&d.f, &d.k)), c(&c(&d.phi, &d.f), &d.k));
    }

    #[test]
    fn identity_5_right_action_of_a_composite(seed in any::<u64>()) {
        let d = data(seed);
        let lhs = right_action(&c(&d.g, &d.f), &d.phi).unwrap();
        let rhs = m(&d.g, &d.f, &right_action(&d.f, &d.phi).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_6_inverse_cancels(seed in any::<u64>()) {
        let d = data(seed);
        prop_assert_eq!(c(&c(&d.l, &inv(&d.f)), &d.f), d.l);
    }

    #[test]
    fn identity_7_conjugated_mark(seed in any::<u64>()) {
        let d = data(seed);
        let finv = inv(&d.f);
        let ginv = inv(&d.g);
        let lhs = c(&right_action(&d.g, &c(&d.l, &finv)).unwrap(), &ginv);
        let rhs = c(&m(&d.g, &d.f, &d.l), &c(&finv, &ginv));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_8_double_mark_as_star(seed in any::<u64>()) {
        let d = data(seed);
        let finv = inv(&d.f);
        let lhs = m(&d.l, &finv, &d.l2);
        let rhs = star(&c(&d.l, &finv), &m(&d.f, &finv, &d.l2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_9_right_action_conjugated(seed in any::<u64>()) {
        let d = data(seed);
        let finv = inv(&d.f);
        let lhs = c(&right_action(&d.f, &d.phi).unwrap(), &finv);
        let rhs = m(&d.f, &finv, &c(&d.phi, &finv));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_of_a_composite(seed in any::<u64>()) {
        let d = data(seed);
        let lhs = differential(&c(&d.g, &d.f)).unwrap();
        let rhs = c(&differential(&d.g).unwrap(), &d.f).add(&m(&d.g, &d.f, &differential(&d.f).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_of_an_inverse(seed in any::<u64>()) {
        let d = data(seed);
        let finv = inv(&d.f);
        let lhs = c(&differential(&d.f).unwrap(), &finv);
        let rhs = m(&d.f, &finv, &differential(&finv).unwrap()).neg();
        prop_assert_eq!(lhs, rhs);
    }
}
