use std::sync::Arc;

use mcgauge::ainf::random::{random_series, RandomShape};
use mcgauge::ainf::{is_mc, isotopy_action, OpSeries};
use mcgauge::formality::{
    formality_sequence, kaledin_obstruction_consistency, kaledin_truncated, ObstructionVerdict,
};
use mcgauge::graded::{make_contraction, GradedSpace};
use mcgauge::lie::Degree;
use mcgauge::linalg::Field;
use mcgauge::samples::{f3, heisenberg};
use mcgauge::transfer::transfer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn heisenberg_minimal(field: Field, arity_max: usize) -> OpSeries {
    let s = heisenberg(field, arity_max);
    let c = make_contraction(&s.space).unwrap();
    transfer(&s.structure, &c, arity_max).unwrap().structure
}

fn fixtures(field: Field, arity_max: usize) -> Vec<(&'static str, OpSeries)> {
    vec![("heisenberg", heisenberg_minimal(field, arity_max)), ("f3", f3(field, arity_max).structure)]
}

/// `1 + λ` with `λ` avoiding the unit, so that unitality is preserved.
fn normalized_isotopy(space: &Arc<GradedSpace>, arity_max: usize, seed: u64) -> OpSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = RandomShape { degree: 0, arities: 2..=arity_max, entries: 3, normalized: true };
    let lambda = random_series(space, space, arity_max, &shape, &mut rng);
    OpSeries::identity(space, arity_max).add(&lambda).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kaledin_classes_are_isotopy_invariant(seed in any::<u64>(), which in 0usize..2) {
        let a_max = 5;
        let (_, phi) = fixtures(Field::Rational, a_max).swap_remove(which);
        let f = normalized_isotopy(phi.src(), a_max, seed);
        let moved = isotopy_action(&f, &phi).unwrap();
        prop_assert!(is_mc(&moved).unwrap());
        for n in 1..=3 {
            let before = kaledin_truncated(&phi, n, a_max).unwrap().vanishes;
            let after = kaledin_truncated(&moved, n, a_max).unwrap().vanishes;
            prop_assert_eq!(before, after, "order {}", n);
        }
        let d0 = formality_sequence(&phi, a_max).unwrap().degree;
        let d1 = formality_sequence(&moved, a_max).unwrap().degree;
        prop_assert_eq!(d0, d1);
    }

    #[test]
    fn prime_fields_agree_with_the_rationals_below_the_cap(seed in any::<u64>(), which in 0usize..2) {
        let a_max = 6;
        let (_, phi_q) = fixtures(Field::Rational, a_max).swap_remove(which);
        let f = normalized_isotopy(phi_q.src(), a_max, seed);
        let moved_q = isotopy_action(&f, &phi_q).unwrap();
        let rq = formality_sequence(&moved_q, a_max).unwrap();
        for p in [5u32, 7] {
            let field = Field::prime(p).unwrap();
            let (_, phi_p) = fixtures(field, a_max).swap_remove(which);
            let f_p = reduce(&f, phi_p.src());
            let moved_p = isotopy_action(&f_p, &phi_p).unwrap();
            let rp = formality_sequence(&moved_p, a_max).unwrap();
            prop_assert_eq!(rp.cap, (a_max).min(p as usize + 1));
            for (sq, sp) in rq.steps.iter().zip(&rp.steps) {
                prop_assert_eq!(sq.index, sp.index);
                prop_assert_eq!(sq.vanishes, sp.vanishes, "index {} over F{}", sq.index, p);
            }
        }
    }
}

/// The same integer coefficients read in another field.
fn reduce(f: &OpSeries, space: &Arc<GradedSpace>) -> OpSeries {
    let field = space.field();
    let mut out = OpSeries::zero_on(space, f.degree(), f.max_arity());
    for (_, comp) in f.components() {
        for (t, col) in &comp.entries {
            for (o, c) in &col.0 {
                out.add_entry(t.clone(), *o, field.parse(&c.to_string()).unwrap());
            }
        }
    }
    out
}

#[test]
fn kaledin_consistency_for_both_fixtures() {
    let a_max = 7;
    for (name, phi) in fixtures(Field::Rational, a_max) {
        for n in 2..=5 {
            let k = kaledin_obstruction_consistency(&phi, n, a_max).unwrap();
            assert!(k.consistent(), "{name}, n = {n}: {k:?}");
            let expected = name == "f3";
            assert_eq!(k.kaledin_vanishes, expected, "{name}, n = {n}");
        }
    }
}

#[test]
fn characteristic_five_caps_at_six() {
    let phi = heisenberg_minimal(Field::prime(5).unwrap(), 7);
    let r = formality_sequence(&phi, 7).unwrap();
    assert_eq!(r.cap, 6);
    assert_eq!(r.degree, Degree::Finite(2));
    let f = f3(Field::prime(5).unwrap(), 7).structure;
    let r = formality_sequence(&f, 7).unwrap();
    assert_eq!(r.cap, 6);
    assert_eq!(r.verdict, ObstructionVerdict::FormalCertified);
    assert!(kaledin_truncated(&f, 5, 7).is_err());
    assert!(kaledin_truncated(&f, 4, 7).unwrap().vanishes);
}
