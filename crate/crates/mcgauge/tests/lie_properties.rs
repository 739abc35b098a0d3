use std::sync::Arc;

use mcgauge::ainf::random::{random_series, RandomShape};
use mcgauge::ainf::{ConvolutionLie, ConvolutionMode};
use mcgauge::graded::{make_contraction, GradedSpace};
use mcgauge::lie::{
    bch, equivalence_degree, gauge_action, mc_check, triviality_sequence, twist, Degree, FilteredDgLie, LieElement,
    WitnessChoice,
};
use mcgauge::linalg::Field;
use mcgauge::samples::heisenberg;
use mcgauge::transfer::transfer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A_MAX: usize = 6;

fn instance() -> (ConvolutionLie, LieElement) {
    let s = heisenberg(Field::Rational, A_MAX);
    let g = ConvolutionLie::new(&s.space, A_MAX, ConvolutionMode::Full);
    let phi = g.element(&s.structure).unwrap();
    (g, phi)
}

fn random_element(g: &ConvolutionLie, degree: i32, arities: std::ops::RangeInclusive<usize>, rng: &mut ChaCha8Rng) -> LieElement {
    let a: &Arc<GradedSpace> = g.space();
    let normalized = g.mode() == ConvolutionMode::Normalized;
    let shape = RandomShape { degree, arities, entries: 2, normalized };
    g.element(&random_series(a, a, g.arity_max(), &shape, rng)).unwrap()
}

/// The transferred structure of the Heisenberg algebra in the normalized
/// convolution algebra of its homology, together with its binary part.
fn transferred_instance(a_max: usize) -> (ConvolutionLie, LieElement, LieElement) {
    let s = heisenberg(Field::Rational, a_max);
    let c = make_contraction(&s.space).unwrap();
    let t = transfer(&s.structure, &c, a_max).unwrap();
    let g = ConvolutionLie::new(&c.small, a_max, ConvolutionMode::Normalized);
    let phi = g.element(&t.structure).unwrap();
    let psi = phi.weight_part(1);
    (g, phi, psi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gauge_action_is_a_group_action(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi) = instance();
        let lambda = random_element(&g, 0, 2..=3, &mut rng);
        let nu = random_element(&g, 0, 2..=3, &mut rng);
        let lhs = gauge_action(&g, &bch(&g, &lambda, &nu).unwrap(), &phi).unwrap();
        let rhs = gauge_action(&g, &lambda, &gauge_action(&g, &nu, &phi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_action_preserves_maurer_cartan_elements(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi) = instance();
        let lambda = random_element(&g, 0, 2..=4, &mut rng);
        prop_assert!(mc_check(&g, &gauge_action(&g, &lambda, &phi).unwrap()).unwrap());
        prop_assert_eq!(gauge_action(&g, &g.zero(0), &phi).unwrap(), phi);
    }

    #[test]
    fn bch_unit_and_inverses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = instance();
        let lambda = random_element(&g, 0, 2..=3, &mut rng);
        let nu = random_element(&g, 0, 2..=3, &mut rng);
        let mu = random_element(&g, 0, 2..=3, &mut rng);
        prop_assert_eq!(bch(&g, &lambda, &g.zero(0)).unwrap(), lambda.clone());
        prop_assert_eq!(bch(&g, &g.zero(0), &lambda).unwrap(), lambda.clone());
        prop_assert!(bch(&g, &lambda, &lambda.neg()).unwrap().is_zero());
        let left = bch(&g, &bch(&g, &lambda, &nu).unwrap(), &mu).unwrap();
        let right = bch(&g, &lambda, &bch(&g, &nu, &mu).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn twisted_differential_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi) = instance();
        let lambda = random_element(&g, 0, 2..=3, &mut rng);
        let psi = gauge_action(&g, &lambda, &phi).unwrap();
        let h = twist(&g, &psi).unwrap();
        let x = random_element(&g, rng.gen_range(-2..=1), 2..=4, &mut rng);
        prop_assert!(h.differential(&h.differential(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn twisted_gauge_action_on_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi) = instance();
        let nu = random_element(&g, 0, 2..=3, &mut rng);
        let lambda = random_element(&g, 0, 2..=3, &mut rng);
        let psi = gauge_action(&g, &nu, &phi).unwrap();
        let h = twist(&g, &psi).unwrap();
        // λ·φ - ψ in 𝔤 equals λ·(φ - ψ) in 𝔤^ψ, so one vanishes iff the other does
        let lhs = gauge_action(&h, &lambda, &phi.sub(&psi).unwrap()).unwrap();
        let rhs = gauge_action(&g, &lambda, &phi).unwrap().sub(&psi).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_action_is_minus_the_differential_to_first_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi) = instance();
        let w = rng.gen_range(1..=3);
        let lambda = random_element(&g, 0, w + 1..=w + 1, &mut rng);
        let moved = gauge_action(&g, &lambda, &phi).unwrap();
        let first_order = phi.sub(&g.differential(&lambda).unwrap()).unwrap();
        let gap = moved.sub(&first_order).unwrap();
        prop_assert!(gap.in_filtration(w + 1));
        let pure = gauge_action(&g, &lambda, &g.zero(-1)).unwrap();
        prop_assert!(pure.add(&g.differential(&lambda).unwrap()).unwrap().in_filtration(w + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pure_gauge_elements_are_trivial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = heisenberg(Field::Rational, 4);
        let g = ConvolutionLie::new(&s.space, 4, ConvolutionMode::Full);
        let lambda = random_element(&g, 0, 2..=3, &mut rng);
        let phi = gauge_action(&g, &lambda, &g.zero(-1)).unwrap();
        let report = triviality_sequence(&g, &phi, WitnessChoice::Canonical).unwrap();
        prop_assert_eq!(report.degree, Degree::AtLeast(4));
        prop_assert!(report.last.is_zero());
        prop_assert!(gauge_action(&g, &report.gauge, &phi).unwrap().is_zero());
    }

    #[test]
    fn equivalence_degree_ignores_gauge_and_witness_choices(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, phi, psi) = transferred_instance(5);
        let mu = random_element(&g, 0, 2..=3, &mut rng);
        let moved = gauge_action(&g, &mu, &phi).unwrap();
        let canonical = equivalence_degree(&g, &moved, &psi, WitnessChoice::Canonical).unwrap();
        let offset = equivalence_degree(&g, &moved, &psi, WitnessChoice::KernelOffset(seed)).unwrap();
        prop_assert_eq!(canonical.sequence.degree, Degree::Finite(2));
        prop_assert_eq!(offset.sequence.degree, Degree::Finite(2));
    }
}

#[test]
fn equal_elements_have_unbounded_degree() {
    let (g, phi, _) = transferred_instance(5);
    let r = equivalence_degree(&g, &phi, &phi, WitnessChoice::Canonical).unwrap();
    assert_eq!(r.sequence.degree, Degree::AtLeast(5));
    assert!(r.sequence.gauge.is_zero());
}

#[test]
fn gauge_related_elements_have_unbounded_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (g, phi, _) = transferred_instance(5);
    let lambda = random_element(&g, 0, 2..=4, &mut rng);
    let psi = gauge_action(&g, &lambda, &phi).unwrap();
    let r = equivalence_degree(&g, &phi, &psi, WitnessChoice::Canonical).unwrap();
    assert_eq!(r.sequence.degree, Degree::AtLeast(5));
    assert_eq!(gauge_action(&g, &r.sequence.gauge, &phi).unwrap(), psi);
}
