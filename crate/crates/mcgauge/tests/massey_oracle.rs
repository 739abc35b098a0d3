//! An exterior algebra on three generators, written from scratch, computes
//! the triple product `⟨a, a, b⟩` for `dc = ab`; the transferred ternary
//! operation and the first formality obstruction must see the same class.

use mcgauge::ainf::to_unshifted;
use mcgauge::formality::formality_sequence;
use mcgauge::graded::make_contraction;
use mcgauge::linalg::Field;
use mcgauge::samples::heisenberg;
use mcgauge::transfer::transfer;

mod common;

use common::exterior::{d, massey_aab, mono, mul};

#[test]
fn triple_product_is_a_nonzero_class_with_zero_indeterminacy() {
    assert_eq!(d(&mono(4)), mono(3));
    assert!(mul(&mono(1), &mono(1)).is_empty());
    assert_eq!(massey_aab(), ((1, 0), true));
}

#[test]
fn transferred_ternary_operation_matches_the_triple_product() {
    for field in [Field::Rational, Field::prime(5).unwrap(), Field::prime(7).unwrap()] {
        let s = heisenberg(field, 4);
        let c = make_contraction(&s.space).unwrap();
        let phi = transfer(&s.structure, &c, 4).unwrap().structure;
        let h = &c.small;
        let idx = |n: &str| h.index_of(n).unwrap() as u32;
        let m3 = to_unshifted(&phi.part(3));
        let value = m3.eval(&[idx("a"), idx("a"), idx("b")]);
        let ac = h.index_of("ac").unwrap();
        let bc = h.index_of("bc").unwrap();
        let coef = |i: usize| value.get(i).cloned().unwrap_or_else(|| field.zero());
        assert!(coef(bc).is_zero());
        assert!(coef(ac) == field.one() || coef(ac) == -field.one(), "{field}: {}", h.show(&value));

        let r = formality_sequence(&phi, 4).unwrap();
        let step = r.steps.iter().find(|s| s.index == 2).unwrap();
        assert!(!step.vanishes);
        let rep = to_unshifted(&step.representative).eval(&[idx("a"), idx("a"), idx("b")]);
        assert_eq!(rep, value);
        let y = step.certificate.as_ref().unwrap();
        let mut pairing = field.zero();
        for (k, comp) in step.representative.components() {
            for (t, col) in &comp.entries {
                if let Some(ycol) = y.component(k).and_then(|c| c.get(t)) {
                    pairing += &col.dot(ycol, field);
                }
            }
        }
        assert!(!pairing.is_zero());
    }
}
