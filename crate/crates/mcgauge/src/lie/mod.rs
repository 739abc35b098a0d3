//! Complete weight-filtered dg Lie algebras truncated at a maximal weight,
//! their Maurer-Cartan elements, the gauge group, and the obstruction
//! sequences deciding gauge equivalence.
//!
//! Every algebra is handled through the [`FilteredDgLie`] trait, which
//! exposes a bracket and a differential on [`LieElement`]s plus a finite
//! basis for each weight and degree. An element stores coefficients on basis
//! keys, grouped by weight; the filtration `ℱⁿ` consists of the elements
//! supported in weights at least `n`. All results are computed modulo
//! `ℱ^{W+1}`, where `W` is the truncation weight of the algebra.

mod element;
mod gauge;
mod obstruction;
mod tabulated;
mod twisted;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::linalg::Field;

pub use element::{Key, LieElement};
pub use gauge::{bch, bernoulli_numbers, gauge_action, mc_check, mc_residual};
pub use obstruction::{
    bounded_certificate, equivalence_degree, obstruction_step, triviality_sequence, triviality_sequence_to,
    weight_graded_certificate, Certified, Degree, EquivalenceReport, ObstructionStep, QuotientData, StepOutcome,
    TrivialityReport, Verdict, WitnessChoice,
};
pub use tabulated::TabulatedDgLie;
pub use twisted::{twist, Twisted};

/// Errors raised by the Lie layer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    /// Operands belong to different algebras.
    #[error("elements belong to different algebras")]
    OwnerMismatch,
    /// An element has the wrong degree.
    #[error("element of degree {found} where degree {expected} is required")]
    DegreeMismatch {
        /// Degree found.
        found: i32,
        /// Degree required.
        expected: i32,
    },
    /// A coefficient that must be inverted is not a unit.
    #[error("{0} is not invertible in the ground field")]
    NotInvertible(String),
    /// An element that must be Maurer-Cartan is not.
    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),
    /// A hypothesis of a construction does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// A basis is too large or malformed.
    #[error("basis: {0}")]
    Basis(String),
    /// An internal consistency check failed.
    #[error("internal verification failed: {0}")]
    Audit(String),
}

/// Identifier for a newly constructed algebra.
pub(crate) fn fresh_owner_id() -> u64 {
    static NEXT: AtomicU64 = AtomicU64::new(1);
    NEXT.fetch_add(1, Ordering::Relaxed)
}

/// A complete dg Lie algebra whose filtration comes from a weight grading,
/// truncated at [`weight_max`](FilteredDgLie::weight_max).
///
/// Implementations provide the unchecked operations; the provided methods
/// add the ownership checks.
pub trait FilteredDgLie: Send + Sync {
    /// Identifier shared by all elements of this algebra and of its twists.
    fn owner_id(&self) -> u64;

    /// Ground field.
    fn field(&self) -> Field;

    /// Truncation weight `W`: components of weight above `W` are dropped.
    fn weight_max(&self) -> usize;

    /// The bracket of two elements of this algebra, truncated.
    fn raw_bracket(&self, x: &LieElement, y: &LieElement) -> LieElement;

    /// The differential of an element of this algebra, truncated.
    fn raw_differential(&self, x: &LieElement) -> LieElement;

    /// Ordered basis keys of the component of the given weight and degree.
    fn basis(&self, weight: usize, degree: i32) -> Result<Vec<Key>, LieError>;

    /// Display name of a basis key.
    fn label(&self, weight: usize, key: &[u32]) -> String;

    /// The weight shifts of the differential: `s` is present when `d` has a
    /// component mapping weight `k` to weight `k + s`. `None` when the
    /// algebra does not declare a weight-graded differential.
    fn differential_weight_shifts(&self) -> Option<BTreeSet<usize>>;

    /// The least `η ≥ 1` such that the degree `-1` part vanishes in every
    /// weight at least `η`, when it is known to exist.
    fn degree_minus_one_bound(&self) -> Option<usize>;

    /// The zero element of a degree.
    fn zero(&self, degree: i32) -> LieElement {
        LieElement::zero(self.owner_id(), self.field(), degree)
    }

    /// The bracket `[x, y]`.
    fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
        self.check_owner(x)?;
        self.check_owner(y)?;
        Ok(self.raw_bracket(x, y))
    }

    /// The differential `d x`.
    fn differential(&self, x: &LieElement) -> Result<LieElement, LieError> {
        self.check_owner(x)?;
        Ok(self.raw_differential(x))
    }

    /// Fails unless `x` belongs to this algebra.
    fn check_owner(&self, x: &LieElement) -> Result<(), LieError> {
        if x.owner() != self.owner_id() || x.field() != self.field() {
            return Err(LieError::OwnerMismatch);
        }
        Ok(())
    }

    /// One line per nonzero coefficient.
    fn render(&self, x: &LieElement) -> String {
        let mut s = String::new();
        for (w, key, c) in x.terms() {
            s.push_str(&format!("  w{w} {} : {c}\n", self.label(w, key)));
        }
        s
    }
}

/// Structural audit of an algebra on the basis elements of the listed
/// degrees: antisymmetry, the Jacobi identity on triples of total weight at
/// most `W`, `d² = 0`, and the derivation rule. Returns one message per
/// violation.
pub fn audit(g: &dyn FilteredDgLie, degrees: &[i32]) -> Result<Vec<String>, LieError> {
    let field = g.field();
    let mut elems: Vec<(usize, LieElement)> = Vec::new();
    for w in 1..=g.weight_max() {
        for &d in degrees {
            for key in g.basis(w, d)? {
                let mut e = g.zero(d);
                e.add_term(w, key, field.one());
                elems.push((w, e));
            }
        }
    }
    let mut bad = Vec::new();
    let sign = |a: &LieElement, b: &LieElement| field.sign(a.degree() as i64 * b.degree() as i64);
    for (wx, x) in &elems {
        let dd = g.raw_differential(&g.raw_differential(x));
        if !dd.is_zero() {
            bad.push(format!("d^2 != 0 on {}", g.render(x).trim()));
        }
        for (wy, y) in &elems {
            if wx + wy > g.weight_max() {
                continue;
            }
            let xy = g.raw_bracket(x, y);
            let yx = g.raw_bracket(y, x);
            if xy.add_scaled(&sign(x, y), &yx).map_or(true, |s| !s.is_zero()) {
                bad.push(format!("antisymmetry fails on {} / {}", g.render(x).trim(), g.render(y).trim()));
            }
            let lhs = g.raw_differential(&xy);
            let rhs = g
                .raw_bracket(&g.raw_differential(x), y)
                .add_scaled(&field.sign(x.degree() as i64), &g.raw_bracket(x, &g.raw_differential(y)))
                .expect("same degree");
            if lhs != rhs {
                bad.push(format!("derivation rule fails on {} / {}", g.render(x).trim(), g.render(y).trim()));
            }
            for (wz, z) in &elems {
                if wx + wy + wz > g.weight_max() {
                    continue;
                }
                let t1 = g.raw_bracket(x, &g.raw_bracket(y, z)).scale(&sign(x, z));
                let t2 = g.raw_bracket(y, &g.raw_bracket(z, x)).scale(&sign(y, x));
                let t3 = g.raw_bracket(z, &g.raw_bracket(x, y)).scale(&sign(z, y));
                let total = t1.add(&t2).and_then(|t| t.add(&t3));
                if total.map_or(true, |t| !t.is_zero()) {
                    bad.push(format!(
                        "Jacobi fails on {} / {} / {}",
                        g.render(x).trim(),
                        g.render(y).trim(),
                        g.render(z).trim()
                    ));
                }
            }
        }
    }
    Ok(bad)
}
