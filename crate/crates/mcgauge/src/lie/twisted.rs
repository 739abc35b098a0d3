//! The twisted algebra `𝔤^ψ` with differential `d + [ψ, -]`.

use std::collections::BTreeSet;

use crate::linalg::Field;

use super::gauge::mc_residual;
use super::{FilteredDgLie, Key, LieElement, LieError};

/// The algebra `𝔤^ψ`: same bracket and basis, differential `d + ad_ψ`.
///
/// Elements of `𝔤` are elements of `𝔤^ψ` and conversely.
pub struct Twisted<'a> {
    inner: &'a dyn FilteredDgLie,
    psi: LieElement,
}

/// Twists `g` by a Maurer-Cartan element `ψ`.
pub fn twist<'a>(g: &'a dyn FilteredDgLie, psi: &LieElement) -> Result<Twisted<'a>, LieError> {
    let r = mc_residual(g, psi)?;
    if !r.is_zero() {
        return Err(LieError::NotMaurerCartan(format!("residual with {} terms", r.nnz())));
    }
    Ok(Twisted { inner: g, psi: psi.clone() })
}

impl Twisted<'_> {
    /// The twisting element.
    pub fn psi(&self) -> &LieElement {
        &self.psi
    }

    /// The untwisted algebra.
    pub fn inner(&self) -> &dyn FilteredDgLie {
        self.inner
    }
}

impl FilteredDgLie for Twisted<'_> {
    fn owner_id(&self) -> u64 {
        self.inner.owner_id()
    }

    fn field(&self) -> Field {
        self.inner.field()
    }

    fn weight_max(&self) -> usize {
        self.inner.weight_max()
    }

    fn raw_bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        self.inner.raw_bracket(x, y)
    }

    fn raw_differential(&self, x: &LieElement) -> LieElement {
        self.inner.raw_differential(x).add(&self.inner.raw_bracket(&self.psi, x)).expect("same degree")
    }

    fn basis(&self, weight: usize, degree: i32) -> Result<Vec<Key>, LieError> {
        self.inner.basis(weight, degree)
    }

    fn label(&self, weight: usize, key: &[u32]) -> String {
        self.inner.label(weight, key)
    }

    fn differential_weight_shifts(&self) -> Option<BTreeSet<usize>> {
        let mut s = self.inner.differential_weight_shifts()?;
        s.extend(self.psi.weights());
        Some(s)
    }

    fn degree_minus_one_bound(&self) -> Option<usize> {
        self.inner.degree_minus_one_bound()
    }
}
