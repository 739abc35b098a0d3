//! Homogeneous elements of a weight-filtered Lie algebra.

use std::collections::BTreeMap;

use crate::linalg::{Field, Scalar};

use super::LieError;

/// A basis key inside one weight component; its meaning is fixed by the
/// owning algebra.
pub type Key = Vec<u32>;

/// A homogeneous element: coefficients on basis keys, grouped by weight.
///
/// Zero coefficients and empty weights are never stored, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    owner: u64,
    field: Field,
    degree: i32,
    comps: BTreeMap<usize, BTreeMap<Key, Scalar>>,
}

impl LieElement {
    /// The zero element of a degree.
    pub fn zero(owner: u64, field: Field, degree: i32) -> LieElement {
        LieElement { owner, field, degree, comps: BTreeMap::new() }
    }

    /// Identifier of the owning algebra.
    pub fn owner(&self) -> u64 {
        self.owner
    }

    /// Ground field.
    pub fn field(&self) -> Field {
        self.field
    }

    /// Degree.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Adds `c` to the coefficient of `key` in weight `weight`.
    ///
    /// # Panics
    /// Panics on weight 0 or a scalar from another field.
    pub fn add_term(&mut self, weight: usize, key: Key, c: Scalar) {
        assert!(weight >= 1, "weights start at 1");
        assert_eq!(c.field(), self.field, "scalar from another field");
        if c.is_zero() {
            return;
        }
        let comp = self.comps.entry(weight).or_default();
        let slot = comp.entry(key).or_insert_with(|| self.field.zero());
        *slot += &c;
        if slot.is_zero() {
            comp.retain(|_, v| !v.is_zero());
        }
        if comp.is_empty() {
            self.comps.remove(&weight);
        }
    }

    /// Coefficient of a basis key.
    pub fn coefficient(&self, weight: usize, key: &[u32]) -> Scalar {
        self.comps.get(&weight).and_then(|c| c.get(key)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Weights carrying a nonzero component, in increasing order.
    pub fn weights(&self) -> Vec<usize> {
        self.comps.keys().copied().collect()
    }

    /// All nonzero coefficients as `(weight, key, coefficient)`, ordered.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Key, &Scalar)> {
        self.comps.iter().flat_map(|(w, c)| c.iter().map(move |(k, s)| (*w, k, s)))
    }

    /// Number of nonzero coefficients.
    pub fn nnz(&self) -> usize {
        self.comps.values().map(BTreeMap::len).sum()
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The lowest weight with a nonzero component.
    pub fn lowest_weight(&self) -> Option<usize> {
        self.comps.keys().next().copied()
    }

    /// True when the element lies in `ℱⁿ`, i.e. vanishes in weights below `n`.
    pub fn in_filtration(&self, n: usize) -> bool {
        self.lowest_weight().is_none_or(|w| w >= n)
    }

    /// The weight-`w` component `x^{(w)}`.
    pub fn weight_part(&self, w: usize) -> LieElement {
        self.restrict(w, w)
    }

    /// The components with weight in `lo..=hi`.
    pub fn restrict(&self, lo: usize, hi: usize) -> LieElement {
        let mut out = self.clone();
        out.comps.retain(|w, _| *w >= lo && *w <= hi);
        out
    }

    /// The same coefficients, reassigned to another algebra over the same
    /// field (used when passing between an algebra and a twist of it).
    pub fn with_owner(&self, owner: u64) -> LieElement {
        let mut out = self.clone();
        out.owner = owner;
        out
    }

    fn check(&self, other: &LieElement) -> Result<(), LieError> {
        if self.owner != other.owner || self.field != other.field {
            return Err(LieError::OwnerMismatch);
        }
        if self.degree != other.degree {
            return Err(LieError::DegreeMismatch { found: other.degree, expected: self.degree });
        }
        Ok(())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &LieElement) -> Result<LieElement, LieError> {
        self.check(other)?;
        let mut out = self.clone();
        if c.is_zero() {
            return Ok(out);
        }
        for (w, k, s) in other.terms() {
            out.add_term(w, k.clone(), c * s);
        }
        Ok(out)
    }

    /// `self + other`.
    pub fn add(&self, other: &LieElement) -> Result<LieElement, LieError> {
        self.add_scaled(&self.field.one(), other)
    }

    /// `self - other`.
    pub fn sub(&self, other: &LieElement) -> Result<LieElement, LieError> {
        self.add_scaled(&self.field.from_i64(-1), other)
    }

    /// `c * self`.
    pub fn scale(&self, c: &Scalar) -> LieElement {
        let mut out = LieElement::zero(self.owner, self.field, self.degree);
        for (w, k, s) in self.terms() {
            out.add_term(w, k.clone(), c * s);
        }
        out
    }

    /// `-self`.
    pub fn neg(&self) -> LieElement {
        self.scale(&self.field.from_i64(-1))
    }
}
