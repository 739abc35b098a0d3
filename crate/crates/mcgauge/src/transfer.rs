//! Homotopy transfer of A∞-structures along a contraction.
//!
//! For a contraction `(i, p, h)` of `A` onto `H` and operations `b` on `A`,
//! put `I₁ = i`, `S_n = Σ_{r ≥ 2} b_r ⊚ (I_{n_1}, …, I_{n_r})` over
//! `n_1 + … + n_r = n`, and `I_n = h ∘ S_n`. Then the transferred operations
//! are `p ∘ S_n`, the ∞-inclusion is `I`, and the ∞-projection is built
//! arity by arity from `p∞_n = (p∞_{<n} ▷ b)_n ⊚ (ip, …, ip, h, 1, …, 1)`.
//! All three outputs are verified before they are returned.

use crate::ainf::{compose, is_infty_morphism, is_mc, right_action, same_space, to_unshifted, AinfError, InnerIndex, OpSeries, Slots};
use crate::graded::{check_contraction, Contraction, ContractionViolation};
use crate::linalg::Scalar;

/// Errors raised by the transfer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    /// The contraction violates one of its side conditions.
    #[error("invalid contraction: {0:?}")]
    InvalidContraction(Vec<ContractionViolation>),
    /// The operations do not live on the big space of the contraction.
    #[error("the operations do not live on the contracted space")]
    SpaceMismatch,
    /// The arity bound is below 2.
    #[error("arity bound {0} is below 2")]
    ArityBound(usize),
    /// The input is not an A∞-structure.
    #[error("the input operations do not satisfy the Stasheff identities")]
    NotMaurerCartan,
    /// A computed output fails its defining identity.
    #[error("transfer output fails verification: {0}")]
    Verification(String),
    /// No unit is declared on the space.
    #[error("no unit is declared on the space")]
    NoUnit,
    /// Error from the operation calculus.
    #[error(transparent)]
    Ainf(#[from] AinfError),
}

/// The transferred structure with its extending ∞-quasi-isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transferred {
    /// Operations on the small space.
    pub structure: OpSeries,
    /// ∞-morphism `H ⇝ A` with arity-1 part `i`.
    pub inclusion: OpSeries,
    /// ∞-morphism `A ⇝ H` with arity-1 part `p`.
    pub projection: OpSeries,
}

/// Transfers `phi` along `c` through arity `arity_max`.
pub fn transfer(phi: &OpSeries, c: &Contraction, arity_max: usize) -> Result<Transferred, TransferError> {
    let bad = check_contraction(c);
    if !bad.is_empty() {
        return Err(TransferError::InvalidContraction(bad));
    }
    if arity_max < 2 {
        return Err(TransferError::ArityBound(arity_max));
    }
    if !same_space(phi.src(), &c.big) || !same_space(phi.tgt(), &c.big) {
        return Err(TransferError::SpaceMismatch);
    }
    let phi = phi.with_max_arity(arity_max);
    if !is_mc(&phi)? {
        return Err(TransferError::NotMaurerCartan);
    }
    let (big, small) = (&c.big, &c.small);
    let mut inclusion = OpSeries::from_linear(&c.i, small, big, 0, arity_max);
    let mut structure = OpSeries::zero_on(small, -1, arity_max);
    for n in 2..=arity_max {
        let idx = InnerIndex::of(&inclusion);
        let s_n = compose(&phi, &Slots::Uniform(&idx), n, n)?.with_max_arity(arity_max);
        structure = structure.add(&s_n.post_apply(&c.p, small, 0))?;
        inclusion = inclusion.add(&s_n.post_apply(&c.h, big, 1))?;
    }
    let ip = OpSeries::from_linear(&c.i.compose(&c.p), big, big, 0, arity_max);
    let hmap = OpSeries::from_linear(&c.h, big, big, 1, arity_max);
    let id = OpSeries::identity(big, arity_max);
    let (ip, hmap, id) = (InnerIndex::of(&ip), InnerIndex::of(&hmap), InnerIndex::of(&id));
    let mut projection = OpSeries::from_linear(&c.p, big, small, 0, arity_max);
    for n in 2..=arity_max {
        let x = right_action(&projection, &phi)?.part(n);
        let p_n = compose(&x, &Slots::Staircase { before: &ip, mark: &hmap, after: &id }, n, n)?.with_max_arity(arity_max);
        projection = projection.add(&p_n)?;
    }
    if !is_mc(&structure)? {
        return Err(TransferError::Verification("transferred operations fail the Stasheff identities".into()));
    }
    if !is_infty_morphism(&inclusion, &structure, &phi)?.0 {
        return Err(TransferError::Verification("the ∞-inclusion is not an ∞-morphism".into()));
    }
    if !is_infty_morphism(&projection, &phi, &structure)?.0 {
        return Err(TransferError::Verification("the ∞-projection is not an ∞-morphism".into()));
    }
    Ok(Transferred { structure, inclusion, projection })
}

/// A failure of strict unitality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitalityViolation {
    /// The unit is not a cycle.
    UnitNotClosed,
    /// `m₂(1, x) ≠ x` or `m₂(x, 1) ≠ x` for the named basis element.
    BinaryUnitLaw(String),
    /// A component of arity at least 3 is nonzero on a tuple containing the unit.
    HigherOnUnit(Vec<String>),
}

/// Checks `d(1) = 0`, `m₂(1, x) = x = m₂(x, 1)` and `m_k(…, 1, …) = 0` for
/// `k ≥ 3`, on the unsuspended operations.
pub fn strict_unitality_check(phi: &OpSeries) -> Result<Vec<UnitalityViolation>, TransferError> {
    let space = phi.src();
    let u = space.unit().ok_or(TransferError::NoUnit)?;
    let one: Scalar = space.field().one();
    let m = to_unshifted(phi);
    let mut out = Vec::new();
    if !space.differential(u).is_zero() {
        out.push(UnitalityViolation::UnitNotClosed);
    }
    for x in 0..space.dim() {
        let expected = crate::linalg::SparseVec(vec![(x, one.clone())]);
        let left = m.eval(&[u as u32, x as u32]);
        let right = m.eval(&[x as u32, u as u32]);
        if left != expected || right != expected {
            out.push(UnitalityViolation::BinaryUnitLaw(space.name(x).to_string()));
        }
    }
    for (k, comp) in m.components() {
        if k < 3 {
            continue;
        }
        for (t, col) in &comp.entries {
            if !col.is_zero() && t.contains(&(u as u32)) {
                out.push(UnitalityViolation::HigherOnUnit(t.iter().map(|&i| space.name(i as usize).to_string()).collect()));
            }
        }
    }
    Ok(out)
}
