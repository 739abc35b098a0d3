//! Products, differentials and ∞-morphism calculus on operation families.
//!
//! Conventions: `g ⊚ f` evaluates `g` after `f` placed in every input slot;
//! `g ⊚ (f; l)` places `l` in exactly one slot and `f` in the others. With
//! `1` the identity, `x ⋆ y = x ⊚ (1; y)`, `f ▷ φ = f ⊚ (1; φ)` and
//! `ψ ◁ f = ψ ⊚ f`.

use crate::linalg::{Matrix, SparseVec};

use super::compose::{compose, InnerIndex, Slots};
use super::series::{same_space, OpSeries};
use super::AinfError;

fn cap(a: &OpSeries, b: &OpSeries) -> usize {
    a.max_arity().min(b.max_arity())
}

/// `g ⊚ f`.
pub fn compose_infty(g: &OpSeries, f: &OpSeries) -> Result<OpSeries, AinfError> {
    let idx = InnerIndex::of(f);
    compose(g, &Slots::Uniform(&idx), 1, cap(g, f))
}

/// `g ⊚ (f; l)`: `f` in every slot but one, `l` in the remaining one.
pub fn marked_composite(g: &OpSeries, f: &OpSeries, l: &OpSeries) -> Result<OpSeries, AinfError> {
    let rest = InnerIndex::of(f);
    let mark = InnerIndex::of(l);
    compose(g, &Slots::Marked { rest: &rest, mark: &mark }, 1, cap(g, f).min(l.max_arity()))
}

/// `f ▷ φ = f ⊚ (1; φ)`.
pub fn right_action(f: &OpSeries, phi: &OpSeries) -> Result<OpSeries, AinfError> {
    let rest = InnerIndex::identity(phi.tgt());
    let mark = InnerIndex::of(phi);
    compose(f, &Slots::Marked { rest: &rest, mark: &mark }, 1, cap(f, phi))
}

/// `ψ ◁ f = ψ ⊚ f`.
pub fn left_action(psi: &OpSeries, f: &OpSeries) -> Result<OpSeries, AinfError> {
    compose_infty(psi, f)
}

/// The product `x ⋆ y`, a sum of partial composites `x ∘_i y`.
pub fn star(x: &OpSeries, y: &OpSeries) -> Result<OpSeries, AinfError> {
    if !same_space(x.src(), x.tgt()) || !same_space(y.src(), y.tgt()) {
        return Err(AinfError::SpaceMismatch);
    }
    right_action(x, y)
}

/// The bracket `[x, y] = x ⋆ y - (-1)^{|x||y|} y ⋆ x`.
pub fn bracket(x: &OpSeries, y: &OpSeries) -> Result<OpSeries, AinfError> {
    let a = star(x, y)?;
    let b = star(y, x)?;
    let s = x.field().sign((x.degree() as i64) * (y.degree() as i64) + 1);
    a.add_scaled(&s, &b)
}

/// `d(f) = b₁ ∘ f - (-1)^{|f|} f ⊚ (1; b₁)` with the internal differentials
/// of the target and source spaces.
pub fn differential(f: &OpSeries) -> Result<OpSeries, AinfError> {
    let n = f.max_arity();
    let b_src = OpSeries::differential_of(f.src(), n);
    let left = f.post_apply(&f.tgt().differential_map(), f.tgt(), -1);
    let right = right_action(f, &b_src)?;
    let s = f.field().sign(f.degree() as i64 + 1);
    left.add_scaled(&s, &right)
}

/// `d(φ) + φ ⋆ φ`; zero exactly when `φ` is a Maurer-Cartan element.
pub fn mc_residual(phi: &OpSeries) -> Result<OpSeries, AinfError> {
    if phi.degree() != -1 {
        return Err(AinfError::DegreeMismatch(phi.degree(), -1));
    }
    differential(phi)?.add(&star(phi, phi)?)
}

/// True when `φ` satisfies the Maurer-Cartan equation up to its truncation arity.
pub fn is_mc(phi: &OpSeries) -> Result<bool, AinfError> {
    Ok(mc_residual(phi)?.is_zero())
}

/// Residual `f ▷ φ - ψ ◁ f - d(f)` of the ∞-morphism equation.
pub fn infty_morphism_residual(f: &OpSeries, phi: &OpSeries, psi: &OpSeries) -> Result<OpSeries, AinfError> {
    if f.degree() != 0 {
        return Err(AinfError::DegreeMismatch(f.degree(), 0));
    }
    let mut r = right_action(f, phi)?.sub(&left_action(psi, f)?)?;
    r = r.sub(&differential(f)?)?;
    Ok(r)
}

/// True together with the residual when `f : φ ⇝ ψ` is an ∞-morphism.
pub fn is_infty_morphism(f: &OpSeries, phi: &OpSeries, psi: &OpSeries) -> Result<(bool, OpSeries), AinfError> {
    let r = infty_morphism_residual(f, phi, psi)?;
    Ok((r.is_zero(), r))
}

/// The arity-1 component of `f` as a dense matrix.
fn linear_part(f: &OpSeries) -> Matrix {
    let field = f.field();
    let mut m = Matrix::zeros(field, f.tgt().dim(), f.src().dim());
    if let Some(c) = f.component(1) {
        for (t, col) in &c.entries {
            for (o, s) in &col.0 {
                m.set(*o, t[0] as usize, s.clone());
            }
        }
    }
    m
}

/// The inverse of the arity-1 component as a degree-0 family `tgt -> src`.
fn invert_linear(f: &OpSeries) -> Result<OpSeries, AinfError> {
    if f.src().dim() != f.tgt().dim() {
        return Err(AinfError::Singular("arity-1 component is not square".into()));
    }
    let inv = linear_part(f)
        .inverse()
        .ok_or_else(|| AinfError::Singular("arity-1 component is not invertible".into()))?;
    let mut g = OpSeries::zero(f.tgt().clone(), f.src().clone(), 0, f.max_arity());
    for j in 0..inv.cols() {
        let col = SparseVec::from_dense(&(0..inv.rows()).map(|i| inv.get(i, j).clone()).collect::<Vec<_>>());
        g.add_column(vec![j as u32], &col);
    }
    Ok(g)
}

/// `x ∘ (g₁ ⊗ ... ⊗ g₁)` for a degree-0 arity-1 family `g₁`.
fn precompose_linear(x: &OpSeries, g1: &OpSeries) -> Result<OpSeries, AinfError> {
    let idx = InnerIndex::of(g1);
    compose(x, &Slots::Uniform(&idx), 1, x.max_arity())
}

/// The inverse of `f` for `⊚`, computed one arity at a time.
pub fn invert_infty(f: &OpSeries) -> Result<OpSeries, AinfError> {
    if f.degree() != 0 {
        return Err(AinfError::DegreeMismatch(f.degree(), 0));
    }
    let g1 = invert_linear(f)?;
    let mut g = g1.clone();
    for n in 2..=f.max_arity() {
        let partial = compose_infty(&g, f)?.part(n);
        if partial.is_zero() {
            continue;
        }
        let next = precompose_linear(&partial, &g1)?.neg();
        if let Some(c) = next.component(n) {
            g.set_component(n, c.clone());
        }
    }
    Ok(g)
}

/// The unique `ψ` on the target with `f : φ ⇝ ψ`, solved arity by arity from
/// `ψ ◁ f = f ▷ φ - d(f)` using the invertibility of the arity-1 component.
pub fn isotopy_action(f: &OpSeries, phi: &OpSeries) -> Result<OpSeries, AinfError> {
    if !same_space(f.src(), phi.src()) || !same_space(phi.src(), phi.tgt()) {
        return Err(AinfError::SpaceMismatch);
    }
    if phi.component(1).is_some() {
        return Err(AinfError::Shape("structures carry no arity-1 component; the differential lives in the space".into()));
    }
    let n_max = cap(f, phi);
    let g1 = invert_linear(f)?;
    let f1 = f.part(1);
    let d_f1 = differential(&f1)?;
    if !d_f1.is_zero() {
        return Err(AinfError::Singular("arity-1 component is not a chain map".into()));
    }
    let rhs = right_action(f, phi)?.sub(&differential(f)?)?;
    let tgt = f.tgt().clone();
    let mut psi = OpSeries::zero(tgt.clone(), tgt, -1, n_max);
    for n in 2..=n_max {
        let known = left_action(&psi, f)?.part(n);
        let r = rhs.part(n).sub(&known)?;
        if r.is_zero() {
            continue;
        }
        let comp = precompose_linear(&r, &g1)?;
        if let Some(c) = comp.component(n) {
            psi.set_component(n, c.clone());
        }
    }
    Ok(psi)
}

/// `Ad_f(x) = (f ▷ x) ⊚ f⁻¹`.
pub fn adjoint(f: &OpSeries, x: &OpSeries) -> Result<OpSeries, AinfError> {
    let finv = invert_infty(f)?;
    compose_infty(&right_action(f, x)?, &finv)
}

/// The closed form `f · φ = Ad_f(φ) - d(f) ⊚ f⁻¹`.
pub fn isotopy_action_closed_form(f: &OpSeries, phi: &OpSeries) -> Result<OpSeries, AinfError> {
    let finv = invert_infty(f)?;
    let ad = compose_infty(&right_action(f, phi)?, &finv)?;
    let corr = compose_infty(&differential(f)?, &finv)?;
    ad.sub(&corr)
}

/// `1 + λ` for a degree-0 family `λ` on one space.
pub fn one_plus(lambda: &OpSeries) -> Result<OpSeries, AinfError> {
    OpSeries::identity(lambda.src(), lambda.max_arity()).add(lambda)
}
