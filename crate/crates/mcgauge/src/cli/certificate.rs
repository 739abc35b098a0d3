//! Certificates emitted by the commands and their standalone verification.
//!
//! A certificate carries the structure it speaks about together with the
//! data of its claim. Verification only evaluates actions, brackets and
//! pairings; it never solves a linear system.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::format::{build, emit, op_entries, read_family, BuildOptions, FormatError, Grading, InputFile, OpEntry};
use crate::ainf::{bracket, compose_infty, is_mc, isotopy_action, one_plus, AinfError, OpSeries};
use crate::formality::lie_for;
use crate::graded::GradedSpace;
use crate::lie::{gauge_action, FilteredDgLie, LieElement, LieError};
use crate::transfer::strict_unitality_check;

/// Unsuspended entries keyed by arity.
pub type Family = BTreeMap<String, Vec<OpEntry>>;

/// A checkable claim about a structure `φ` on a space with zero differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Certificate {
    /// `exp(gauge)·φ = target` in the convolution algebra.
    Gauge {
        /// The structure `φ` with its space.
        algebra: InputFile,
        /// Truncation arity.
        arity_max: usize,
        /// Degree 0 element of weight at least 1.
        gauge: Family,
        /// The structure reached.
        target: Family,
    },
    /// `isotopy·φ = target` for an ∞-isotopy.
    Isotopy {
        /// The structure `φ` with its space.
        algebra: InputFile,
        /// Truncation arity.
        arity_max: usize,
        /// The ∞-isotopy, arity-1 component included.
        isotopy: Family,
        /// The structure reached.
        target: Family,
    },
    /// The class of index `index` in the formality sequence is nonzero.
    ///
    /// With `φ' = isotopy·φ`, the operations of `φ'` of arities
    /// `3..=index` vanish, `representative` is the arity `index + 1` part of
    /// `φ'`, and `functional` pairs to zero with `[φ'₂, e]` for every degree 0
    /// basis element `e` of weight `index - 1` while pairing to a nonzero
    /// value with the representative.
    Obstruction {
        /// The structure `φ` with its space.
        algebra: InputFile,
        /// Truncation arity.
        arity_max: usize,
        /// Index of the nonzero class.
        index: usize,
        /// ∞-isotopy applied before the class is read off.
        isotopy: Family,
        /// The representative.
        representative: Family,
        /// The dual functional, written as a family of degree `-1`.
        functional: Family,
    },
    /// `[φ₂, λ] = φ_ℓ`, `[φ'₂, β] = φ'_{ℓ+1}` with `φ' = (1 + λ)·φ`, and
    /// `((1 + β) ⊚ (1 + λ))·φ = target`, a strictly unital structure with no
    /// operations of arity `ℓ` or more.
    MinimalModel {
        /// The structure `φ` with its space.
        algebra: InputFile,
        /// Truncation arity.
        arity_max: usize,
        /// The arity bound `ℓ`.
        ell: usize,
        /// The gauge `λ` of arity `ℓ - 1`.
        lambda: Family,
        /// The gauge `β` of arity `ℓ`.
        beta: Family,
        /// The structure reached.
        target: Family,
    },
}

/// The file written by `--certificate`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    /// The certificates in emission order.
    pub certificates: Vec<Certificate>,
}

/// One named check and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// What was checked.
    pub name: String,
    /// Whether it holds.
    pub holds: bool,
}

/// The outcome of verifying one certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    /// The certificate kind.
    pub kind: String,
    /// The individual checks.
    pub checks: Vec<Check>,
}

impl Verification {
    /// True when every check holds.
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Errors that prevent a certificate from being evaluated at all.
#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    /// The embedded data is malformed.
    #[error(transparent)]
    Format(#[from] FormatError),
    /// The operation calculus rejected the data.
    #[error(transparent)]
    Ainf(#[from] AinfError),
    /// The Lie layer rejected the data.
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn algebra_file(space: &GradedSpace, phi: &OpSeries) -> InputFile {
    emit(space, phi, Grading::Cohomological, None)
}

impl Certificate {
    /// A gauge certificate.
    pub fn gauge(phi: &OpSeries, arity_max: usize, gauge: &OpSeries, target: &OpSeries) -> Certificate {
        let s = phi.src();
        Certificate::Gauge {
            algebra: algebra_file(s, phi),
            arity_max,
            gauge: op_entries(s, gauge),
            target: op_entries(s, target),
        }
    }

    /// An isotopy certificate.
    pub fn isotopy(phi: &OpSeries, arity_max: usize, isotopy: &OpSeries, target: &OpSeries) -> Certificate {
        let s = phi.src();
        Certificate::Isotopy {
            algebra: algebra_file(s, phi),
            arity_max,
            isotopy: op_entries(s, isotopy),
            target: op_entries(s, target),
        }
    }

    /// An obstruction certificate.
    pub fn obstruction(
        phi: &OpSeries,
        arity_max: usize,
        index: usize,
        isotopy: &OpSeries,
        representative: &OpSeries,
        functional: &OpSeries,
    ) -> Certificate {
        let s = phi.src();
        Certificate::Obstruction {
            algebra: algebra_file(s, phi),
            arity_max,
            index,
            isotopy: op_entries(s, isotopy),
            representative: op_entries(s, representative),
            functional: op_entries(s, functional),
        }
    }

    /// A minimal model certificate.
    pub fn minimal_model(
        phi: &OpSeries,
        arity_max: usize,
        ell: usize,
        lambda: &OpSeries,
        beta: &OpSeries,
        target: &OpSeries,
    ) -> Certificate {
        let s = phi.src();
        Certificate::MinimalModel {
            algebra: algebra_file(s, phi),
            arity_max,
            ell,
            lambda: op_entries(s, lambda),
            beta: op_entries(s, beta),
            target: op_entries(s, target),
        }
    }

    /// The kind as written in files.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Gauge { .. } => "gauge",
            Certificate::Isotopy { .. } => "isotopy",
            Certificate::Obstruction { .. } => "obstruction",
            Certificate::MinimalModel { .. } => "minimal-model",
        }
    }

    /// Re-checks the claim.
    pub fn verify(&self) -> Result<Verification, CertificateError> {
        let mut checks = Vec::new();
        let mut check = |name: &str, holds: bool| checks.push(Check { name: name.into(), holds });
        match self {
            Certificate::Gauge { algebra, arity_max, gauge, target } => {
                let (space, phi) = load(algebra, *arity_max)?;
                let lam = read_family(&space, 0, *arity_max, gauge, "gauge")?;
                let psi = read_family(&space, -1, *arity_max, target, "target")?;
                check("the structure satisfies the Stasheff identities", is_mc(&phi)?);
                check("the gauge has no arity-1 component", lam.component(1).is_none());
                let g = lie_for(&space, *arity_max);
                let moved = gauge_action(&g, &g.element(&lam)?, &g.element(&phi)?)?;
                check("the gauge action takes the structure to the target", moved == g.element(&psi)?);
            }
            Certificate::Isotopy { algebra, arity_max, isotopy, target } => {
                let (space, phi) = load(algebra, *arity_max)?;
                let f = read_family(&space, 0, *arity_max, isotopy, "isotopy")?;
                let psi = read_family(&space, -1, *arity_max, target, "target")?;
                check("the structure satisfies the Stasheff identities", is_mc(&phi)?);
                check("the morphism is an ∞-isotopy", f.is_isotopy());
                check("the isotopy takes the structure to the target", f.is_isotopy() && isotopy_action(&f, &phi)? == psi);
            }
            Certificate::Obstruction { algebra, arity_max, index, isotopy, representative, functional } => {
                let (space, phi) = load(algebra, *arity_max)?;
                let n = *index;
                let f = read_family(&space, 0, *arity_max, isotopy, "isotopy")?;
                let rep = read_family(&space, -1, *arity_max, representative, "representative")?;
                let y = read_family(&space, -1, *arity_max, functional, "functional")?;
                check("the structure satisfies the Stasheff identities", is_mc(&phi)?);
                check("the space has zero differential", space.has_zero_differential());
                check("the index lies within the truncation", n >= 2 && n < *arity_max);
                let iso = f.is_isotopy();
                check("the morphism is an ∞-isotopy", iso);
                if !(iso && n >= 2 && n < *arity_max) {
                    return Ok(Verification { kind: self.kind().into(), checks });
                }
                let cur = isotopy_action(&f, &phi)?;
                check("lower arities vanish after the isotopy", (3..=n).all(|k| cur.component(k).is_none()));
                check("the representative is the next component", cur.part(n + 1) == rep);
                let g = lie_for(&space, *arity_max);
                let psi = g.element(&cur.part(2))?;
                let y = g.element(&y)?;
                let field = space.field();
                let mut annihilates = true;
                for key in g.basis(n - 1, 0)? {
                    let mut e = g.zero(0);
                    e.add_term(n - 1, key, field.one());
                    let image = g.raw_differential(&e).add(&g.raw_bracket(&psi, &e))?;
                    if !pairing(&y, &image).is_zero() {
                        annihilates = false;
                        break;
                    }
                }
                check("the functional vanishes on every coboundary", annihilates);
                check("the functional is nonzero on the representative", !pairing(&y, &g.element(&rep)?).is_zero());
            }
            Certificate::MinimalModel { algebra, arity_max, ell, lambda, beta, target } => {
                let (space, phi) = load(algebra, *arity_max)?;
                let ell = *ell;
                let lam = read_family(&space, 0, *arity_max, lambda, "lambda")?;
                let bet = read_family(&space, 0, *arity_max, beta, "beta")?;
                let psi = read_family(&space, -1, *arity_max, target, "target")?;
                check("the structure satisfies the Stasheff identities", is_mc(&phi)?);
                check("λ is concentrated in arity ℓ - 1", lam.arities().iter().all(|&a| a + 1 == ell));
                check("β is concentrated in arity ℓ", bet.arities().iter().all(|&a| a == ell));
                let phi2 = phi.part(2);
                check("[φ₂, λ] equals the arity ℓ part", bracket(&phi2, &lam)? == phi.part(ell));
                let f = one_plus(&lam)?;
                let second = isotopy_action(&f, &phi)?;
                check("[φ'₂, β] equals the arity ℓ + 1 part", bracket(&second.part(2), &bet)? == second.part(ell + 1));
                let total = compose_infty(&one_plus(&bet)?, &f)?;
                check("the composite isotopy takes the structure to the target", isotopy_action(&total, &phi)? == psi);
                check("the target has no operations of arity ℓ or more", (ell..=*arity_max).all(|a| psi.component(a).is_none()));
                check("the target satisfies the Stasheff identities", is_mc(&psi)?);
                let unital = space.unit().is_some() && strict_unitality_check(&psi).map(|v| v.is_empty()).unwrap_or(false);
                check("the target is strictly unital", unital);
            }
        }
        Ok(Verification { kind: self.kind().into(), checks })
    }
}

fn load(file: &InputFile, arity_max: usize) -> Result<(Arc<GradedSpace>, OpSeries), FormatError> {
    let alg = build(file, BuildOptions { arity_max, ..Default::default() })?;
    Ok((alg.space, alg.structure))
}

/// `Σ y_t x_t` over the common basis of the convolution algebra.
fn pairing(y: &LieElement, x: &LieElement) -> crate::linalg::Scalar {
    let mut s = y.field().zero();
    for (w, k, c) in y.terms() {
        s += &(c.clone() * x.coefficient(w, k));
    }
    s
}
