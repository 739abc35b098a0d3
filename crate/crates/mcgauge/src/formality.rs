//! Homotopy equivalence and formality obstructions for A∞-structures on a
//! space with zero differential, and truncated Kaledin classes.
//!
//! The gauge-level computations run in the convolution Lie algebra and need
//! characteristic zero. The isotopy-level sequence only solves linear
//! systems and applies ∞-isotopies `1 + λ`, so it runs over any field; its
//! verdicts are meaningful up to the level `𝔫`, the smallest integer that is
//! not invertible.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ainf::{
    compose_infty, is_mc, isotopy_action, one_plus, to_lie, AinfError, ConvolutionLie, ConvolutionMode, OpSeries,
};
use crate::graded::GradedSpace;
use crate::lie::{
    bounded_certificate, equivalence_degree, weight_graded_certificate, Certified, Degree, FilteredDgLie, Key,
    LieElement, LieError, StepOutcome, Verdict, WitnessChoice,
};
use crate::linalg::{Field, SparseSolution, SparseSystem, SparseVec};

/// Errors raised by the obstruction computations.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormalityError {
    /// The computation needs characteristic zero.
    #[error("gauge-level obstructions need characteristic zero, found characteristic {0}")]
    PositiveCharacteristic(u32),
    /// The underlying space has a nonzero differential.
    #[error("the underlying space must have zero differential")]
    NotMinimal,
    /// A hypothesis of the computation fails.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// A computed certificate fails its own check.
    #[error("internal verification failed: {0}")]
    Audit(String),
    /// Error from the Lie engine.
    #[error(transparent)]
    Lie(#[from] LieError),
    /// Error from the operation calculus.
    #[error(transparent)]
    Ainf(#[from] AinfError),
}

/// Overall verdict of an obstruction computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// The structure is isotopic or gauge equivalent to its binary part, exactly.
    FormalCertified,
    /// The two structures are gauge equivalent, exactly.
    Equivalent,
    /// Every computed class vanishes; equivalence holds modulo the truncation.
    EquivalentModTruncation,
    /// A class of the formality sequence is nonzero.
    NotFormal,
    /// A class of the equivalence sequence is nonzero.
    NotEquivalent,
    /// No verdict can be drawn; the reason is attached.
    Inconclusive(String),
}

/// One class of an obstruction sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportStep {
    /// Index `k` of the class `ϑ_k`.
    pub index: usize,
    /// Whether the class vanishes.
    pub vanishes: bool,
    /// The representative `φ_k^{(k)}` (or the difference component).
    pub representative: OpSeries,
    /// The gauge or isotopy component killing the class, when it vanishes.
    pub witness: Option<OpSeries>,
    /// A dual functional proving that the class is nonzero.
    pub certificate: Option<OpSeries>,
}

/// The result of an obstruction sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// The classes in order.
    pub steps: Vec<ReportStep>,
    /// Index of the last class.
    pub degree: Degree,
    /// Largest degree the computation can report.
    pub cap: usize,
    /// The verdict.
    pub verdict: ObstructionVerdict,
    /// Accumulated gauge `ω` (gauge level).
    pub gauge: Option<OpSeries>,
    /// Accumulated ∞-isotopy (isotopy level).
    pub isotopy: Option<OpSeries>,
    /// The structure reached at the end of the sequence.
    pub final_structure: OpSeries,
    /// The weight `η` with no degree `-1` operations from that weight on, if known.
    pub bound: Option<usize>,
}

pub(crate) fn lie_for(space: &Arc<GradedSpace>, arity_max: usize) -> ConvolutionLie {
    let mode = if space.unit().is_some() { ConvolutionMode::Normalized } else { ConvolutionMode::Full };
    to_lie(space, arity_max, mode)
}

fn check_structure(phi: &OpSeries, arity_max: usize) -> Result<(), FormalityError> {
    if phi.degree() != -1 {
        return Err(FormalityError::Hypothesis(format!("structure of degree {} instead of -1", phi.degree())));
    }
    if arity_max < 3 {
        return Err(FormalityError::Hypothesis(format!("arity bound {arity_max} is below 3")));
    }
    if !is_mc(&phi.with_max_arity(arity_max))? {
        return Err(FormalityError::Hypothesis("the operations do not satisfy the Stasheff identities".into()));
    }
    Ok(())
}

/// Gauge equivalence obstructions between two structures on the same space,
/// in characteristic zero.
///
/// Runs the bounded certificate when the degree `-1` part of the normalized
/// convolution algebra vanishes from some weight within the truncation, the
/// weight-graded certificate when `ψ` is binary and agrees with `φ` in
/// arity 2, and the plain equivalence sequence otherwise.
pub fn homotopy_obstruction(phi: &OpSeries, psi: &OpSeries, arity_max: usize) -> Result<ObstructionReport, FormalityError> {
    let field = phi.field();
    if let Field::Prime(p) = field {
        return Err(FormalityError::PositiveCharacteristic(p));
    }
    check_structure(phi, arity_max)?;
    check_structure(psi, arity_max)?;
    let phi = phi.with_max_arity(arity_max);
    let psi = psi.with_max_arity(arity_max);
    let g = lie_for(phi.src(), arity_max);
    let (x, y) = (g.element(&phi)?, g.element(&psi)?);
    let formal = psi == phi.part(2);
    let (yes, no) = if formal {
        (ObstructionVerdict::FormalCertified, ObstructionVerdict::NotFormal)
    } else {
        (ObstructionVerdict::Equivalent, ObstructionVerdict::NotEquivalent)
    };
    let bounded = bounded_certificate(&g, &x, &y)?;
    let cert: Certified = match bounded.verdict {
        Verdict::Inconclusive(_) => {
            let graded = y.weights() == vec![1] && x.sub(&y)?.in_filtration(2);
            if graded {
                weight_graded_certificate(&g, &x, &y)?
            } else {
                let report = equivalence_degree(&g, &x, &y, WitnessChoice::Canonical)?;
                let verdict = match report.sequence.degree {
                    Degree::Finite(n) => Verdict::NotEquivalent { index: n },
                    Degree::AtLeast(_) => Verdict::Equivalent { exact: false },
                };
                Certified { gauge: report.sequence.gauge.clone(), verdict, report: Some(report), bound: None }
            }
        }
        _ => bounded,
    };
    let report = cert.report.ok_or_else(|| FormalityError::Audit("certificate without a sequence".into()))?;
    let verdict = match cert.verdict {
        Verdict::Equivalent { exact: true } => yes,
        Verdict::Equivalent { exact: false } => ObstructionVerdict::EquivalentModTruncation,
        Verdict::NotEquivalent { .. } => no,
        Verdict::Inconclusive(why) => ObstructionVerdict::Inconclusive(why),
    };
    let steps = report
        .sequence
        .steps
        .iter()
        .map(|s| match &s.outcome {
            StepOutcome::Vanishes { witness, .. } => ReportStep {
                index: s.index,
                vanishes: true,
                representative: g.series(&g.zero(-1)),
                witness: Some(g.series(witness)),
                certificate: None,
            },
            StepOutcome::NonZero { representative, certificate, .. } => ReportStep {
                index: s.index,
                vanishes: false,
                representative: g.series(representative),
                witness: None,
                certificate: Some(g.series(certificate)),
            },
        })
        .collect();
    let last = report.sequence.last.add(&y)?;
    Ok(ObstructionReport {
        steps,
        degree: report.sequence.degree,
        cap: arity_max,
        verdict,
        gauge: Some(g.series(&report.sequence.gauge)),
        isotopy: None,
        final_structure: g.series(&last),
        bound: cert.bound.or(g.degree_minus_one_bound()),
    })
}

/// Solution or obstruction of `d(λ) + [ψ, λ] = target` for `λ` of degree 0
/// in the given weight.
enum Linear {
    Solved(LieElement),
    Obstructed(LieElement),
}

fn solve_in_weight(
    g: &ConvolutionLie,
    psi: &LieElement,
    target: &LieElement,
    weight: usize,
) -> Result<Linear, FormalityError> {
    let field = g.field();
    let keys = g.basis(weight, 0)?;
    let mut images = Vec::with_capacity(keys.len());
    for key in &keys {
        let mut e = g.zero(0);
        e.add_term(weight, key.clone(), field.one());
        images.push(g.raw_differential(&e).add(&g.raw_bracket(psi, &e))?);
    }
    let mut rows: BTreeMap<(usize, Key), usize> = BTreeMap::new();
    for x in images.iter().chain(std::iter::once(target)) {
        for (w, k, _) in x.terms() {
            rows.entry((w, k.clone())).or_insert(0);
        }
    }
    for (i, v) in rows.values_mut().enumerate() {
        *v = i;
    }
    let coords = |x: &LieElement| SparseVec::from_entries(x.terms().map(|(w, k, c)| (rows[&(w, k.clone())], c.clone())));
    let cols: Vec<SparseVec> = images.iter().map(coords).collect();
    let system = SparseSystem::from_columns(field, rows.len(), &cols, coords(target).to_dense(field, rows.len()));
    match system.solve(false) {
        SparseSolution::Solved { x, .. } => {
            let mut lambda = g.zero(0);
            for (j, c) in &x.0 {
                lambda.add_term(weight, keys[*j].clone(), c.clone());
            }
            Ok(Linear::Solved(lambda))
        }
        SparseSolution::NoSolution => {
            let y = system
                .dual_certificate()
                .filter(|y| system.is_dual_certificate(y))
                .ok_or_else(|| FormalityError::Audit("inconsistent system without a valid certificate".into()))?;
            let keys: Vec<&(usize, Key)> = rows.keys().collect();
            let mut cert = g.zero(-1);
            for (i, c) in &y.0 {
                let (w, k) = keys[*i];
                cert.add_term(*w, k.clone(), c.clone());
            }
            Ok(Linear::Obstructed(cert))
        }
    }
}

/// A degree-0 element `λ` of the given weight with `d(λ) + [ψ, λ] = target`,
/// if one exists.
pub(crate) fn solve_gauge(
    g: &ConvolutionLie,
    psi: &LieElement,
    target: &LieElement,
    weight: usize,
) -> Result<Option<LieElement>, FormalityError> {
    Ok(match solve_in_weight(g, psi, target, weight)? {
        Linear::Solved(l) => Some(l),
        Linear::Obstructed(_) => None,
    })
}

/// The isotopy-level formality sequence of a structure on a space with zero
/// differential, over any field.
///
/// At step `n` the class `ϑ_n = [φ_n^{(n)}]` vanishes when
/// `[φ^{(1)}, λ] = φ_n^{(n)}` has a solution `λ` of weight `n - 1`; then
/// `φ_{n+1} = (1 + λ)·φ_n` agrees with `φ^{(1)}` through weight `n`. The
/// reported degree is capped at `W + 1` and, when `𝔫` is finite, at `𝔫 + 1`.
pub fn formality_sequence(phi: &OpSeries, arity_max: usize) -> Result<ObstructionReport, FormalityError> {
    check_structure(phi, arity_max)?;
    let space = phi.src().clone();
    if !space.has_zero_differential() {
        return Err(FormalityError::NotMinimal);
    }
    let phi = phi.with_max_arity(arity_max);
    let g = lie_for(&space, arity_max);
    let w_max = g.weight_max();
    let non_unit = phi.field().first_non_unit();
    let cap = match non_unit {
        Some(n) => (w_max + 1).min(n as usize + 1),
        None => w_max + 1,
    };
    let psi_series = phi.part(2);
    let psi = g.element(&psi_series)?;
    let bound = g.degree_minus_one_bound();
    let mut cur = phi.clone();
    let mut total = OpSeries::identity(&space, arity_max);
    let zero = OpSeries::zero_on(&space, -1, arity_max);
    let mut steps = vec![ReportStep { index: 1, vanishes: true, representative: zero.clone(), witness: None, certificate: None }];
    let mut degree = Degree::AtLeast(cap);
    for n in 2..cap.min(w_max + 1) {
        let target = g.element(&cur)?.weight_part(n);
        if target.is_zero() {
            steps.push(ReportStep { index: n, vanishes: true, representative: zero.clone(), witness: None, certificate: None });
            continue;
        }
        match solve_in_weight(&g, &psi, &target, n - 1)? {
            Linear::Solved(lambda) => {
                let lam = g.series(&lambda);
                let f = one_plus(&lam)?;
                cur = isotopy_action(&f, &cur)?;
                total = compose_infty(&f, &total)?;
                if (3..=n + 1).any(|k| cur.component(k).is_some()) {
                    return Err(FormalityError::Audit(format!("the isotopy of step {n} does not kill the class")));
                }
                steps.push(ReportStep {
                    index: n,
                    vanishes: true,
                    representative: g.series(&target),
                    witness: Some(lam),
                    certificate: None,
                });
            }
            Linear::Obstructed(cert) => {
                steps.push(ReportStep {
                    index: n,
                    vanishes: false,
                    representative: g.series(&target),
                    witness: None,
                    certificate: Some(g.series(&cert)),
                });
                degree = Degree::Finite(n);
                break;
            }
        }
    }
    if let (Degree::AtLeast(_), Some(n)) = (degree, non_unit) {
        if cap == n as usize + 1 {
            degree = Degree::Finite(cap);
        }
    }
    if isotopy_action(&total, &phi)? != cur {
        return Err(FormalityError::Audit("the accumulated isotopy does not reproduce the final structure".into()));
    }
    let reached = steps.last().map_or(1, |s| s.index);
    let verdict = match degree {
        Degree::Finite(n) if steps.last().is_some_and(|s| !s.vanishes) && n == reached => ObstructionVerdict::NotFormal,
        _ if cur == psi_series && bound.is_some_and(|eta| eta <= reached + 1) => ObstructionVerdict::FormalCertified,
        Degree::Finite(n) => ObstructionVerdict::Inconclusive(format!(
            "every class through index {} vanishes; index {n} is the largest the field allows",
            n - 1
        )),
        Degree::AtLeast(_) => ObstructionVerdict::EquivalentModTruncation,
    };
    Ok(ObstructionReport {
        steps,
        degree,
        cap,
        verdict,
        gauge: None,
        isotopy: Some(total),
        final_structure: cur,
        bound,
    })
}

/// A truncated Kaledin class with its vanishing verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaledinTruncation {
    /// The truncation order `n`.
    pub n: usize,
    /// Coefficients of `ℏ^0, …, ℏ^{n-1}` of the representative: `(j + 1) φ^{(j+2)}`.
    pub representative: Vec<OpSeries>,
    /// Whether the class vanishes.
    pub vanishes: bool,
    /// Coefficients `υ_0, …, υ_{n-1}` of a primitive, when the class vanishes.
    pub primitive: Option<Vec<OpSeries>>,
    /// An ∞-isotopy `f` with `(f·φ)^{(k)} = 0` for `2 ≤ k ≤ n + 1`, when the class vanishes.
    pub witness: Option<OpSeries>,
    /// The structure `f·φ`.
    pub normalized: Option<OpSeries>,
}

/// The truncated Kaledin class `K^n_φ` of a structure on a space with zero
/// differential.
///
/// The truncated ℏ-complex splits according to weight minus ℏ-exponent, and
/// the representative lies in one summand, so a primitive can be searched
/// with `υ_b` of weight `b + 1`: the coefficient of `ℏ^m` gives
/// `Σ_{a+b=m} [φ^{(a+1)}, υ_b] = (m+1) φ^{(m+2)}`.
pub fn kaledin_truncated(phi: &OpSeries, n: usize, arity_max: usize) -> Result<KaledinTruncation, FormalityError> {
    check_structure(phi, arity_max)?;
    let space = phi.src().clone();
    if !space.has_zero_differential() {
        return Err(FormalityError::NotMinimal);
    }
    let field = phi.field();
    if n == 0 || !field.factorial_is_unit(n as u64) {
        return Err(FormalityError::Hypothesis(format!("{n}! is not a unit")));
    }
    if n + 2 > arity_max {
        return Err(FormalityError::Hypothesis(format!("order {n} needs operations up to arity {}", n + 2)));
    }
    let phi = phi.with_max_arity(arity_max);
    let g = lie_for(&space, arity_max);
    let x = g.element(&phi)?;
    let representative: Vec<LieElement> =
        (0..n).map(|m| x.weight_part(m + 2).scale(&field.from_i64(m as i64 + 1))).collect();
    // unknowns (b, key) with key of weight b + 1; rows (m, weight m + 2, key)
    let mut unknowns: Vec<(usize, Key)> = Vec::new();
    for b in 0..n {
        for key in g.basis(b + 1, 0)? {
            unknowns.push((b, key));
        }
    }
    let mut rows: BTreeMap<(usize, Key), usize> = BTreeMap::new();
    let mut cols_raw: Vec<Vec<(usize, LieElement)>> = Vec::with_capacity(unknowns.len());
    for (b, key) in &unknowns {
        let mut e = g.zero(0);
        e.add_term(b + 1, key.clone(), field.one());
        let mut col = Vec::new();
        for a in 0..n - b {
            let img = g.raw_bracket(&x.weight_part(a + 1), &e);
            col.push((a + b, img));
        }
        cols_raw.push(col);
    }
    for col in &cols_raw {
        for (m, img) in col {
            for (_, k, _) in img.terms() {
                rows.entry((*m, k.clone())).or_insert(0);
            }
        }
    }
    for (m, r) in representative.iter().enumerate() {
        for (_, k, _) in r.terms() {
            rows.entry((m, k.clone())).or_insert(0);
        }
    }
    for (i, v) in rows.values_mut().enumerate() {
        *v = i;
    }
    let cols: Vec<SparseVec> = cols_raw
        .iter()
        .map(|col| {
            let mut v = SparseVec::new();
            for (m, img) in col {
                for (_, k, c) in img.terms() {
                    v = v.add_scaled(c, &SparseVec(vec![(rows[&(*m, k.clone())], field.one())]));
                }
            }
            v
        })
        .collect();
    let mut rhs = vec![field.zero(); rows.len()];
    for (m, r) in representative.iter().enumerate() {
        for (_, k, c) in r.terms() {
            rhs[rows[&(m, k.clone())]] = c.clone();
        }
    }
    let system = SparseSystem::from_columns(field, rows.len(), &cols, rhs);
    let rep_series: Vec<OpSeries> = representative.iter().map(|r| g.series(r)).collect();
    let SparseSolution::Solved { x: sol, .. } = system.solve(false) else {
        return Ok(KaledinTruncation { n, representative: rep_series, vanishes: false, primitive: None, witness: None, normalized: None });
    };
    let mut primitive = vec![g.zero(0); n];
    for (j, c) in &sol.0 {
        let (b, key) = &unknowns[*j];
        primitive[*b].add_term(b + 1, key.clone(), c.clone());
    }
    let (witness, normalized) = kaledin_witness(&g, &phi, n)?;
    Ok(KaledinTruncation {
        n,
        representative: rep_series,
        vanishes: true,
        primitive: Some(primitive.iter().map(|p| g.series(p)).collect()),
        witness: Some(witness),
        normalized: Some(normalized),
    })
}

/// Builds `f = (1 + λ_n) ⊚ ⋯ ⊚ (1 + λ_1)` with `λ_k = υ/k` and
/// `[φ^{(1)}, υ] = k ψ_k^{(k+1)}`, so that `f·φ` vanishes in weights `2..=n+1`.
fn kaledin_witness(g: &ConvolutionLie, phi: &OpSeries, n: usize) -> Result<(OpSeries, OpSeries), FormalityError> {
    let field = phi.field();
    let psi = g.element(phi)?.weight_part(1);
    let mut cur = phi.clone();
    let mut total = OpSeries::identity(phi.src(), phi.max_arity());
    for k in 1..=n {
        let target = g.element(&cur)?.weight_part(k + 1).scale(&field.from_i64(k as i64));
        if target.is_zero() {
            continue;
        }
        let Linear::Solved(upsilon) = solve_in_weight(g, &psi, &target, k)? else {
            return Err(FormalityError::Audit(format!("vanishing class without a primitive at step {k}")));
        };
        let kinv = field.from_i64(k as i64).inv().map_err(|_| FormalityError::Hypothesis(format!("{k} is not a unit")))?;
        let f = one_plus(&g.series(&upsilon.scale(&kinv)))?;
        cur = isotopy_action(&f, &cur)?;
        total = compose_infty(&f, &total)?;
    }
    if (3..=n + 2).any(|k| cur.component(k).is_some()) {
        return Err(FormalityError::Audit("the witness isotopy leaves a component in weights 2..n+1".into()));
    }
    Ok((total, cur))
}

/// The two sides of the correspondence between obstruction classes and
/// truncated Kaledin classes at index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaledinConsistency {
    /// The index `n`.
    pub n: usize,
    /// Whether `ϑ_2, …, ϑ_n` all vanish.
    pub classes_vanish: bool,
    /// Whether `K^{n-1}` vanishes.
    pub kaledin_vanishes: bool,
}

impl KaledinConsistency {
    /// True when both sides agree.
    pub fn consistent(&self) -> bool {
        self.classes_vanish == self.kaledin_vanishes
    }
}

/// Compares `ϑ_2, …, ϑ_n` from the formality sequence with `K^{n-1}`.
///
/// Both vanish exactly when `φ` is isotopic to a structure without
/// components in weights `2..=n`; for `φ - φ^{(1)} ∈ ℱ^n` the left side is
/// the single class `ϑ_n`.
pub fn kaledin_obstruction_consistency(phi: &OpSeries, n: usize, arity_max: usize) -> Result<KaledinConsistency, FormalityError> {
    if n < 2 {
        return Err(FormalityError::Hypothesis("the correspondence starts at n = 2".into()));
    }
    let seq = formality_sequence(phi, arity_max)?;
    let classes_vanish = seq.steps.iter().filter(|s| s.index <= n).all(|s| s.vanishes)
        && seq.steps.iter().any(|s| s.index >= n);
    let k = kaledin_truncated(phi, n - 1, arity_max)?;
    Ok(KaledinConsistency { n, classes_vanish, kaledin_vanishes: k.vanishes })
}
