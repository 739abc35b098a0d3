//! Obstruction classes, gauge triviality sequences and equivalence
//! certificates.
//!
//! For a Maurer-Cartan element `φ ∈ ℱⁿ𝔥` the class `ϑ_n = [φ^{(n)}]` in
//! `H_{-1}(𝔥/ℱ^{n+1})` vanishes exactly when `φ ≡ dυ (mod ℱ^{n+1})` for some
//! `υ ∈ 𝔥_0`, and then `υ·φ ∈ ℱ^{n+1}`. Each step solves that affine system;
//! an inconsistent system is certified by a dual vector.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{SparseSolution, SparseSystem, SparseVec};

use super::gauge::{bch, gauge_action, mc_residual};
use super::twisted::twist;
use super::{FilteredDgLie, Key, LieElement, LieError};

/// How a witness is picked among all solutions of a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessChoice {
    /// The canonical solution (every free variable zero).
    Canonical,
    /// The canonical solution plus a random kernel element drawn from the seed.
    KernelOffset(u64),
}

/// The linear data of one step: the unknown basis elements of `𝔥_0` and
/// their differentials modulo `ℱ^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    /// Unknowns as `(weight, key)`.
    pub unknowns: Vec<(usize, Key)>,
    /// `d e` modulo `ℱ^{n+1}` for each unknown `e`.
    pub images: Vec<LieElement>,
}

/// Outcome of one obstruction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// The class vanishes; `υ·φ ∈ ℱ^{n+1}`.
    Vanishes {
        /// The gauge `υ`.
        witness: LieElement,
        /// The weights the witness was searched in, when restricted.
        restricted_weights: Option<Vec<usize>>,
    },
    /// The class is nonzero.
    NonZero {
        /// The representative `φ^{(n)}`.
        representative: LieElement,
        /// A functional on degree `-1` coordinates of weight at most `n`,
        /// zero on every `d e` and equal to 1 on the representative,
        /// written as an element in the dual basis.
        certificate: LieElement,
        /// The system the certificate refers to.
        quotient: QuotientData,
    },
}

impl StepOutcome {
    /// True for a vanishing class.
    pub fn vanishes(&self) -> bool {
        matches!(self, StepOutcome::Vanishes { .. })
    }
}

/// One step of a gauge triviality sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionStep {
    /// The index `n` of the class `ϑ_n`.
    pub index: usize,
    /// Its status.
    pub outcome: StepOutcome,
}

/// The index of the last class of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    /// The sequence ends on the nonzero class `ϑ_n`.
    Finite(usize),
    /// Every computed class vanishes; the degree is at least this value.
    AtLeast(usize),
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// A gauge triviality sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityReport {
    /// The steps in order.
    pub steps: Vec<ObstructionStep>,
    /// The degree of the sequence.
    pub degree: Degree,
    /// The accumulated gauge `ω` with `ω·φ` equal to [`last`](Self::last).
    pub gauge: LieElement,
    /// The last Maurer-Cartan element `φ_k` of the sequence.
    pub last: LieElement,
}

fn coordinates(x: &LieElement, rows: &BTreeMap<(usize, Key), usize>) -> SparseVec {
    SparseVec::from_entries(x.terms().map(|(w, k, c)| (rows[&(w, k.clone())], c.clone())))
}

fn restricted_weights(h: &dyn FilteredDgLie, n: usize) -> Option<Vec<usize>> {
    let shifts = h.differential_weight_shifts()?;
    let raising: Vec<usize> = shifts.into_iter().filter(|&s| s != 0).collect();
    match raising.as_slice() {
        [] => Some(vec![n]),
        [delta] if n > *delta => Some(vec![n - delta, n]),
        _ => None,
    }
}

struct System {
    unknowns: Vec<(usize, Key)>,
    images: Vec<LieElement>,
    rows: BTreeMap<(usize, Key), usize>,
    system: SparseSystem,
}

fn build_system(h: &dyn FilteredDgLie, target: &LieElement, n: usize, weights: &[usize]) -> Result<System, LieError> {
    let field = h.field();
    let mut unknowns = Vec::new();
    let mut images = Vec::new();
    for &w in weights {
        for key in h.basis(w, 0)? {
            let mut e = h.zero(0);
            e.add_term(w, key.clone(), field.one());
            images.push(h.raw_differential(&e).restrict(1, n));
            unknowns.push((w, key));
        }
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
    let cols: Vec<SparseVec> = images.iter().map(|x| coordinates(x, &rows)).collect();
    let rhs = coordinates(target, &rows).to_dense(field, rows.len());
    let system = SparseSystem::from_columns(field, rows.len(), &cols, rhs);
    Ok(System { unknowns, images, rows, system })
}

fn combine(h: &dyn FilteredDgLie, unknowns: &[(usize, Key)], x: &SparseVec) -> LieElement {
    let mut u = h.zero(0);
    for (j, c) in &x.0 {
        let (w, k) = &unknowns[*j];
        u.add_term(*w, k.clone(), c.clone());
    }
    u
}

fn solve_for_witness(h: &dyn FilteredDgLie, s: &System, choice: WitnessChoice) -> Option<LieElement> {
    let with_kernel = matches!(choice, WitnessChoice::KernelOffset(_));
    match s.system.solve(with_kernel) {
        SparseSolution::NoSolution => None,
        SparseSolution::Solved { x, kernel } => {
            let mut x = x;
            if let WitnessChoice::KernelOffset(seed) = choice {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for k in &kernel {
                    let c = h.field().from_i64(rng.gen_range(-3..=3));
                    x = x.add_scaled(&c, k);
                }
            }
            Some(combine(h, &s.unknowns, &x))
        }
    }
}

/// Decides whether `ϑ_n = [φ^{(n)}]` vanishes for a Maurer-Cartan `φ ∈ ℱⁿ𝔥`.
///
/// When the differential of `𝔥` only raises weight by `0` or a single
/// `δ < n`, the witness is first searched in weights `{n - δ, n}` (in
/// weight `n` alone when `d` preserves weight); otherwise, or if that
/// restricted search fails, in all weights `1..=n`. A vanishing class comes
/// with `υ` such that `υ·φ ∈ ℱ^{n+1}` (checked); a nonzero one with a dual
/// certificate.
pub fn obstruction_step(
    h: &dyn FilteredDgLie,
    phi: &LieElement,
    n: usize,
    choice: WitnessChoice,
) -> Result<StepOutcome, LieError> {
    if n == 0 || n > h.weight_max() {
        return Err(LieError::Hypothesis(format!("step index {n} outside 1..={}", h.weight_max())));
    }
    if !phi.in_filtration(n) {
        return Err(LieError::Hypothesis(format!("element is not in filtration level {n}")));
    }
    let r = mc_residual(h, phi)?;
    if !r.is_zero() {
        return Err(LieError::NotMaurerCartan(format!("residual with {} terms", r.nnz())));
    }
    let target = phi.weight_part(n);
    if target.is_zero() {
        return Ok(StepOutcome::Vanishes { witness: h.zero(0), restricted_weights: None });
    }
    let restricted = restricted_weights(h, n);
    let mut found = None;
    if let Some(ws) = &restricted {
        let s = build_system(h, &target, n, ws)?;
        found = solve_for_witness(h, &s, choice).map(|u| (u, Some(ws.clone())));
    }
    let full_weights: Vec<usize> = (1..=n).collect();
    let full = if found.is_none() { Some(build_system(h, &target, n, &full_weights)?) } else { None };
    if found.is_none() {
        let s = full.as_ref().expect("built above");
        found = solve_for_witness(h, s, choice).map(|u| (u, None));
    }
    if let Some((witness, restricted_weights)) = found {
        let moved = gauge_action(h, &witness, phi)?;
        if !moved.in_filtration(n + 1) {
            return Err(LieError::Audit(format!("witness does not push the element into level {}", n + 1)));
        }
        return Ok(StepOutcome::Vanishes { witness, restricted_weights });
    }
    let s = full.expect("built above");
    let y = s.system.dual_certificate().ok_or_else(|| LieError::Audit("inconsistent system without certificate".into()))?;
    if !s.system.is_dual_certificate(&y) {
        return Err(LieError::Audit("dual certificate does not verify".into()));
    }
    let keys: Vec<&(usize, Key)> = s.rows.keys().collect();
    let mut certificate = h.zero(-1);
    for (i, c) in &y.0 {
        let (w, k) = keys[*i];
        certificate.add_term(*w, k.clone(), c.clone());
    }
    Ok(StepOutcome::NonZero {
        representative: target,
        certificate,
        quotient: QuotientData { unknowns: s.unknowns, images: s.images },
    })
}

/// A gauge triviality sequence of `φ`, stopping at the first nonzero class
/// or after the class `ϑ_W`.
pub fn triviality_sequence(
    h: &dyn FilteredDgLie,
    phi: &LieElement,
    choice: WitnessChoice,
) -> Result<TrivialityReport, LieError> {
    triviality_sequence_to(h, phi, h.weight_max(), choice)
}

/// As [`triviality_sequence`], computing the classes `ϑ_1, …, ϑ_last` at most.
pub fn triviality_sequence_to(
    h: &dyn FilteredDgLie,
    phi: &LieElement,
    last: usize,
    choice: WitnessChoice,
) -> Result<TrivialityReport, LieError> {
    let last = last.min(h.weight_max());
    let mut steps = Vec::new();
    let mut cur = phi.clone();
    let mut omega = h.zero(0);
    let mut degree = Degree::AtLeast(last + 1);
    for k in 1..=last {
        let step_choice = match choice {
            WitnessChoice::Canonical => WitnessChoice::Canonical,
            WitnessChoice::KernelOffset(seed) => WitnessChoice::KernelOffset(seed.wrapping_add(k as u64)),
        };
        let outcome = obstruction_step(h, &cur, k, step_choice)?;
        if let StepOutcome::Vanishes { witness, .. } = &outcome {
            if !witness.is_zero() {
                cur = gauge_action(h, witness, &cur)?;
                omega = bch(h, witness, &omega)?;
            }
            steps.push(ObstructionStep { index: k, outcome });
        } else {
            steps.push(ObstructionStep { index: k, outcome });
            degree = Degree::Finite(k);
            break;
        }
    }
    if gauge_action(h, &omega, phi)? != cur {
        return Err(LieError::Audit("accumulated gauge does not reproduce the sequence".into()));
    }
    Ok(TrivialityReport { steps, degree, gauge: omega, last: cur })
}

/// The gauge equivalence degree of two Maurer-Cartan elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// The triviality sequence of `φ - ψ` in `𝔤^ψ`.
    pub sequence: TrivialityReport,
    /// The level `k` with `ω·φ ≡ ψ (mod ℱ^k)` verified in `𝔤`.
    pub agreement: usize,
}

/// Runs the triviality sequence of `φ - ψ` in `𝔤^ψ` and checks in `𝔤` that
/// the accumulated gauge `ω` satisfies `ω·φ ≡ ψ` modulo `ℱ^k`, with `k` the
/// degree (or `W + 1` when every class vanishes).
pub fn equivalence_degree(
    g: &dyn FilteredDgLie,
    phi: &LieElement,
    psi: &LieElement,
    choice: WitnessChoice,
) -> Result<EquivalenceReport, LieError> {
    equivalence_to(g, phi, psi, g.weight_max(), choice)
}

fn equivalence_to(
    g: &dyn FilteredDgLie,
    phi: &LieElement,
    psi: &LieElement,
    last: usize,
    choice: WitnessChoice,
) -> Result<EquivalenceReport, LieError> {
    let r = mc_residual(g, phi)?;
    if !r.is_zero() {
        return Err(LieError::NotMaurerCartan(format!("first element, residual with {} terms", r.nnz())));
    }
    let h = twist(g, psi)?;
    let diff = phi.sub(psi)?;
    let sequence = triviality_sequence_to(&h, &diff, last, choice)?;
    let agreement = match sequence.degree {
        Degree::Finite(n) => n,
        Degree::AtLeast(n) => n,
    };
    let moved = gauge_action(g, &sequence.gauge, phi)?;
    if !moved.sub(psi)?.in_filtration(agreement) {
        return Err(LieError::Audit("accumulated gauge does not relate the two elements".into()));
    }
    Ok(EquivalenceReport { sequence, agreement })
}

/// Verdict of an equivalence certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `ω·φ = ψ`; exactly when `exact`, otherwise modulo `ℱ^{W+1}`.
    Equivalent {
        /// True when the identity holds in the algebra itself.
        exact: bool,
    },
    /// The class `ϑ_index` is nonzero, so no gauge relates the elements.
    NotEquivalent {
        /// Index of the nonzero class.
        index: usize,
    },
    /// The hypotheses of the certificate are not met.
    Inconclusive(String),
}

/// A certificate together with the data it rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    /// The verdict.
    pub verdict: Verdict,
    /// The gauge `ω` (zero unless equivalent).
    pub gauge: LieElement,
    /// The underlying equivalence computation, when one ran.
    pub report: Option<EquivalenceReport>,
    /// The bound `η` used, for the bounded case.
    pub bound: Option<usize>,
}

fn certified(g: &dyn FilteredDgLie, verdict: Verdict, report: Option<EquivalenceReport>, bound: Option<usize>) -> Certified {
    let gauge = match (&verdict, &report) {
        (Verdict::Equivalent { .. }, Some(r)) => r.sequence.gauge.clone(),
        _ => g.zero(0),
    };
    Certified { verdict, gauge, report, bound }
}

/// Certificate for algebras bounded in degree `-1`: when `ℱ^η 𝔤_{-1} = 0`,
/// the classes `ϑ_1, …, ϑ_{η-1}` decide gauge equivalence, and a vanishing
/// sequence yields `ω` with `ω·φ = ψ` exactly (checked).
pub fn bounded_certificate(g: &dyn FilteredDgLie, phi: &LieElement, psi: &LieElement) -> Result<Certified, LieError> {
    let Some(eta) = g.degree_minus_one_bound() else {
        return Ok(certified(g, Verdict::Inconclusive("no bound on the degree -1 part is known".into()), None, None));
    };
    if eta > g.weight_max() + 1 {
        let why = format!("the degree -1 part only vanishes from weight {eta}, beyond the truncation");
        return Ok(certified(g, Verdict::Inconclusive(why), None, Some(eta)));
    }
    let report = equivalence_to(g, phi, psi, eta - 1, WitnessChoice::Canonical)?;
    if let Degree::Finite(n) = report.sequence.degree {
        return Ok(certified(g, Verdict::NotEquivalent { index: n }, Some(report), Some(eta)));
    }
    if gauge_action(g, &report.sequence.gauge, phi)? != *psi {
        let why = "the final element is not supported in the bounded part".to_string();
        return Ok(certified(g, Verdict::Inconclusive(why), Some(report), Some(eta)));
    }
    Ok(certified(g, Verdict::Equivalent { exact: true }, Some(report), Some(eta)))
}

/// Certificate for `δ`-weight-graded algebras with `ψ` concentrated in
/// weight `δ` and `φ - ψ ∈ ℱ^{δ+1}`: a vanishing sequence through weight `W`
/// yields `ω` with `ω·φ ≡ ψ (mod ℱ^{W+1})`.
pub fn weight_graded_certificate(
    g: &dyn FilteredDgLie,
    phi: &LieElement,
    psi: &LieElement,
) -> Result<Certified, LieError> {
    let weights = psi.weights();
    let [delta] = weights.as_slice() else {
        return Err(LieError::Hypothesis("the reference element is not concentrated in a single weight".into()));
    };
    let delta = *delta;
    let shifts = g
        .differential_weight_shifts()
        .ok_or_else(|| LieError::Hypothesis("the algebra is not weight graded".into()))?;
    if shifts.iter().any(|&s| s != 0 && s != delta) {
        return Err(LieError::Hypothesis(format!("the differential is not of the form d_0 + d_{delta}")));
    }
    if !phi.sub(psi)?.in_filtration(delta + 1) {
        return Err(LieError::Hypothesis(format!("the difference is not in filtration level {}", delta + 1)));
    }
    let report = equivalence_degree(g, phi, psi, WitnessChoice::Canonical)?;
    let verdict = match report.sequence.degree {
        Degree::Finite(n) => Verdict::NotEquivalent { index: n },
        Degree::AtLeast(_) => Verdict::Equivalent { exact: false },
    };
    Ok(certified(g, verdict, Some(report), None))
}
