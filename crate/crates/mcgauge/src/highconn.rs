//! Small minimal models of highly connected Poincaré duality algebras.
//!
//! The input is an A∞-algebra `A` with a contraction onto `H = H(A)`, and
//! Poincaré data on `H`: connectivity `k`, formal dimension `n`, target arity
//! bound `ℓ`, a top class `ν` and a dual basis pairing `m₂(y, x) = ν`. When
//! `n ≤ (ℓ+1)k + 2` the transferred structure can be moved by two explicit
//! ∞-isotopies `1 + λ` (arity `ℓ - 1`) and `1 + β` (arity `ℓ`) to a structure
//! with no operations of arity `ℓ` or more.
//!
//! Degrees in this module are cohomological, `|z| = -deg(z)` for the
//! homological degree stored in [`GradedSpace`]. The closed forms read the
//! unsuspended coefficients of the operations and are converted back to the
//! suspended form before they are checked against the bracket identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ainf::{
    bracket, compose_infty, from_unshifted, is_mc, isotopy_action, one_plus, to_unshifted, AinfError, OpSeries,
};
use crate::formality::{lie_for, solve_gauge, FormalityError};
use crate::graded::{Contraction, GradedSpace};
use crate::lie::LieError;
use crate::linalg::{Field, Matrix, Scalar, SparseVec};
use crate::transfer::{strict_unitality_check, transfer, TransferError, UnitalityViolation};

/// Errors raised by the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HighconnError {
    /// A hypothesis on the Poincaré data or the structure fails.
    #[error("hypotheses violated: {0:?}")]
    Hypotheses(Vec<Violation>),
    /// A basis name of the Poincaré data is not in the space.
    #[error("unknown basis element {0}")]
    UnknownName(String),
    /// The cyclic condition needed by a closed form fails.
    #[error("cyclic condition fails at arity {arity} on {tuples:?}")]
    Cyclic {
        /// Arity of the checked component.
        arity: usize,
        /// Violating tuples of basis names.
        tuples: Vec<Vec<String>>,
    },
    /// A component that must vanish by degree reasons is nonzero.
    #[error("arity {0} component is nonzero although no degrees are admissible")]
    DegreeAudit(usize),
    /// A closed form or the final structure fails its check.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Error from the transfer.
    #[error(transparent)]
    Transfer(#[from] TransferError),
    /// Error from the formality solver.
    #[error(transparent)]
    Formality(#[from] FormalityError),
    /// Error from the operation calculus.
    #[error(transparent)]
    Ainf(#[from] AinfError),
    /// Error from the Lie engine.
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Poincaré data on a space with zero differential, by basis names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareData {
    /// Connectivity: `H^i = 0` for `1 ≤ i ≤ k`.
    pub k: usize,
    /// Formal dimension.
    pub n: usize,
    /// Target arity bound.
    pub ell: usize,
    /// The generator `ν` of `H^n`.
    pub top: String,
    /// Pairs `(x, y)` with `y` the dual of `x` as a linear combination of
    /// basis elements, one pair for every basis element.
    pub duals: Vec<(String, Vec<(String, Scalar)>)>,
}

/// Index form of [`PoincareData`] against one space.
struct Resolved {
    top: usize,
    dual: BTreeMap<usize, SparseVec>,
}

impl PoincareData {
    /// Reads the dual basis off the binary product: in each degree `i` the
    /// duals `y_u` are the elements of `H^{n-i}` with `m₂(y_u, x_v) = δ_{uv} ν`.
    /// Degrees where the pairing matrix is singular get no duals.
    pub fn from_pairing(phi: &OpSeries, k: usize, n: usize, ell: usize) -> Option<PoincareData> {
        let space = phi.src();
        let field = phi.field();
        let tops = space.basis_in_degree(-(n as i32));
        let &[top] = tops.as_slice() else { return None };
        let m = to_unshifted(phi);
        let mut duals = Vec::new();
        for d in space.occurring_degrees() {
            let xs = space.basis_in_degree(d);
            let bs = space.basis_in_degree(-(n as i32) - d);
            if xs.len() != bs.len() {
                continue;
            }
            let rows = bs
                .iter()
                .map(|&b| xs.iter().map(|&x| coefficient(&m, &[b as u32, x as u32], top)).collect())
                .collect();
            let Some(inv) = Matrix::from_rows(field, rows).ok().and_then(|p| p.inverse()) else { continue };
            for (u, &x) in xs.iter().enumerate() {
                let y = bs
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| (space.name(b).to_string(), inv.get(u, a).clone()))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                duals.push((space.name(x).to_string(), y));
            }
        }
        Some(PoincareData { k, n, ell, top: space.name(top).to_string(), duals })
    }

    fn resolve(&self, space: &GradedSpace) -> Result<Resolved, HighconnError> {
        let idx = |s: &str| space.index_of(s).ok_or_else(|| HighconnError::UnknownName(s.to_string()));
        let top = idx(&self.top)?;
        let mut dual = BTreeMap::new();
        for (x, y) in &self.duals {
            let mut v = Vec::new();
            for (b, c) in y {
                v.push((idx(b)?, c.clone()));
            }
            dual.insert(idx(x)?, SparseVec::from_entries(v));
        }
        Ok(Resolved { top, dual })
    }
}

/// A failed hypothesis of the highly connected minimal model theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Hypothesis (1): `n ≤ (ℓ+1)k + 2`.
    DimensionBound {
        /// Formal dimension.
        n: usize,
        /// The bound `(ℓ+1)k + 2`.
        bound: usize,
    },
    /// Hypothesis (2): a basis element sits in a forbidden degree.
    ForbiddenDegree(String, i32),
    /// Hypothesis (3): `H⁰` or `H^n` is not one-dimensional, the unit is
    /// missing, or the differential is nonzero.
    Shape(String),
    /// Hypothesis (4): the pairing is not the identity in the given bases.
    Pairing(String),
    /// `ℓ < 3`.
    ArityTooSmall(usize),
    /// `ℓ` or `ℓ + 1` is not invertible in the field.
    NotUnit(usize),
    /// The structure is not strictly unital.
    Unitality(UnitalityViolation),
    /// The structure fails the Stasheff identities.
    NotMaurerCartan,
}

fn cdeg(space: &GradedSpace, i: usize) -> i32 {
    -space.degree(i)
}

/// Checks the hypotheses of the theorem for the data `p` and the structure
/// `phi` on `H`. Returns every violation found.
pub fn check_hypotheses(p: &PoincareData, phi: &OpSeries) -> Result<Vec<Violation>, HighconnError> {
    let space = phi.src();
    let field = phi.field();
    let mut out = Vec::new();
    let (k, n, ell) = (p.k as i32, p.n as i32, p.ell);
    let bound = (ell + 1) * p.k + 2;
    if p.n > bound {
        out.push(Violation::DimensionBound { n: p.n, bound });
    }
    for i in 0..space.dim() {
        let d = cdeg(space, i);
        if d < 0 || d > n || (1..=k).contains(&d) || (n - k..n).contains(&d) {
            out.push(Violation::ForbiddenDegree(space.name(i).to_string(), d));
        }
    }
    if !space.has_zero_differential() {
        out.push(Violation::Shape("the differential is nonzero".into()));
    }
    match space.unit() {
        Some(u) if cdeg(space, u) == 0 => {}
        _ => out.push(Violation::Shape("no unit in degree 0".into())),
    }
    for d in [0, n] {
        let dim = space.basis_in_degree(-d).len();
        if dim != 1 {
            out.push(Violation::Shape(format!("H^{d} has dimension {dim}")));
        }
    }
    if ell < 3 {
        out.push(Violation::ArityTooSmall(ell));
    }
    for m in [ell, ell + 1] {
        if !field.unit_check(m as u64) {
            out.push(Violation::NotUnit(m));
        }
    }
    out.extend(pairing_violations(p, phi)?);
    match strict_unitality_check(phi) {
        Ok(v) => out.extend(v.into_iter().map(Violation::Unitality)),
        Err(TransferError::NoUnit) => {}
        Err(e) => return Err(e.into()),
    }
    if !is_mc(phi)? {
        out.push(Violation::NotMaurerCartan);
    }
    Ok(out)
}

fn pairing_violations(p: &PoincareData, phi: &OpSeries) -> Result<Vec<Violation>, HighconnError> {
    let space = phi.src();
    let r = p.resolve(space)?;
    let m = to_unshifted(phi);
    let field = phi.field();
    let mut out = Vec::new();
    if cdeg(space, r.top) != p.n as i32 {
        out.push(Violation::Pairing(format!("{} is not in degree {}", p.top, p.n)));
    }
    for i in 0..space.dim() {
        let want = p.n as i32 - cdeg(space, i);
        match r.dual.get(&i) {
            None => out.push(Violation::Pairing(format!("{} has no dual", space.name(i)))),
            Some(y) if y.is_zero() || y.0.iter().any(|(b, _)| cdeg(space, *b) != want) => {
                out.push(Violation::Pairing(format!("the dual of {} is not a nonzero element of degree {want}", space.name(i))))
            }
            Some(_) => {}
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    for d in space.occurring_degrees() {
        let xs = space.basis_in_degree(d);
        for (u, xu) in xs.iter().enumerate() {
            let y = &r.dual[xu];
            for (v, &x) in xs.iter().enumerate() {
                let mut got = SparseVec::new();
                for (b, c) in &y.0 {
                    got = got.add_scaled(c, &m.eval(&[*b as u32, x as u32]));
                }
                let want = if u == v { SparseVec(vec![(r.top, field.one())]) } else { SparseVec::new() };
                if got != want {
                    out.push(Violation::Pairing(format!(
                        "m2(dual of {}, {}) = {}",
                        space.name(*xu),
                        space.name(x),
                        space.show(&got)
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// `α_{j+1} = j(p+1) + (|z₁| + ⋯ + |z_j|)(n - p + 1)` for a component of
/// arity `p`.
fn alpha(arity: usize, n: usize, j: usize, prefix_degree: i64) -> i64 {
    let (p, n) = (arity as i64, n as i64);
    j as i64 * (p + 1) + prefix_degree * (n - p + 1)
}

/// The outcome of a cyclic condition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCheck {
    /// Whether every signed cyclic sum vanishes.
    pub holds: bool,
    /// Tuples of basis names with a nonzero signed cyclic sum.
    pub violations: Vec<Vec<String>>,
}

/// Tuples of non-unit basis elements of length `p` with total cohomological
/// degree `total`.
fn tuples_of_degree(space: &GradedSpace, p: usize, total: i32) -> Vec<Vec<u32>> {
    let unit = space.unit();
    let letters: Vec<(u32, i32)> =
        (0..space.dim()).filter(|&i| Some(i) != unit).map(|i| (i as u32, cdeg(space, i))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn walk(letters: &[(u32, i32)], p: usize, left: i32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == p {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for &(i, d) in letters {
            if d <= left {
                cur.push(i);
                walk(letters, p, left - d, cur, out);
                cur.pop();
            }
        }
    }
    walk(&letters, p, total, &mut cur, &mut out);
    out
}

/// Checks `Σ_j (-1)^{α_j} φ_p(z_j, …, z_p, z₁, …, z_{j-1}) = 0` on every tuple
/// of non-unit basis elements with `|z₁| + ⋯ + |z_p| = n + p - 2`, where
/// `α₁ = 0` and `α_{j+1} = j(p+1) + (|z₁| + ⋯ + |z_j|)(n - p + 1)`.
pub fn cyclic_condition_check(phi: &OpSeries, arity: usize, p: &PoincareData) -> CyclicCheck {
    let space = phi.src();
    let m = to_unshifted(phi).part(arity);
    let field = phi.field();
    let mut violations = Vec::new();
    for z in tuples_of_degree(space, arity, (p.n + arity - 2) as i32) {
        let mut sum = crate::linalg::SparseVec::new();
        let mut prefix = 0i64;
        for j in 0..arity {
            let rotated: Vec<u32> = z[j..].iter().chain(&z[..j]).copied().collect();
            let s = field.sign(alpha(arity, p.n, j, prefix));
            sum = sum.add_scaled(&s, &m.eval(&rotated));
            prefix += cdeg(space, z[j] as usize) as i64;
        }
        if !sum.is_zero() {
            violations.push(z.iter().map(|&i| space.name(i as usize).to_string()).collect());
        }
    }
    CyclicCheck { holds: violations.is_empty(), violations }
}

/// The coefficient of `ν` in the unsuspended `m(z)`.
fn coefficient(m: &OpSeries, z: &[u32], top: usize) -> Scalar {
    m.eval(z).get(top).cloned().unwrap_or_else(|| m.field().zero())
}

fn bases_by_degree(space: &GradedSpace) -> BTreeMap<i32, Vec<usize>> {
    let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in 0..space.dim() {
        out.entry(cdeg(space, i)).or_default().push(i);
    }
    out
}

fn ratio(field: Field, num: usize, den: usize) -> Result<Scalar, HighconnError> {
    field
        .from_i64(num as i64)
        .div(&field.from_i64(den as i64))
        .map_err(|_| HighconnError::Verification(format!("{den} is not invertible")))
}

/// The gauge component of arity `ℓ - 1` with `[φ₂, λ] = φ_ℓ`, from the
/// coefficients `c(z) ν = φ_ℓ(z)` and the dual bases.
///
/// For non-unit inputs `x₁, …, x_{ℓ-1}` of degrees `i₁, …, i_{ℓ-1}` with
/// `s = n + ℓ - 2 - Σ i_j`, the unsuspended value is
/// `-Σ_t Σ_j (-1)^{κ(j)} (ℓ-j)/ℓ · c(x_j, …, x_{ℓ-1}, x^s_t, x₁, …, x_{j-1}) y_t`
/// where `κ(j) = j(ℓ+1) + (i₁ + ⋯ + i_{j-1})(n-ℓ+1)` and `y_t` is the dual of
/// `x^s_t`, normalized by `m₂(y_t, x^s_t) = ν`. Normalizing by the opposite
/// order instead multiplies every output by `(-1)^{s(n-s)}`.
pub fn build_lambda(phi: &OpSeries, p: &PoincareData) -> Result<OpSeries, HighconnError> {
    let space = phi.src();
    let field = phi.field();
    let ell = p.ell;
    let check = cyclic_condition_check(phi, ell, p);
    if !check.holds {
        return Err(HighconnError::Cyclic { arity: ell, tuples: check.violations });
    }
    let r = p.resolve(space)?;
    let m = to_unshifted(phi).part(ell);
    let by_degree = bases_by_degree(space);
    let (n, li) = (p.n as i64, ell as i64);
    let mut lambda = OpSeries::zero_on(space, 0, phi.max_arity());
    let unit = space.unit();
    let letters: Vec<u32> = (0..space.dim()).filter(|&i| Some(i) != unit).map(|i| i as u32).collect();
    for z in words(&letters, ell - 1) {
        let degs: Vec<i64> = z.iter().map(|&i| cdeg(space, i as usize) as i64).collect();
        let s = (p.n + ell - 2) as i64 - degs.iter().sum::<i64>();
        let Some(xs) = by_degree.get(&(s as i32)) else { continue };
        for &xt in xs {
            let mut total = field.zero();
            let mut prefix = 0i64;
            for j in 1..ell {
                let mut w: Vec<u32> = z[j - 1..].to_vec();
                w.push(xt as u32);
                w.extend_from_slice(&z[..j - 1]);
                let c = coefficient(&m, &w, r.top);
                if !c.is_zero() {
                    let kappa = j as i64 * (li + 1) + prefix * (n - li + 1);
                    let weight = ratio(field, ell - j, ell)?;
                    total = total + field.sign(kappa) * weight * c;
                }
                prefix += degs[j - 1];
            }
            if !total.is_zero() {
                lambda.add_column(z.clone(), &r.dual[&xt].scale(&-total));
            }
        }
    }
    verified(phi, from_unshifted(&lambda), ell)
}

/// Returns `gauge` when `[φ₂, gauge] = φ_arity`, and the residual otherwise.
fn verified(phi: &OpSeries, gauge: OpSeries, arity: usize) -> Result<OpSeries, HighconnError> {
    let residual = bracket(&phi.part(2), &gauge)?.sub(&phi.part(arity))?;
    if residual.is_zero() {
        Ok(gauge)
    } else {
        Err(HighconnError::Verification(format!("the arity {arity} closed form leaves the residual\n{residual}")))
    }
}

/// The gauge component of arity `ℓ` with `[φ₂, β] = φ_{ℓ+1}`, defined when
/// `n = (ℓ+1)k + 2`, on inputs of degree `k + 1`:
/// `-Σ_t Σ_j (-1)^{κ̃(j)} (ℓ+1-j)/(ℓ+1) · b(x_j, …, x_ℓ, x_t, x₁, …, x_{j-1}) y_t`
/// with `κ̃(j) = jkℓ + (k+1)(ℓ+n)`. Returns zero in every other case, where
/// `φ_{ℓ+1}` vanishes by degree reasons.
pub fn build_beta(phi: &OpSeries, p: &PoincareData) -> Result<OpSeries, HighconnError> {
    let space = phi.src();
    let field = phi.field();
    let ell = p.ell;
    let mut beta = OpSeries::zero_on(space, 0, phi.max_arity());
    if p.n != (ell + 1) * p.k + 2 {
        return Ok(beta);
    }
    let check = cyclic_condition_check(phi, ell + 1, p);
    if !check.holds {
        return Err(HighconnError::Cyclic { arity: ell + 1, tuples: check.violations });
    }
    let r = p.resolve(space)?;
    let m = to_unshifted(phi).part(ell + 1);
    let xs: Vec<u32> = space.basis_in_degree(-((p.k + 1) as i32)).into_iter().map(|i| i as u32).collect();
    let (k, li, n) = (p.k as i64, ell as i64, p.n as i64);
    for z in words(&xs, ell) {
        for &xt in &xs {
            let mut total = field.zero();
            for j in 1..=ell {
                let mut w: Vec<u32> = z[j - 1..].to_vec();
                w.push(xt);
                w.extend_from_slice(&z[..j - 1]);
                let b = coefficient(&m, &w, r.top);
                if !b.is_zero() {
                    let kappa = j as i64 * k * li + (k + 1) * (li + n);
                    total = total + field.sign(kappa) * ratio(field, ell + 1 - j, ell + 1)? * b;
                }
            }
            if !total.is_zero() {
                beta.add_column(z.clone(), &r.dual[&(xt as usize)].scale(&-total));
            }
        }
    }
    verified(phi, from_unshifted(&beta), ell + 1)
}

fn words(letters: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| letters.iter().map(move |&a| [w.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Admissible degree tuples in one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityAudit {
    /// The arity.
    pub arity: usize,
    /// Number of tuples of non-unit basis elements whose image degree exists.
    pub admissible: usize,
}

/// For each arity `ℓ + 2 ≤ p ≤ arity_max`, counts the tuples of non-unit basis
/// elements whose unsuspended image degree `Σ|z| + 2 - p` occurs in the space.
/// Under hypotheses (1) and (2) every count is zero.
pub fn degree_audit(space: &GradedSpace, ell: usize, arity_max: usize) -> Vec<ArityAudit> {
    let degrees: Vec<i32> = space.occurring_degrees().into_iter().map(|d| -d).collect();
    (ell + 2..=arity_max)
        .map(|arity| {
            let admissible = degrees
                .iter()
                .map(|&out| tuples_of_degree(space, arity, out + arity as i32 - 2).len())
                .sum();
            ArityAudit { arity, admissible }
        })
        .collect()
}

/// How a gauge component was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeMethod {
    /// The closed form, verified.
    ClosedForm,
    /// The closed form failed its cyclic precondition or its check, and the
    /// generic linear solver found a witness. The reason is attached.
    LinearSolve(String),
    /// The component is zero because the target vanishes by degree reasons.
    Degenerate,
}

/// One gauge step of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeStep {
    /// The degree-0 component `λ` applied as the isotopy `1 + λ`.
    pub component: OpSeries,
    /// How the component was obtained.
    pub method: GaugeMethod,
}

/// The output of [`minimal_model_pipeline`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    /// The transferred structure on `H`.
    pub transferred: OpSeries,
    /// Degree audit for arities at least `ℓ + 2`.
    pub audit: Vec<ArityAudit>,
    /// The arity `ℓ - 1` gauge.
    pub lambda: GaugeStep,
    /// The arity `ℓ` gauge.
    pub beta: GaugeStep,
    /// The final structure, with no operations of arity `ℓ` or more.
    pub final_structure: OpSeries,
    /// The composite isotopy `(1 + β) ⊚ (1 + λ)` from the transferred
    /// structure to the final one.
    pub isotopy: OpSeries,
}

/// A gauge of the given weight with `[φ₂, λ] = target`, by the closed form
/// when it applies and by the linear solver otherwise.
fn gauge_step(
    phi: &OpSeries,
    target: &OpSeries,
    closed: Result<OpSeries, HighconnError>,
    weight: usize,
) -> Result<GaugeStep, HighconnError> {
    let psi = phi.part(2);
    let reason = match closed {
        Ok(lambda) => return Ok(GaugeStep { component: lambda, method: GaugeMethod::ClosedForm }),
        Err(e @ (HighconnError::Cyclic { .. } | HighconnError::Verification(_))) => e.to_string(),
        Err(e) => return Err(e),
    };
    let g = lie_for(phi.src(), phi.max_arity());
    let lam = solve_gauge(&g, &g.element(&psi)?, &g.element(target)?, weight)?
        .ok_or_else(|| HighconnError::Verification(format!("no gauge of weight {weight} exists; {reason}")))?;
    Ok(GaugeStep { component: g.series(&lam), method: GaugeMethod::LinearSolve(reason) })
}

/// Transfers `phi` along `c`, checks the hypotheses and the degree audit,
/// applies `1 + λ` and `1 + β`, and verifies that the result is a strictly
/// unital A∞-structure with no operations of arity `ℓ` or more.
pub fn minimal_model_pipeline(
    phi: &OpSeries,
    c: &Contraction,
    p: &PoincareData,
    arity_max: usize,
) -> Result<PipelineReport, HighconnError> {
    let transferred = transfer(phi, c, arity_max)?.structure;
    let bad = check_hypotheses(p, &transferred)?;
    if !bad.is_empty() {
        return Err(HighconnError::Hypotheses(bad));
    }
    let small: &Arc<GradedSpace> = &c.small;
    let ell = p.ell;
    let audit = degree_audit(small, ell, arity_max);
    for a in &audit {
        if transferred.component(a.arity).is_some() {
            return Err(HighconnError::DegreeAudit(a.arity));
        }
    }
    let lambda = if ell <= arity_max {
        let target = transferred.part(ell);
        if target.is_zero() {
            GaugeStep { component: OpSeries::zero_on(small, 0, arity_max), method: GaugeMethod::Degenerate }
        } else {
            gauge_step(&transferred, &target, build_lambda(&transferred, p), ell - 1)?
        }
    } else {
        GaugeStep { component: OpSeries::zero_on(small, 0, arity_max), method: GaugeMethod::Degenerate }
    };
    let f = one_plus(&lambda.component)?;
    let second = isotopy_action(&f, &transferred)?;
    if second.component(ell).is_some() {
        return Err(HighconnError::Verification(format!("1 + λ leaves an arity {ell} component")));
    }
    let degenerate = p.n != (ell + 1) * p.k + 2 || ell + 1 > arity_max;
    let beta = if degenerate || second.part(ell + 1).is_zero() {
        if second.component(ell + 1).is_some() {
            return Err(HighconnError::DegreeAudit(ell + 1));
        }
        GaugeStep { component: OpSeries::zero_on(small, 0, arity_max), method: GaugeMethod::Degenerate }
    } else {
        gauge_step(&second, &second.part(ell + 1), build_beta(&second, p), ell)?
    };
    let g = one_plus(&beta.component)?;
    let final_structure = isotopy_action(&g, &second)?;
    if let Some(a) = (ell..=arity_max).find(|&a| final_structure.component(a).is_some()) {
        return Err(HighconnError::Verification(format!("the final structure has an arity {a} component")));
    }
    if !is_mc(&final_structure)? {
        return Err(HighconnError::Verification("the final structure fails the Stasheff identities".into()));
    }
    let unital = strict_unitality_check(&final_structure)?;
    if !unital.is_empty() {
        return Err(HighconnError::Verification(format!("the final structure is not strictly unital: {unital:?}")));
    }
    let isotopy = compose_infty(&g, &f)?;
    if isotopy_action(&isotopy, &transferred)? != final_structure {
        return Err(HighconnError::Verification("the composite isotopy does not reproduce the final structure".into()));
    }
    Ok(PipelineReport { transferred, audit, lambda, beta, final_structure, isotopy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::make_contraction;
    use crate::samples::{f3, sphere};

    fn f3_data(phi: &OpSeries) -> PoincareData {
        PoincareData::from_pairing(phi, 1, 5, 3).unwrap()
    }

    #[test]
    fn f3_satisfies_the_hypotheses() {
        let s = f3(Field::Rational, 6);
        let p = f3_data(&s.structure);
        assert_eq!(p.duals.len(), 6);
        assert!(check_hypotheses(&p, &s.structure).unwrap().is_empty());
        let wide = PoincareData { n: 7, ..p.clone() };
        let v = check_hypotheses(&wide, &s.structure).unwrap();
        assert!(v.contains(&Violation::DimensionBound { n: 7, bound: 6 }));
    }

    #[test]
    fn swapped_duals_break_the_pairing() {
        let s = f3(Field::Rational, 6);
        let mut p = f3_data(&s.structure);
        let one = Field::Rational.one();
        for (x, y) in p.duals.iter_mut() {
            if x == "x1" {
                *y = vec![("y2".into(), one.clone())];
            } else if x == "x2" {
                *y = vec![("y1".into(), one.clone())];
            }
        }
        let v = check_hypotheses(&p, &s.structure).unwrap();
        assert!(v.iter().any(|v| matches!(v, Violation::Pairing(_))));
    }

    #[test]
    fn f3_cyclic_condition_and_lambda() {
        let s = f3(Field::Rational, 6);
        let p = f3_data(&s.structure);
        assert!(cyclic_condition_check(&s.structure, 3, &p).holds);
        let lambda = build_lambda(&s.structure, &p).unwrap();
        assert_eq!(lambda.arities(), vec![2]);
        let residual = bracket(&s.structure.part(2), &lambda).unwrap().sub(&s.structure.part(3)).unwrap();
        assert!(residual.is_zero());
    }

    #[test]
    fn broken_cyclic_sum_is_reported() {
        let s = f3(Field::Rational, 6);
        let p = f3_data(&s.structure);
        let mut bad = s.structure.clone();
        let a = &s.space;
        let (x1, v) = (a.index_of("x1").unwrap(), a.index_of("v").unwrap());
        bad.add_entry(vec![x1 as u32; 3], v, Field::Rational.one());
        let check = cyclic_condition_check(&bad, 3, &p);
        assert_eq!(check.violations, vec![vec!["x1".to_string(); 3]]);
        assert!(matches!(build_lambda(&bad, &p), Err(HighconnError::Cyclic { arity: 3, .. })));
    }

    #[test]
    fn f3_pipeline_reaches_the_binary_part() {
        let s = f3(Field::Rational, 6);
        let c = make_contraction(&s.space).unwrap();
        let p = f3_data(&s.structure);
        let r = minimal_model_pipeline(&s.structure, &c, &p, 6).unwrap();
        assert_eq!(r.lambda.method, GaugeMethod::ClosedForm);
        assert_eq!(r.beta.method, GaugeMethod::Degenerate);
        assert_eq!(r.final_structure.arities(), vec![2]);
        assert!(r.audit.iter().all(|a| a.admissible == 0));
    }

    #[test]
    fn sphere_pipeline_is_unchanged() {
        let s = sphere(Field::Rational, 6);
        let c = make_contraction(&s.space).unwrap();
        let t = transfer(&s.structure, &c, 6).unwrap().structure;
        let p = PoincareData::from_pairing(&t, 1, 2, 3).unwrap();
        let r = minimal_model_pipeline(&s.structure, &c, &p, 6).unwrap();
        assert_eq!(r.final_structure, t);
        assert_eq!(r.isotopy, OpSeries::identity(&c.small, 6));
    }
}
