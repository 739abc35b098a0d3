//! Finite based graded vector spaces, chain complexes and contractions.
//!
//! Degrees are homological throughout: the differential lowers degree by one.
//! Cohomologically graded data is negated when it is read in.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::linalg::{Field, Matrix, Scalar, SparseSolution, SparseSystem, SparseVec};

/// Errors raised while building spaces and contractions.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    /// Malformed basis or differential data.
    #[error("invalid graded space: {0}")]
    Invalid(String),
    /// The differential does not square to zero or has the wrong degree.
    #[error("not a chain complex: {0}")]
    NotComplex(String),
    /// The declared unit is a boundary or not a cycle.
    #[error("unit element {0:?} is not a nonzero homology class")]
    UnitNotHomology(String),
}

/// A finite based graded vector space with a differential of degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    names: Vec<String>,
    degrees: Vec<i32>,
    unit: Option<usize>,
    diff: Vec<SparseVec>,
}

impl GradedSpace {
    /// Builds a space from `(name, homological degree)` pairs, an optional
    /// unit index and the differential given column by column (`diff[j] = d(e_j)`).
    ///
    /// Only structural problems are rejected here; whether the differential
    /// makes a complex is decided by [`check_complex`].
    pub fn new(
        field: Field,
        basis: Vec<(String, i32)>,
        unit: Option<usize>,
        diff: Vec<SparseVec>,
    ) -> Result<GradedSpace, GradedError> {
        let n = basis.len();
        if diff.len() != n {
            return Err(GradedError::Invalid(format!("{} differential columns for {n} basis elements", diff.len())));
        }
        let mut seen = BTreeSet::new();
        for (name, _) in &basis {
            if !seen.insert(name.clone()) {
                return Err(GradedError::Invalid(format!("duplicate basis name {name:?}")));
            }
        }
        if let Some(u) = unit {
            if u >= n {
                return Err(GradedError::Invalid("unit index out of range".into()));
            }
        }
        for col in &diff {
            for (i, s) in &col.0 {
                if *i >= n || s.field() != field {
                    return Err(GradedError::Invalid("differential entry out of range or in another field".into()));
                }
            }
        }
        let (names, degrees) = basis.into_iter().unzip();
        Ok(GradedSpace { field, names, degrees, unit, diff })
    }

    /// A space with zero differential.
    pub fn with_zero_differential(
        field: Field,
        basis: Vec<(String, i32)>,
        unit: Option<usize>,
    ) -> Result<GradedSpace, GradedError> {
        let n = basis.len();
        GradedSpace::new(field, basis, unit, vec![SparseVec::new(); n])
    }

    /// The ground field.
    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Name of basis element `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// All basis names in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Homological degree of basis element `i`.
    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// All homological degrees in basis order.
    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    /// Degree of `s e_i` in the suspension, `degree(i) + 1`.
    pub fn shifted_degree(&self, i: usize) -> i32 {
        self.degrees[i] + 1
    }

    /// Index of the unit element, if one is declared.
    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    /// Index of the basis element with the given name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `d(e_j)`.
    pub fn differential(&self, j: usize) -> &SparseVec {
        &self.diff[j]
    }

    /// True when the differential vanishes.
    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(SparseVec::is_zero)
    }

    /// Basis indices in degree `n`, in basis order.
    pub fn basis_in_degree(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    /// Sorted list of degrees that occur.
    pub fn occurring_degrees(&self) -> Vec<i32> {
        self.degrees.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// The identity map.
    pub fn identity(&self) -> LinearMap {
        LinearMap::identity(self.field, self.dim())
    }

    /// The differential as a linear map of degree `-1`.
    pub fn differential_map(&self) -> LinearMap {
        LinearMap { field: self.field, src: self.dim(), tgt: self.dim(), cols: self.diff.clone() }
    }

    /// Matrix of `d: A_n -> A_{n-1}` in the basis orders of the two degrees.
    pub fn d_matrix(&self, n: i32) -> Matrix {
        let src = self.basis_in_degree(n);
        let tgt = self.basis_in_degree(n - 1);
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = Matrix::zeros(self.field, tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            for (i, s) in &self.diff[j].0 {
                if let Some(&r) = pos.get(i) {
                    m.set(r, c, s.clone());
                }
            }
        }
        m
    }

    /// Renders a vector with basis names, e.g. `2*ab - 1/3*c`.
    pub fn show(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.0.iter().map(|(i, s)| format!("{s}*{}", self.names[*i])).collect::<Vec<_>>().join(" + ")
    }
}

/// A linear map between based spaces, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    field: Field,
    src: usize,
    tgt: usize,
    cols: Vec<SparseVec>,
}

impl LinearMap {
    /// Builds a map from its columns.
    pub fn new(field: Field, src: usize, tgt: usize, cols: Vec<SparseVec>) -> LinearMap {
        assert_eq!(cols.len(), src, "one column per source basis element");
        LinearMap { field, src, tgt, cols }
    }

    /// The zero map.
    pub fn zero(field: Field, src: usize, tgt: usize) -> LinearMap {
        LinearMap { field, src, tgt, cols: vec![SparseVec::new(); src] }
    }

    /// The identity map.
    pub fn identity(field: Field, n: usize) -> LinearMap {
        LinearMap { field, src: n, tgt: n, cols: (0..n).map(|i| SparseVec(vec![(i, field.one())])).collect() }
    }

    /// Source dimension.
    pub fn src_dim(&self) -> usize {
        self.src
    }

    /// Target dimension.
    pub fn tgt_dim(&self) -> usize {
        self.tgt
    }

    /// Image of basis vector `j`.
    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    /// Image of a vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, s) in &v.0 {
            out = out.add_scaled(s, &self.cols[*j]);
        }
        out
    }

    /// Composite `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(other.tgt, self.src, "composable maps");
        LinearMap { field: self.field, src: other.src, tgt: self.tgt, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    /// Sum of two maps.
    pub fn add(&self, other: &LinearMap) -> LinearMap {
        assert_eq!((self.src, self.tgt), (other.src, other.tgt));
        let one = self.field.one();
        LinearMap {
            field: self.field,
            src: self.src,
            tgt: self.tgt,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(&one, b)).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap { field: self.field, src: self.src, tgt: self.tgt, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    /// Difference `self - other`.
    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    /// True for the zero map.
    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }
}

/// Homotopy retract data `(i, p, h)` from a complex `A` onto a space `H`
/// with zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    /// The big complex `A`.
    pub big: Arc<GradedSpace>,
    /// The small space `H` with zero differential.
    pub small: Arc<GradedSpace>,
    /// Inclusion `H -> A`, degree 0.
    pub i: LinearMap,
    /// Projection `A -> H`, degree 0.
    pub p: LinearMap,
    /// Homotopy `A -> A`, degree +1.
    pub h: LinearMap,
}

/// A side condition of a contraction that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionViolation {
    /// `ip - id` differs from `dh + hd`.
    HomotopyRelation,
    /// `pi` is not the identity of `H`.
    PiNotIdentity,
    /// `h∘h` is not zero.
    HSquared,
    /// `p∘h` is not zero.
    PH,
    /// `h∘i` is not zero.
    HI,
    /// The small space carries a nonzero differential.
    SmallNotMinimal,
    /// `d i` is not zero, so `i` is not a chain map into cycles.
    INotChainMap,
    /// `p d` is not zero, so `p` is not a chain map.
    PNotChainMap,
    /// A map does not have its required degree or shape.
    Shape(String),
}

impl fmt::Display for ContractionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionViolation::HomotopyRelation => f.write_str("ip - id = dh + hd fails"),
            ContractionViolation::PiNotIdentity => f.write_str("pi = id fails"),
            ContractionViolation::HSquared => f.write_str("h^2 = 0 fails"),
            ContractionViolation::PH => f.write_str("ph = 0 fails"),
            ContractionViolation::HI => f.write_str("hi = 0 fails"),
            ContractionViolation::SmallNotMinimal => f.write_str("small space has a nonzero differential"),
            ContractionViolation::INotChainMap => f.write_str("d i = 0 fails"),
            ContractionViolation::PNotChainMap => f.write_str("p d = 0 fails"),
            ContractionViolation::Shape(s) => write!(f, "shape: {s}"),
        }
    }
}

/// True iff `d` lowers degree by exactly one and squares to zero.
pub fn check_complex(v: &GradedSpace) -> bool {
    complex_defect(v).is_none()
}

fn complex_defect(v: &GradedSpace) -> Option<String> {
    for j in 0..v.dim() {
        for (i, _) in &v.diff[j].0 {
            if v.degrees[*i] != v.degrees[j] - 1 {
                return Some(format!("d({}) has a component on {} of the wrong degree", v.names[j], v.names[*i]));
            }
        }
    }
    let d = v.differential_map();
    let dd = d.compose(&d);
    for j in 0..v.dim() {
        if !dd.column(j).is_zero() {
            return Some(format!("d(d({})) = {}", v.names[j], v.show(dd.column(j))));
        }
    }
    None
}

fn map_has_degree(m: &LinearMap, src: &GradedSpace, tgt: &GradedSpace, deg: i32) -> bool {
    (0..m.src).all(|j| m.cols[j].0.iter().all(|(i, _)| tgt.degree(*i) == src.degree(j) + deg))
}

/// Lists every violated side condition; empty iff `c` is a contraction.
pub fn check_contraction(c: &Contraction) -> Vec<ContractionViolation> {
    let (a, hs) = (&*c.big, &*c.small);
    let mut out = Vec::new();
    let shapes = [
        (&c.i, hs.dim(), a.dim(), "i"),
        (&c.p, a.dim(), hs.dim(), "p"),
        (&c.h, a.dim(), a.dim(), "h"),
    ];
    for (m, s, t, name) in shapes {
        if m.src != s || m.tgt != t {
            out.push(ContractionViolation::Shape(format!("{name} has the wrong dimensions")));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if !map_has_degree(&c.i, hs, a, 0) {
        out.push(ContractionViolation::Shape("i is not of degree 0".into()));
    }
    if !map_has_degree(&c.p, a, hs, 0) {
        out.push(ContractionViolation::Shape("p is not of degree 0".into()));
    }
    if !map_has_degree(&c.h, a, a, 1) {
        out.push(ContractionViolation::Shape("h is not of degree +1".into()));
    }
    if !hs.has_zero_differential() {
        out.push(ContractionViolation::SmallNotMinimal);
    }
    let d = a.differential_map();
    let lhs = c.i.compose(&c.p).sub(&a.identity());
    let rhs = d.compose(&c.h).add(&c.h.compose(&d));
    if lhs != rhs {
        out.push(ContractionViolation::HomotopyRelation);
    }
    if c.p.compose(&c.i) != hs.identity() {
        out.push(ContractionViolation::PiNotIdentity);
    }
    if !c.h.compose(&c.h).is_zero() {
        out.push(ContractionViolation::HSquared);
    }
    if !c.p.compose(&c.h).is_zero() {
        out.push(ContractionViolation::PH);
    }
    if !c.h.compose(&c.i).is_zero() {
        out.push(ContractionViolation::HI);
    }
    if !d.compose(&c.i).is_zero() {
        out.push(ContractionViolation::INotChainMap);
    }
    if !c.p.compose(&d).is_zero() {
        out.push(ContractionViolation::PNotChainMap);
    }
    out
}

/// Pivot columns (leftmost-first) of a matrix given by sparse columns.
fn pivot_columns(field: Field, nrows: usize, cols: &[SparseVec]) -> Vec<usize> {
    let sys = SparseSystem::from_columns(field, nrows, cols, vec![field.zero(); nrows]);
    sys.pivot_columns()
}

/// The contraction of a complex onto a chosen homology complement.
///
/// Per degree `n` the basis of `A_n` is split as `B_n ⊕ H_n ⊕ C_n`, where
/// `B_n` is spanned by the images of the pivot columns of `d_{n+1}`, `C_n` by
/// the pivot basis vectors of `d_n`, and `H_n` by kernel vectors independent
/// of `B_n` (the declared unit is tried first). Then `h(d e_j) = -e_j` on
/// `B_n` and `h = 0` on `H_n ⊕ C_n`.
pub fn make_contraction(v: &GradedSpace) -> Result<Contraction, GradedError> {
    if let Some(why) = complex_defect(v) {
        return Err(GradedError::NotComplex(why));
    }
    let field = v.field;
    let one = field.one();
    // Per degree: chosen homology representatives (global A-vectors).
    let mut reps: Vec<(i32, SparseVec)> = Vec::new();
    // Per basis element of A: coordinates needed for p and h, filled below.
    let mut p_cols_a: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); v.dim()]; // rep slot, coeff
    let mut h_cols: Vec<SparseVec> = vec![SparseVec::new(); v.dim()];
    for n in v.occurring_degrees() {
        let idx_n = v.basis_in_degree(n);
        let idx_up = v.basis_in_degree(n + 1);
        let local: BTreeMap<usize, usize> = idx_n.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let to_local = |g: &SparseVec| SparseVec(g.0.iter().map(|(i, s)| (local[i], s.clone())).collect());
        let to_global = |l: &SparseVec| SparseVec(l.0.iter().map(|(k, s)| (idx_n[*k], s.clone())).collect());
        let dim = idx_n.len();
        // B_n: images of pivot columns of d_{n+1}.
        let up_cols: Vec<SparseVec> = idx_up.iter().map(|&j| to_local(&v.diff[j])).collect();
        let b_pivots = pivot_columns(field, dim, &up_cols);
        let b_vecs: Vec<SparseVec> = b_pivots.iter().map(|&k| up_cols[k].clone()).collect();
        let b_pre: Vec<usize> = b_pivots.iter().map(|&k| idx_up[k]).collect();
        // C_n: pivot basis vectors of d_n.
        let down_rows = v.basis_in_degree(n - 1);
        let down_pos: BTreeMap<usize, usize> = down_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let d_cols: Vec<SparseVec> = idx_n
            .iter()
            .map(|&j| SparseVec(v.diff[j].0.iter().map(|(i, s)| (down_pos[i], s.clone())).collect()))
            .collect();
        let c_pivots = pivot_columns(field, down_rows.len(), &d_cols);
        // Cycles: kernel of d_n.
        let sys = SparseSystem::from_columns(field, down_rows.len(), &d_cols, vec![field.zero(); down_rows.len()]);
        let SparseSolution::Solved { kernel, .. } = sys.solve(true) else { unreachable!("homogeneous system") };
        let mut candidates: Vec<SparseVec> = Vec::new();
        if let Some(u) = v.unit.filter(|&u| v.degrees[u] == n) {
            if !v.diff[u].is_zero() {
                return Err(GradedError::UnitNotHomology(v.names[u].clone()));
            }
            candidates.push(SparseVec(vec![(local[&u], one.clone())]));
        }
        candidates.extend(kernel);
        let mut stacked = b_vecs.clone();
        stacked.extend(candidates.iter().cloned());
        let piv = pivot_columns(field, dim, &stacked);
        let h_vecs: Vec<SparseVec> =
            piv.iter().filter(|&&k| k >= b_vecs.len()).map(|&k| stacked[k].clone()).collect();
        if let Some(u) = v.unit.filter(|&u| v.degrees[u] == n) {
            if h_vecs.first() != Some(&SparseVec(vec![(local[&u], one.clone())])) {
                return Err(GradedError::UnitNotHomology(v.names[u].clone()));
            }
        }
        // New basis of A_n: B, H, C; invert to read off coordinates.
        let mut new_basis = b_vecs.clone();
        new_basis.extend(h_vecs.iter().cloned());
        new_basis.extend(c_pivots.iter().map(|&k| SparseVec(vec![(k, one.clone())])));
        debug_assert_eq!(new_basis.len(), dim);
        let mut t = Matrix::zeros(field, dim, dim);
        for (c, col) in new_basis.iter().enumerate() {
            for (r, s) in &col.0 {
                t.set(*r, c, s.clone());
            }
        }
        let t_inv = t.inverse().expect("B ⊕ H ⊕ C is a basis");
        let rep_base = reps.len();
        for hv in &h_vecs {
            reps.push((n, to_global(hv)));
        }
        for (k, &gi) in idx_n.iter().enumerate() {
            // Coordinates of e_gi in the new basis are column k of t_inv.
            let mut h_col = Vec::new();
            for (slot, &pre) in b_pre.iter().enumerate() {
                let c = t_inv.get(slot, k);
                if !c.is_zero() {
                    h_col.push((pre, -c));
                }
            }
            h_col.sort_by_key(|(i, _)| *i);
            h_cols[gi] = SparseVec(h_col);
            for slot in 0..h_vecs.len() {
                let c = t_inv.get(b_vecs.len() + slot, k);
                if !c.is_zero() {
                    p_cols_a[gi].push((rep_base + slot, c.clone()));
                }
            }
        }
    }
    // Order H by the smallest basis index in each representative's support.
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&r| reps[r].1 .0.first().map(|(i, _)| *i).unwrap_or(usize::MAX));
    let mut slot_of = vec![0; reps.len()];
    for (pos, &r) in order.iter().enumerate() {
        slot_of[r] = pos;
    }
    let mut names = Vec::new();
    let mut taken = BTreeSet::new();
    for &r in &order {
        let vec = &reps[r].1;
        let lead = &v.names[vec.0[0].0];
        let mut name = if vec.nnz() == 1 && vec.0[0].1.is_one() { lead.clone() } else { format!("[{lead}]") };
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        names.push((name, reps[r].0));
    }
    let unit_h = v.unit.map(|u| {
        let r = reps.iter().position(|(_, vec)| vec.0 == vec![(u, one.clone())]).expect("unit kept");
        slot_of[r]
    });
    let small = GradedSpace::with_zero_differential(field, names, unit_h)?;
    let i_map = LinearMap::new(field, order.len(), v.dim(), order.iter().map(|&r| reps[r].1.clone()).collect());
    let p_map = LinearMap::new(
        field,
        v.dim(),
        order.len(),
        p_cols_a.into_iter().map(|col| SparseVec::from_entries(col.into_iter().map(|(r, s)| (slot_of[r], s)))).collect(),
    );
    let h_map = LinearMap::new(field, v.dim(), v.dim(), h_cols);
    Ok(Contraction { big: Arc::new(v.clone()), small: Arc::new(small), i: i_map, p: p_map, h: h_map })
}

/// Dimension of `H_n` computed as `dim ker d_n - rank d_{n+1}`.
pub fn homology_dimension(v: &GradedSpace, n: i32) -> usize {
    let dn = v.d_matrix(n);
    let up = v.d_matrix(n + 1);
    (dn.cols() - dn.rank()) - up.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    /// The exterior algebra on a, b, c (cohomological degree 1) with dc = ab,
    /// as a graded space with homological degrees.
    pub(crate) fn heisenberg_space() -> GradedSpace {
        let basis = ["1", "a", "b", "c", "ab", "ac", "bc", "abc"];
        let coh = [0, 1, 1, 1, 2, 2, 2, 3];
        let mut diff = vec![SparseVec::new(); 8];
        diff[3] = SparseVec(vec![(4, q(1))]); // d c = ab
        diff[5] = SparseVec::new(); // d(ac) = -a ab = 0
        diff[6] = SparseVec::new();
        GradedSpace::new(
            Field::Rational,
            basis.iter().zip(coh).map(|(n, d)| (n.to_string(), -d)).collect(),
            Some(0),
            diff,
        )
        .unwrap()
    }

    #[test]
    fn zero_differential_is_complex() {
        let v = GradedSpace::with_zero_differential(Field::Rational, vec![("x".into(), 0), ("y".into(), 3)], None)
            .unwrap();
        assert!(check_complex(&v));
        let c = make_contraction(&v).unwrap();
        assert_eq!(c.i, v.identity());
        assert_eq!(c.p, v.identity());
        assert!(c.h.is_zero());
    }

    #[test]
    fn raising_differential_is_rejected() {
        // c in homological degree -1 mapped to ab in degree 0: raises degree.
        let v = GradedSpace::new(
            Field::Rational,
            vec![("c".into(), -1), ("ab".into(), 0)],
            None,
            vec![SparseVec(vec![(1, q(1))]), SparseVec::new()],
        )
        .unwrap();
        assert!(!check_complex(&v));
    }

    #[test]
    fn heisenberg_homology() {
        let v = heisenberg_space();
        assert!(check_complex(&v));
        let c = make_contraction(&v).unwrap();
        assert!(check_contraction(&c).is_empty());
        let names: Vec<&str> = c.small.names().iter().map(String::as_str).collect();
        assert_eq!(names, ["1", "a", "b", "ac", "bc", "abc"]);
        let dims: Vec<usize> = (0..4).map(|k| c.small.basis_in_degree(-k).len()).collect();
        assert_eq!(dims, [1, 2, 2, 1]);
        for k in 0..4 {
            assert_eq!(homology_dimension(&v, -k), dims[k as usize]);
        }
        // Unit adapted.
        let u = c.small.unit().unwrap();
        assert_eq!(c.i.column(u), &SparseVec(vec![(0, q(1))]));
        assert!(c.h.column(0).is_zero());
    }

    #[test]
    fn acyclic_complex() {
        let v = GradedSpace::new(
            Field::Rational,
            vec![("e0".into(), 0), ("e1".into(), 1)],
            None,
            vec![SparseVec::new(), SparseVec(vec![(0, q(1))])],
        )
        .unwrap();
        let c = make_contraction(&v).unwrap();
        assert_eq!(c.small.dim(), 0);
        assert_eq!(c.h.column(0), &SparseVec(vec![(1, q(-1))]));
        assert!(check_contraction(&c).is_empty());
    }

    #[test]
    fn doubled_homotopy_is_reported() {
        let v = heisenberg_space();
        let mut c = make_contraction(&v).unwrap();
        c.h = c.h.scale(&q(2));
        assert!(check_contraction(&c).contains(&ContractionViolation::HomotopyRelation));
    }

    #[test]
    fn identity_data_on_non_minimal_complex() {
        let v = heisenberg_space();
        let c = Contraction {
            big: Arc::new(v.clone()),
            small: Arc::new(v.clone()),
            i: v.identity(),
            p: v.identity(),
            h: LinearMap::zero(Field::Rational, 8, 8),
        };
        // ip - id = 0 = dh + hd holds; the failure is that the "small" side
        // is not minimal and i does not land in cycles.
        let violations = check_contraction(&c);
        assert!(violations.contains(&ContractionViolation::SmallNotMinimal));
        assert!(violations.contains(&ContractionViolation::INotChainMap));
    }

    #[test]
    fn exact_unit_is_rejected() {
        let v = GradedSpace::new(
            Field::Rational,
            vec![("u".into(), 0), ("t".into(), 1)],
            Some(0),
            vec![SparseVec::new(), SparseVec(vec![(0, q(1))])],
        )
        .unwrap();
        assert!(matches!(make_contraction(&v), Err(GradedError::UnitNotHomology(_))));
    }
}
