//! Multilinear operations on suspended spaces and arity-indexed families of them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::graded::{GradedSpace, LinearMap};
use crate::linalg::{Field, Scalar, SparseVec};

use super::AinfError;

/// An input tuple of basis indices.
pub type Tuple = Vec<u32>;

/// One multilinear operation of fixed arity on suspended spaces.
///
/// Maps each input basis tuple to a sparse output column. Tuples whose column
/// would be zero are never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiOp {
    /// Entries `inputs -> output column`.
    pub entries: BTreeMap<Tuple, SparseVec>,
}

impl MultiOp {
    /// Number of stored input tuples.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no tuple is stored.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c * e_out` to the value on `inputs`.
    pub fn add_entry(&mut self, inputs: Tuple, out: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        self.add_column(inputs, &SparseVec(vec![(out, c)]));
    }

    /// Adds a column to the value on `inputs`.
    pub fn add_column(&mut self, inputs: Tuple, col: &SparseVec) {
        if col.is_zero() {
            return;
        }
        let field = col.0[0].1.field();
        let slot = self.entries.entry(inputs).or_default();
        *slot = slot.add_scaled(&field.one(), col);
        let empty = slot.is_zero();
        if empty {
            self.entries.retain(|_, v| !v.is_zero());
        }
    }

    /// Value on an input tuple.
    pub fn get(&self, inputs: &[u32]) -> Option<&SparseVec> {
        self.entries.get(inputs)
    }
}

/// An arity-indexed family of multilinear maps `(sA)^{⊗k} -> sB` of one
/// element degree, truncated at a maximal arity.
///
/// Elements of the convolution algebra (source equals target, arities at
/// least 2), A∞-structures (degree `-1`) and ∞-morphisms (degree 0,
/// arities at least 1) are all values of this type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSeries {
    src: Arc<GradedSpace>,
    tgt: Arc<GradedSpace>,
    degree: i32,
    max_arity: usize,
    comps: BTreeMap<usize, MultiOp>,
}

/// Element of the convolution algebra of a space.
pub type ConvElement = OpSeries;
/// An ∞-morphism given by its components.
pub type InftyMorphism = OpSeries;

/// True when two space handles denote the same space.
pub fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl OpSeries {
    /// The zero family.
    pub fn zero(src: Arc<GradedSpace>, tgt: Arc<GradedSpace>, degree: i32, max_arity: usize) -> OpSeries {
        OpSeries { src, tgt, degree, max_arity, comps: BTreeMap::new() }
    }

    /// The zero element of the convolution algebra of `space`.
    pub fn zero_on(space: &Arc<GradedSpace>, degree: i32, max_arity: usize) -> OpSeries {
        OpSeries::zero(space.clone(), space.clone(), degree, max_arity)
    }

    /// The identity ∞-morphism of `space`.
    pub fn identity(space: &Arc<GradedSpace>, max_arity: usize) -> OpSeries {
        let mut s = OpSeries::zero_on(space, 0, max_arity);
        let one = space.field().one();
        for i in 0..space.dim() {
            s.add_entry(vec![i as u32], i, one.clone());
        }
        s
    }

    /// The shifted internal differential `b₁` of `space` as an arity-1 family of degree `-1`.
    pub fn differential_of(space: &Arc<GradedSpace>, max_arity: usize) -> OpSeries {
        let mut s = OpSeries::zero_on(space, -1, max_arity);
        for j in 0..space.dim() {
            let col = space.differential(j).clone();
            s.add_column(vec![j as u32], &col);
        }
        s
    }

    /// An arity-1 family from a linear map of the given degree.
    pub fn from_linear(
        map: &LinearMap,
        src: &Arc<GradedSpace>,
        tgt: &Arc<GradedSpace>,
        degree: i32,
        max_arity: usize,
    ) -> OpSeries {
        let mut s = OpSeries::zero(src.clone(), tgt.clone(), degree, max_arity);
        for j in 0..map.src_dim() {
            s.add_column(vec![j as u32], &map.column(j).clone());
        }
        s
    }

    /// `map ∘ self` for a linear map of degree `map_degree` into `tgt`.
    pub fn post_apply(&self, map: &LinearMap, tgt: &Arc<GradedSpace>, map_degree: i32) -> OpSeries {
        let mut out = OpSeries::zero(self.src.clone(), tgt.clone(), self.degree + map_degree, self.max_arity);
        for comp in self.comps.values() {
            for (t, col) in &comp.entries {
                let v = map.apply(col);
                if !v.is_zero() {
                    out.add_column(t.clone(), &v);
                }
            }
        }
        out
    }

    /// Source space.
    pub fn src(&self) -> &Arc<GradedSpace> {
        &self.src
    }

    /// Target space.
    pub fn tgt(&self) -> &Arc<GradedSpace> {
        &self.tgt
    }

    /// Ground field.
    pub fn field(&self) -> Field {
        self.tgt.field()
    }

    /// Element degree (on suspended spaces).
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Truncation arity.
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// Component of arity `k`, if nonzero.
    pub fn component(&self, k: usize) -> Option<&MultiOp> {
        self.comps.get(&k)
    }

    /// Iterator over the nonzero components.
    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.comps.iter().map(|(k, m)| (*k, m))
    }

    /// Arities carrying a nonzero component.
    pub fn arities(&self) -> Vec<usize> {
        self.comps.keys().copied().collect()
    }

    /// True for the zero family.
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Total number of stored tuples.
    pub fn nnz(&self) -> usize {
        self.comps.values().map(MultiOp::len).sum()
    }

    /// Adds `c * e_out` at `inputs`, checking the degree constraint.
    ///
    /// # Panics
    /// Panics if the entry violates `deg(out) = Σ deg(inputs) + degree` on the
    /// suspended spaces, or exceeds the truncation arity.
    pub fn add_entry(&mut self, inputs: Tuple, out: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        self.add_column(inputs, &SparseVec(vec![(out, c)]));
    }

    /// Adds a column at `inputs`.
    pub fn add_column(&mut self, inputs: Tuple, col: &SparseVec) {
        let k = inputs.len();
        assert!(k >= 1 && k <= self.max_arity, "arity {k} outside 1..={}", self.max_arity);
        if col.is_zero() {
            return;
        }
        let in_deg: i32 = inputs.iter().map(|&i| self.src.shifted_degree(i as usize)).sum();
        for (o, _) in &col.0 {
            assert_eq!(
                self.tgt.shifted_degree(*o),
                in_deg + self.degree,
                "entry violates the degree constraint"
            );
        }
        let comp = self.comps.entry(k).or_default();
        comp.add_column(inputs, col);
        if comp.is_empty() {
            self.comps.remove(&k);
        }
    }

    /// Replaces the component of arity `k`.
    pub fn set_component(&mut self, k: usize, op: MultiOp) {
        if op.is_empty() || k > self.max_arity {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, op);
        }
    }

    /// Copy keeping only the arities in `lo..=hi`.
    pub fn restrict(&self, lo: usize, hi: usize) -> OpSeries {
        let mut s = self.clone();
        s.comps.retain(|k, _| *k >= lo && *k <= hi);
        s
    }

    /// Only the component of arity `k`.
    pub fn part(&self, k: usize) -> OpSeries {
        self.restrict(k, k)
    }

    /// Copy with a different truncation arity (higher arities are dropped).
    pub fn with_max_arity(&self, max_arity: usize) -> OpSeries {
        let mut s = self.clone();
        s.max_arity = max_arity;
        s.comps.retain(|k, _| *k <= max_arity);
        s
    }

    fn check_compatible(&self, other: &OpSeries) -> Result<(), AinfError> {
        if !same_space(&self.src, &other.src) || !same_space(&self.tgt, &other.tgt) {
            return Err(AinfError::SpaceMismatch);
        }
        if self.degree != other.degree {
            return Err(AinfError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &OpSeries) -> Result<OpSeries, AinfError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.max_arity = self.max_arity.min(other.max_arity);
        out.comps.retain(|k, _| *k <= out.max_arity);
        if c.is_zero() {
            return Ok(out);
        }
        for (k, comp) in &other.comps {
            if *k > out.max_arity {
                continue;
            }
            for (t, col) in &comp.entries {
                let scaled = col.scale(c);
                let slot = out.comps.entry(*k).or_default();
                slot.add_column(t.clone(), &scaled);
            }
        }
        out.comps.retain(|_, m| !m.is_empty());
        Ok(out)
    }

    /// `self + other`.
    pub fn add(&self, other: &OpSeries) -> Result<OpSeries, AinfError> {
        self.add_scaled(&self.field().one(), other)
    }

    /// `self - other`.
    pub fn sub(&self, other: &OpSeries) -> Result<OpSeries, AinfError> {
        self.add_scaled(&self.field().from_i64(-1), other)
    }

    /// `c * self`.
    pub fn scale(&self, c: &Scalar) -> OpSeries {
        let mut out = self.clone();
        if c.is_zero() {
            out.comps.clear();
            return out;
        }
        for comp in out.comps.values_mut() {
            for col in comp.entries.values_mut() {
                *col = col.scale(c);
            }
        }
        out
    }

    /// `-self`.
    pub fn neg(&self) -> OpSeries {
        self.scale(&self.field().from_i64(-1))
    }

    /// Value of the arity-`k` component on a tuple of inputs.
    pub fn eval(&self, inputs: &[u32]) -> SparseVec {
        self.comps.get(&inputs.len()).and_then(|c| c.get(inputs)).cloned().unwrap_or_default()
    }

    /// True when the arity-1 component is the identity (source equals target).
    pub fn is_isotopy(&self) -> bool {
        same_space(&self.src, &self.tgt)
            && self.degree == 0
            && self.part(1) == OpSeries::identity(&self.src, self.max_arity)
    }

    /// Human-readable listing of all entries, one per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, comp) in &self.comps {
            for (t, col) in &comp.entries {
                let ins: Vec<&str> = t.iter().map(|&i| self.src.name(i as usize)).collect();
                s.push_str(&format!("  m{k}({}) = {}\n", ins.join(","), self.tgt.show(col)));
            }
        }
        s
    }
}

impl fmt::Display for OpSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
