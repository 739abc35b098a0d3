//! The convolution algebra of a space as a weight-filtered dg Lie algebra.
//!
//! Weight `w` is arity `w + 1`. A basis element of weight `w` and degree `d`
//! sends one tuple of `w + 1` basis inputs to one basis output; its key is
//! `[output, inputs...]`. In normalized mode the basis only uses tuples
//! without the unit, which spans a sub dg Lie algebra stable under twisting
//! by strictly unital structures.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::graded::GradedSpace;
use crate::lie::{fresh_owner_id, FilteredDgLie, Key, LieElement, LieError};
use crate::linalg::{Field, SparseVec};

use super::calculus::{bracket, differential};
use super::series::{same_space, OpSeries};

/// Which operations the solver basis runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionMode {
    /// All multilinear operations.
    Full,
    /// Operations vanishing as soon as one input is the unit.
    Normalized,
}

/// Default cap on the size of one basis component.
pub const DEFAULT_BASIS_CAP: usize = 200_000;

/// Basis keys by `(weight, degree)`.
type BasisCache = Mutex<HashMap<(usize, i32), Arc<Vec<Key>>>>;

/// The convolution dg Lie algebra `𝔤_A` truncated at arity `A_max`.
pub struct ConvolutionLie {
    id: u64,
    space: Arc<GradedSpace>,
    arity_max: usize,
    mode: ConvolutionMode,
    cap: usize,
    inputs: Vec<usize>,
    cache: BasisCache,
}

/// The convolution algebra of `space` in the given mode.
pub fn to_lie(space: &Arc<GradedSpace>, arity_max: usize, mode: ConvolutionMode) -> ConvolutionLie {
    ConvolutionLie::new(space, arity_max, mode)
}

impl ConvolutionLie {
    /// The convolution algebra of `space` with operations of arity `2..=arity_max`.
    pub fn new(space: &Arc<GradedSpace>, arity_max: usize, mode: ConvolutionMode) -> ConvolutionLie {
        assert!(arity_max >= 2, "the convolution algebra needs arity at least 2");
        let inputs = (0..space.dim())
            .filter(|&i| !(mode == ConvolutionMode::Normalized && space.unit() == Some(i)))
            .collect();
        ConvolutionLie {
            id: fresh_owner_id(),
            space: space.clone(),
            arity_max,
            mode,
            cap: DEFAULT_BASIS_CAP,
            inputs,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// The same algebra with another cap on basis sizes.
    pub fn with_cap(mut self, cap: usize) -> ConvolutionLie {
        self.cap = cap;
        self
    }

    /// The underlying space.
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    /// Maximal arity.
    pub fn arity_max(&self) -> usize {
        self.arity_max
    }

    /// Basis mode.
    pub fn mode(&self) -> ConvolutionMode {
        self.mode
    }

    /// The element of an operation family of arities at least 2.
    pub fn element(&self, s: &OpSeries) -> Result<LieElement, LieError> {
        if !same_space(s.src(), &self.space) || !same_space(s.tgt(), &self.space) {
            return Err(LieError::OwnerMismatch);
        }
        if s.component(1).is_some() {
            return Err(LieError::Hypothesis("arity-1 components are not part of the convolution algebra".into()));
        }
        let mut x = self.zero(s.degree());
        for (k, comp) in s.components() {
            if k > self.arity_max {
                continue;
            }
            for (t, col) in &comp.entries {
                for (o, c) in &col.0 {
                    let mut key = Vec::with_capacity(t.len() + 1);
                    key.push(*o as u32);
                    key.extend_from_slice(t);
                    x.add_term(k - 1, key, c.clone());
                }
            }
        }
        Ok(x)
    }

    /// The operation family of an element.
    pub fn series(&self, x: &LieElement) -> OpSeries {
        let mut s = OpSeries::zero_on(&self.space, x.degree(), self.arity_max);
        for (_, key, c) in x.terms() {
            s.add_column(key[1..].to_vec(), &SparseVec(vec![(key[0] as usize, c.clone())]));
        }
        s
    }

    /// True when no tuple of the element contains the unit.
    pub fn is_normalized(&self, x: &LieElement) -> bool {
        match self.space.unit() {
            None => true,
            Some(u) => x.terms().all(|(_, k, _)| !k[1..].contains(&(u as u32))),
        }
    }

    /// The sets of input degree sums reachable with `r` inputs, for `r ≤ k`.
    fn reachable(&self, k: usize) -> Vec<BTreeSet<i32>> {
        let degs: BTreeSet<i32> = self.inputs.iter().map(|&i| self.space.shifted_degree(i)).collect();
        let mut reach = vec![BTreeSet::from([0])];
        for r in 1..=k {
            let next = reach[r - 1].iter().flat_map(|s| degs.iter().map(move |d| s + d)).collect();
            reach.push(next);
        }
        reach
    }

    fn enumerate(&self, weight: usize, degree: i32) -> Result<Vec<Key>, LieError> {
        let k = weight + 1;
        let reach = self.reachable(k);
        let mut by_degree: HashMap<i32, Vec<usize>> = HashMap::new();
        for o in 0..self.space.dim() {
            by_degree.entry(self.space.shifted_degree(o)).or_default().push(o);
        }
        let targets: BTreeSet<i32> = by_degree.keys().map(|d| d - degree).collect();
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(k);
        self.walk(k, 0, &reach, &targets, &by_degree, degree, &mut buf, &mut out)?;
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        k: usize,
        sum: i32,
        reach: &[BTreeSet<i32>],
        targets: &BTreeSet<i32>,
        by_degree: &HashMap<i32, Vec<usize>>,
        degree: i32,
        buf: &mut Vec<u32>,
        out: &mut Vec<Key>,
    ) -> Result<(), LieError> {
        if buf.len() == k {
            if let Some(outs) = by_degree.get(&(sum + degree)) {
                for &o in outs {
                    let mut key = Vec::with_capacity(k + 1);
                    key.push(o as u32);
                    key.extend_from_slice(buf);
                    out.push(key);
                }
                if out.len() > self.cap {
                    return Err(LieError::Basis(format!(
                        "component of weight {} and degree {degree} exceeds the cap of {} elements",
                        k - 1,
                        self.cap
                    )));
                }
            }
            return Ok(());
        }
        let remaining = k - buf.len() - 1;
        for &i in &self.inputs {
            let s = sum + self.space.shifted_degree(i);
            if !targets.iter().any(|t| reach[remaining].contains(&(t - s))) {
                continue;
            }
            buf.push(i as u32);
            self.walk(k, s, reach, targets, by_degree, degree, buf, out)?;
            buf.pop();
        }
        Ok(())
    }

    /// True when the component of the given weight and degree is nonzero.
    fn occupied(&self, weight: usize, degree: i32) -> bool {
        let k = weight + 1;
        let reach = self.reachable(k);
        (0..self.space.dim()).any(|o| reach[k].contains(&(self.space.shifted_degree(o) - degree)))
    }
}

impl FilteredDgLie for ConvolutionLie {
    fn owner_id(&self) -> u64 {
        self.id
    }

    fn field(&self) -> Field {
        self.space.field()
    }

    fn weight_max(&self) -> usize {
        self.arity_max - 1
    }

    fn raw_bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let b = bracket(&self.series(x), &self.series(y)).expect("same space");
        self.element(&b).expect("arity at least 3")
    }

    fn raw_differential(&self, x: &LieElement) -> LieElement {
        let d = differential(&self.series(x)).expect("same space");
        self.element(&d).expect("arity preserved")
    }

    fn basis(&self, weight: usize, degree: i32) -> Result<Vec<Key>, LieError> {
        if weight == 0 || weight > self.weight_max() {
            return Ok(Vec::new());
        }
        if let Some(b) = self.cache.lock().expect("basis cache").get(&(weight, degree)) {
            return Ok(b.as_ref().clone());
        }
        let b = Arc::new(self.enumerate(weight, degree)?);
        self.cache.lock().expect("basis cache").insert((weight, degree), b.clone());
        Ok(b.as_ref().clone())
    }

    fn label(&self, _weight: usize, key: &[u32]) -> String {
        let ins: Vec<&str> = key[1..].iter().map(|&i| self.space.name(i as usize)).collect();
        format!("({}) -> {}", ins.join(","), self.space.name(key[0] as usize))
    }

    fn differential_weight_shifts(&self) -> Option<BTreeSet<usize>> {
        if self.space.has_zero_differential() {
            Some(BTreeSet::new())
        } else {
            Some(BTreeSet::from([0]))
        }
    }

    /// With `m < 0` the largest shifted degree of an admissible input, an
    /// arity-`k` operation of degree `-1` needs an output of degree at most
    /// `k m - 1`, so arities above `(min output degree + 1) / m` carry none;
    /// the components below that arity are inspected directly.
    fn degree_minus_one_bound(&self) -> Option<usize> {
        let Some(m) = self.inputs.iter().map(|&i| self.space.shifted_degree(i)).max() else {
            return Some(1);
        };
        if m >= 0 {
            return None;
        }
        let min_out = (0..self.space.dim()).map(|o| self.space.shifted_degree(o)).min()?;
        let top_arity = ((min_out + 1) / m).max(0) as usize;
        let top = (2..=top_arity).rev().find(|&k| self.occupied(k - 1, -1));
        Some(top.map_or(1, |k| k))
    }
}
