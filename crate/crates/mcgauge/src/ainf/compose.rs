//! The single composition routine behind every product of the calculus.
//!
//! An outer family `g` is evaluated after a family of inner maps, one per
//! input slot of `g`. Each slot draws from an [`InnerIndex`], which lists for
//! every basis element `e` of the intermediate space the ways of producing
//! `e` from a tuple of source inputs. The Koszul sign of a map of degree `k`
//! placed at a slot is `(-1)^{k * (degrees of all earlier inputs)}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graded::GradedSpace;
use crate::linalg::{Scalar, SparseVec};

use super::series::{same_space, OpSeries, Tuple};
use super::AinfError;

/// One way of producing an intermediate basis element.
#[derive(Clone, Debug)]
struct Producer {
    inputs: Tuple,
    coef: Scalar,
    input_degree: i32,
}

/// Inner map of one slot, indexed by the intermediate basis element it produces.
#[derive(Clone, Debug)]
pub struct InnerIndex {
    degree: i32,
    min_arity: usize,
    src: Arc<GradedSpace>,
    tgt: Arc<GradedSpace>,
    by_output: Vec<Vec<Producer>>,
}

impl InnerIndex {
    /// Index of a family of maps.
    pub fn of(s: &OpSeries) -> InnerIndex {
        let mut by_output: Vec<Vec<Producer>> = vec![Vec::new(); s.tgt().dim()];
        let mut min_arity = usize::MAX;
        for (k, comp) in s.components() {
            min_arity = min_arity.min(k);
            for (t, col) in &comp.entries {
                let input_degree = t.iter().map(|&i| s.src().shifted_degree(i as usize)).sum();
                for (o, c) in &col.0 {
                    by_output[*o].push(Producer { inputs: t.clone(), coef: c.clone(), input_degree });
                }
            }
        }
        InnerIndex {
            degree: s.degree(),
            min_arity: if min_arity == usize::MAX { 1 } else { min_arity },
            src: s.src().clone(),
            tgt: s.tgt().clone(),
            by_output,
        }
    }

    /// Index of the identity of a space.
    pub fn identity(space: &Arc<GradedSpace>) -> InnerIndex {
        let one = space.field().one();
        let by_output = (0..space.dim())
            .map(|i| {
                vec![Producer { inputs: vec![i as u32], coef: one.clone(), input_degree: space.shifted_degree(i) }]
            })
            .collect();
        InnerIndex { degree: 0, min_arity: 1, src: space.clone(), tgt: space.clone(), by_output }
    }
}

/// How the input slots of an outer operation of arity `r` are filled.
pub enum Slots<'a> {
    /// The same inner map in every slot.
    Uniform(&'a InnerIndex),
    /// `rest` everywhere except one slot carrying `mark`, summed over the marked slot.
    Marked { rest: &'a InnerIndex, mark: &'a InnerIndex },
    /// A sum over `j` of `before` in slots `< j`, `mark` in slot `j`, `after` in slots `> j`.
    Staircase { before: &'a InnerIndex, mark: &'a InnerIndex, after: &'a InnerIndex },
}

impl Slots<'_> {
    fn any(&self) -> &InnerIndex {
        match self {
            Slots::Uniform(i) => i,
            Slots::Marked { mark, .. } | Slots::Staircase { mark, .. } => mark,
        }
    }

    fn all(&self) -> Vec<&InnerIndex> {
        match self {
            Slots::Uniform(i) => vec![i],
            Slots::Marked { rest, mark } => vec![rest, mark],
            Slots::Staircase { before, mark, after } => vec![before, mark, after],
        }
    }

    fn result_degree(&self, outer: i32) -> i32 {
        match self {
            Slots::Uniform(_) => outer,
            Slots::Marked { mark, .. } | Slots::Staircase { mark, .. } => outer + mark.degree,
        }
    }

    /// The per-slot sources for every configuration at outer arity `r`.
    fn configurations(&self, r: usize) -> Vec<Vec<&InnerIndex>> {
        match self {
            Slots::Uniform(i) => vec![vec![*i; r]],
            Slots::Marked { rest, mark } => (0..r)
                .map(|j| (0..r).map(|s| if s == j { *mark } else { *rest }).collect())
                .collect(),
            Slots::Staircase { before, mark, after } => (0..r)
                .map(|j| {
                    (0..r)
                        .map(|s| match s.cmp(&j) {
                            std::cmp::Ordering::Less => *before,
                            std::cmp::Ordering::Equal => *mark,
                            std::cmp::Ordering::Greater => *after,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

struct Walk<'a> {
    sources: Vec<&'a InnerIndex>,
    outer_inputs: &'a [u32],
    min_rest: Vec<usize>,
    lo: usize,
    hi: usize,
    buf: Vec<u32>,
    acc: &'a mut HashMap<Tuple, SparseVec>,
    out_col: &'a SparseVec,
}

impl Walk<'_> {
    fn run(&mut self, slot: usize, coef: Scalar, sign: i64, prefix_degree: i32) {
        if slot == self.sources.len() {
            if self.buf.len() < self.lo {
                return;
            }
            let c = if sign.rem_euclid(2) == 1 { -&coef } else { coef };
            let entry = self.acc.entry(self.buf.clone()).or_default();
            *entry = entry.add_scaled(&c, self.out_col);
            return;
        }
        let idx = self.sources[slot];
        let producers = &idx.by_output[self.outer_inputs[slot] as usize];
        for p in producers {
            if self.buf.len() + p.inputs.len() + self.min_rest[slot + 1] > self.hi {
                continue;
            }
            let next_sign = sign + (idx.degree as i64) * (prefix_degree as i64);
            let len = self.buf.len();
            self.buf.extend_from_slice(&p.inputs);
            self.run(slot + 1, &coef * &p.coef, next_sign, prefix_degree + p.input_degree);
            self.buf.truncate(len);
        }
    }
}

/// Composes `outer` after the slot maps, keeping result arities in `lo..=hi`.
///
/// The result has the slot maps' source, the outer target, and degree
/// `outer.degree() + mark degree`. Uniform slot maps must have degree 0.
pub fn compose(outer: &OpSeries, slots: &Slots<'_>, lo: usize, hi: usize) -> Result<OpSeries, AinfError> {
    let first = slots.any();
    for idx in slots.all() {
        if !same_space(&idx.tgt, outer.src()) || !same_space(&idx.src, &first.src) {
            return Err(AinfError::SpaceMismatch);
        }
    }
    if let Slots::Uniform(i) = slots {
        if i.degree != 0 {
            return Err(AinfError::DegreeMismatch(i.degree, 0));
        }
    }
    let degree = slots.result_degree(outer.degree());
    let mut acc: HashMap<Tuple, SparseVec> = HashMap::new();
    let field = outer.field();
    for (r, comp) in outer.components() {
        for sources in slots.configurations(r) {
            let mut min_rest = vec![0; r + 1];
            for s in (0..r).rev() {
                min_rest[s] = min_rest[s + 1] + sources[s].min_arity;
            }
            if min_rest[0] > hi {
                continue;
            }
            for (t, col) in &comp.entries {
                let mut walk = Walk {
                    sources: sources.clone(),
                    outer_inputs: t,
                    min_rest: min_rest.clone(),
                    lo,
                    hi,
                    buf: Vec::with_capacity(hi),
                    acc: &mut acc,
                    out_col: col,
                };
                walk.run(0, field.one(), 0, 0);
            }
        }
    }
    let mut out = OpSeries::zero(first.src.clone(), outer.tgt().clone(), degree, hi);
    let mut keys: Vec<Tuple> = acc.keys().cloned().collect();
    keys.sort();
    for k in keys {
        let col = &acc[&k];
        if !col.is_zero() {
            out.add_column(k, col);
        }
    }
    Ok(out)
}
