//! Seeded random operation families for property checks.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::Rng;

use crate::graded::GradedSpace;

use super::series::OpSeries;

/// Coefficients are drawn from `{-2, -1, 1, 2}`.
const COEFS: [i64; 4] = [-2, -1, 1, 2];

/// Options for [`random_series`].
#[derive(Clone, Debug)]
pub struct RandomShape {
    /// Element degree.
    pub degree: i32,
    /// Arities to populate.
    pub arities: RangeInclusive<usize>,
    /// Target number of entries per arity.
    pub entries: usize,
    /// Exclude tuples containing the unit of the source space.
    pub normalized: bool,
}

/// A random family `src -> tgt` with `shape.entries` entries per arity where possible.
pub fn random_series<R: Rng>(
    src: &Arc<GradedSpace>,
    tgt: &Arc<GradedSpace>,
    max_arity: usize,
    shape: &RandomShape,
    rng: &mut R,
) -> OpSeries {
    let field = tgt.field();
    let mut s = OpSeries::zero(src.clone(), tgt.clone(), shape.degree, max_arity);
    if src.dim() == 0 || tgt.dim() == 0 {
        return s;
    }
    let inputs: Vec<usize> =
        (0..src.dim()).filter(|&i| !(shape.normalized && src.unit() == Some(i))).collect();
    if inputs.is_empty() {
        return s;
    }
    for k in shape.arities.clone() {
        if k > max_arity || k == 0 {
            continue;
        }
        let mut placed = 0;
        for _ in 0..shape.entries * 20 {
            if placed == shape.entries {
                break;
            }
            let t: Vec<u32> = (0..k).map(|_| inputs[rng.gen_range(0..inputs.len())] as u32).collect();
            let deg: i32 = t.iter().map(|&i| src.shifted_degree(i as usize)).sum::<i32>() + shape.degree;
            let outs: Vec<usize> = (0..tgt.dim()).filter(|&o| tgt.shifted_degree(o) == deg).collect();
            if outs.is_empty() {
                continue;
            }
            let o = outs[rng.gen_range(0..outs.len())];
            let c = field.from_i64(COEFS[rng.gen_range(0..COEFS.len())]);
            s.add_entry(t, o, c);
            placed += 1;
        }
    }
    s
}

/// A random ∞-isotopy `1 + λ` with `λ` in arities `2..=max_arity`.
pub fn random_isotopy<R: Rng>(space: &Arc<GradedSpace>, max_arity: usize, entries: usize, rng: &mut R) -> OpSeries {
    let shape = RandomShape { degree: 0, arities: 2..=max_arity, entries, normalized: false };
    let lambda = random_series(space, space, max_arity, &shape, rng);
    OpSeries::identity(space, max_arity).add(&lambda).expect("same shape")
}
