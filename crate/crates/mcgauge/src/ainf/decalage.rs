//! Conversion between unsuspended operations `m_k` and their suspended form.
//!
//! A map `m_k : A^{⊗k} -> A` of degree `D` corresponds to the operation
//! `b_k(sa₁, ..., sa_k) = (-1)^{Σ_j (k-j)|a_j|} s m_k(a₁, ..., a_k)` of
//! element degree `D - k + 1`. The sign only depends on the inputs, so the
//! conversion is its own inverse.

use super::series::{MultiOp, OpSeries};

/// The décalage sign exponent `Σ_j (k - j)|a_j|` for unsuspended degrees.
pub fn decalage_exponent(degrees: &[i32]) -> i64 {
    let k = degrees.len() as i64;
    degrees.iter().enumerate().map(|(j, &d)| (k - 1 - j as i64) * d as i64).sum()
}

/// Applies the décalage sign to every entry of `m`, reading unsuspended
/// input degrees from the source space.
fn resign(m: &OpSeries) -> OpSeries {
    let mut out = m.clone();
    let field = m.field();
    for (k, comp) in m.components() {
        let mut op = MultiOp::default();
        for (t, col) in &comp.entries {
            let degs: Vec<i32> = t.iter().map(|&i| m.src().degree(i as usize)).collect();
            let s = field.sign(decalage_exponent(&degs));
            op.add_column(t.clone(), &col.scale(&s));
        }
        out.set_component(k, op);
    }
    out
}

/// Suspended form of a family whose entries hold unsuspended coefficients.
pub fn from_unshifted(m: &OpSeries) -> OpSeries {
    resign(m)
}

/// Unsuspended coefficients of a suspended family.
pub fn to_unshifted(b: &OpSeries) -> OpSeries {
    resign(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_examples() {
        assert_eq!(decalage_exponent(&[1, 1]), 1);
        assert_eq!(decalage_exponent(&[1, 0, 1]), 2);
        assert_eq!(decalage_exponent(&[3]), 0);
    }
}
