//! Built-in example algebras.
//!
//! Each sample is given with cohomological degrees and unsuspended product
//! tables, exactly as a user would write it in an input file; the tables are
//! converted to the internal homological, suspended form on construction.

use std::sync::Arc;

use crate::ainf::{from_unshifted, OpSeries};
use crate::graded::GradedSpace;
use crate::linalg::{Field, SparseVec};

/// An A∞-algebra given by its space and its operations of arity at least 2.
#[derive(Clone, Debug)]
pub struct Sample {
    /// Short identifier.
    pub name: &'static str,
    /// Underlying space with its differential.
    pub space: Arc<GradedSpace>,
    /// Operations of arity at least 2, suspended.
    pub structure: OpSeries,
}

/// One entry `m_k(inputs) += coef * output` of an unsuspended table.
pub type TableEntry<'a> = (&'a [&'a str], &'a str, i64);

/// Builds a space from `(name, cohomological degree)` pairs and a differential
/// table `(source, target, coefficient)`.
pub fn cohomological_space(
    field: Field,
    basis: &[(&str, i32)],
    unit: Option<&str>,
    diff: &[(&str, &str, i64)],
) -> Arc<GradedSpace> {
    let idx = |n: &str| basis.iter().position(|(b, _)| *b == n).unwrap_or_else(|| panic!("unknown basis name {n}"));
    let mut cols = vec![Vec::new(); basis.len()];
    for (s, t, c) in diff {
        cols[idx(s)].push((idx(t), field.from_i64(*c)));
    }
    let space = GradedSpace::new(
        field,
        basis.iter().map(|(n, d)| (n.to_string(), -d)).collect(),
        unit.map(idx),
        cols.into_iter().map(SparseVec::from_entries).collect(),
    )
    .expect("valid sample space");
    Arc::new(space)
}

/// Suspended operations from an unsuspended table.
pub fn structure_from_table(space: &Arc<GradedSpace>, max_arity: usize, table: &[TableEntry<'_>]) -> OpSeries {
    let field = space.field();
    let idx = |n: &str| space.index_of(n).unwrap_or_else(|| panic!("unknown basis name {n}"));
    let mut m = OpSeries::zero_on(space, -1, max_arity);
    for (ins, out, c) in table {
        if ins.len() > max_arity {
            continue;
        }
        let t: Vec<u32> = ins.iter().map(|n| idx(n) as u32).collect();
        m.add_entry(t, idx(out), field.from_i64(*c));
    }
    from_unshifted(&m)
}

fn unit_products<'a>(unit: &'a str, names: &'a [&'a str]) -> Vec<(Vec<&'a str>, &'a str)> {
    let mut v = vec![(vec![unit, unit], unit)];
    for n in names {
        v.push((vec![unit, *n], *n));
        v.push((vec![*n, unit], *n));
    }
    v
}

fn assemble<'a>(unit: &'a str, names: &'a [&'a str], rest: &[TableEntry<'a>]) -> Vec<(Vec<&'a str>, &'a str, i64)> {
    let mut v: Vec<(Vec<&str>, &str, i64)> = unit_products(unit, names).into_iter().map(|(i, o)| (i, o, 1)).collect();
    v.extend(rest.iter().map(|(i, o, c)| (i.to_vec(), *o, *c)));
    v
}

fn build(name: &'static str, space: Arc<GradedSpace>, max_arity: usize, table: &[(Vec<&str>, &str, i64)]) -> Sample {
    let entries: Vec<TableEntry<'_>> = table.iter().map(|(i, o, c)| (i.as_slice(), *o, *c)).collect();
    let structure = structure_from_table(&space, max_arity, &entries);
    Sample { name, space, structure }
}

/// The exterior algebra `Λ(a, b, c)` with `dc = ab`, the cochains of the
/// Heisenberg nilmanifold.
pub fn heisenberg(field: Field, max_arity: usize) -> Sample {
    let space = cohomological_space(
        field,
        &[("1", 0), ("a", 1), ("b", 1), ("c", 1), ("ab", 2), ("ac", 2), ("bc", 2), ("abc", 3)],
        Some("1"),
        &[("c", "ab", 1)],
    );
    let names = ["a", "b", "c", "ab", "ac", "bc", "abc"];
    let table = assemble(
        "1",
        &names,
        &[
            (&["a", "b"], "ab", 1),
            (&["b", "a"], "ab", -1),
            (&["a", "c"], "ac", 1),
            (&["c", "a"], "ac", -1),
            (&["b", "c"], "bc", 1),
            (&["c", "b"], "bc", -1),
            (&["a", "bc"], "abc", 1),
            (&["bc", "a"], "abc", 1),
            (&["b", "ac"], "abc", -1),
            (&["ac", "b"], "abc", -1),
            (&["c", "ab"], "abc", 1),
            (&["ab", "c"], "abc", 1),
        ],
    );
    build("heisenberg", space, max_arity, &table)
}

/// A cochain model of the two-sphere: `⟨1, x, u, w⟩` with `du = w` and only
/// unit products, whose cohomology is `⟨1, x⟩`.
pub fn sphere(field: Field, max_arity: usize) -> Sample {
    let space = cohomological_space(
        field,
        &[("1", 0), ("u", 1), ("x", 2), ("w", 2)],
        Some("1"),
        &[("u", "w", 1)],
    );
    let names = ["u", "x", "w"];
    let table = assemble("1", &names, &[]);
    build("sphere", space, max_arity, &table)
}

/// A minimal A∞-algebra with Poincaré duality in formal dimension 5:
/// `H⁰ = ⟨1⟩`, `H² = ⟨x1, x2⟩`, `H³ = ⟨y1, y2⟩`, `H⁵ = ⟨v⟩`, the pairing
/// `x_u y_w = y_w x_u = δ_{uw} v`, and a ternary operation
/// `m₃(x_a, x_b, x_c) = c(a, b, c) v` with `c(1,1,2) = 1`, `c(1,2,1) = -1`.
pub fn f3(field: Field, max_arity: usize) -> Sample {
    let space = cohomological_space(
        field,
        &[("1", 0), ("x1", 2), ("x2", 2), ("y1", 3), ("y2", 3), ("v", 5)],
        Some("1"),
        &[],
    );
    let names = ["x1", "x2", "y1", "y2", "v"];
    let table = assemble(
        "1",
        &names,
        &[
            (&["x1", "y1"], "v", 1),
            (&["y1", "x1"], "v", 1),
            (&["x2", "y2"], "v", 1),
            (&["y2", "x2"], "v", 1),
            (&["x1", "x1", "x2"], "v", 1),
            (&["x1", "x2", "x1"], "v", -1),
        ],
    );
    build("f3", space, max_arity, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{is_mc, mc_residual};
    use crate::graded::check_complex;

    #[test]
    fn samples_are_complexes_with_mc_structures() {
        for s in [heisenberg(Field::Rational, 6), sphere(Field::Rational, 6), f3(Field::Rational, 6)] {
            assert!(check_complex(&s.space), "{}", s.name);
            let r = mc_residual(&s.structure).unwrap();
            assert!(r.is_zero(), "{} residual:\n{}", s.name, r);
        }
    }

    #[test]
    fn heisenberg_mc_detects_a_broken_product() {
        let s = heisenberg(Field::Rational, 6);
        let broken = structure_from_table(&s.space, 6, &[(&["a", "b"], "ab", 1)]);
        let perturbed = s.structure.add(&broken).unwrap();
        assert!(!is_mc(&perturbed).unwrap());
    }

    #[test]
    fn heisenberg_mc_over_prime_fields() {
        for p in [2, 5, 7] {
            let s = heisenberg(Field::prime(p).unwrap(), 6);
            assert!(is_mc(&s.structure).unwrap());
        }
    }
}
