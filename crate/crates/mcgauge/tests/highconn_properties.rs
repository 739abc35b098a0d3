use std::collections::BTreeMap;
use std::sync::Arc;

use mcgauge::ainf::{bracket, from_unshifted, is_mc, to_unshifted, OpSeries};
use mcgauge::graded::{make_contraction, GradedSpace};
use mcgauge::highconn::{
    build_beta, build_lambda, check_hypotheses, degree_audit, minimal_model_pipeline, GaugeMethod, PoincareData,
};
use mcgauge::linalg::{solve_affine, AffineSolution, Field, Matrix, Scalar};
use mcgauge::samples::{cohomological_space, f3, structure_from_table};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A_MAX: usize = 6;

/// Connectivity, formal dimension, arity bound and the degrees `d < n/2`
/// (plus the middle degree, if any) that carry two basis elements.
const SHAPES: [(usize, i32, usize, &[i32]); 7] = [
    (1, 5, 3, &[2]),
    (1, 6, 3, &[2, 3]),
    (2, 8, 3, &[3, 4]),
    (2, 9, 3, &[3, 4]),
    (2, 10, 3, &[3, 4, 5]),
    (1, 7, 4, &[2, 3]),
    (1, 8, 5, &[2, 3, 4]),
];

/// A Poincaré duality algebra with two classes in each listed degree and in
/// its complement, the graded commutative pairing `a_i b_i = ν`, and no
/// other products of non-units. An odd middle degree gets `m_1 m_2 = ν`.
fn pairing_algebra(n: i32, degrees: &[i32]) -> OpSeries {
    let mut basis: Vec<(String, i32)> = vec![("1".into(), 0)];
    let mut pairs: Vec<(String, String, i64)> = Vec::new();
    for &d in degrees {
        let e = n - d;
        if d < e {
            basis.extend((1..=2).map(|i| (format!("a{d}_{i}"), d)));
            for i in 1..=2 {
                basis.push((format!("b{e}_{i}"), e));
                pairs.push((format!("a{d}_{i}"), format!("b{e}_{i}"), 1));
                pairs.push((format!("b{e}_{i}"), format!("a{d}_{i}"), if d * e % 2 == 0 { 1 } else { -1 }));
            }
        } else if d == e && d % 2 == 0 {
            for i in 1..=2 {
                basis.push((format!("m{d}_{i}"), d));
                pairs.push((format!("m{d}_{i}"), format!("m{d}_{i}"), 1));
            }
        } else if d == e {
            basis.extend((1..=2).map(|i| (format!("m{d}_{i}"), d)));
            pairs.push((format!("m{d}_1"), format!("m{d}_2"), 1));
            pairs.push((format!("m{d}_2"), format!("m{d}_1"), -1));
        }
    }
    basis.push(("v".into(), n));
    let b: Vec<(&str, i32)> = basis.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    let a = cohomological_space(Field::Rational, &b, Some("1"), &[]);
    let mut table: Vec<(Vec<&str>, &str, i64)> = vec![(vec!["1", "1"], "1", 1)];
    for (s, _) in &basis[1..] {
        table.push((vec!["1", s], s, 1));
        table.push((vec![s, "1"], s, 1));
    }
    for (p, q, c) in &pairs {
        table.push((vec![p, q], "v", *c));
    }
    let entries: Vec<(&[&str], &str, i64)> = table.iter().map(|(i, o, c)| (i.as_slice(), *o, *c)).collect();
    structure_from_table(&a, A_MAX, &entries)
}

fn cdeg(a: &GradedSpace, i: u32) -> i64 {
    -a.degree(i as usize) as i64
}

/// A random `m_p` into the top class whose unsuspended coefficients satisfy
/// the signed cyclic sums, sampled from the kernel of the constraint matrix.
fn random_cyclic(a: &Arc<GradedSpace>, p: usize, n: i64, rng: &mut ChaCha8Rng) -> OpSeries {
    let field = Field::Rational;
    let letters: Vec<u32> = (1..a.dim() as u32 - 1).collect();
    let mut ts: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..p {
        ts = ts.into_iter().flat_map(|w| letters.iter().map(move |&l| [w.clone(), vec![l]].concat())).collect();
    }
    ts.retain(|t| t.iter().map(|&i| cdeg(a, i)).sum::<i64>() == n + p as i64 - 2);
    let mut m = OpSeries::zero_on(a, -1, A_MAX);
    if ts.is_empty() {
        return m;
    }
    let pos: BTreeMap<&Vec<u32>, usize> = ts.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rows = Vec::new();
    for t in &ts {
        let mut row = vec![field.zero(); ts.len()];
        let mut prefix = 0;
        for j in 0..p {
            let rot: Vec<u32> = t[j..].iter().chain(&t[..j]).copied().collect();
            let e = j as i64 * (p as i64 + 1) + prefix * (n - p as i64 + 1);
            row[pos[&rot]] = row[pos[&rot]].clone() + field.sign(e);
            prefix += cdeg(a, t[j]);
        }
        rows.push(row);
    }
    let mut coeffs = vec![field.zero(); ts.len()];
    for k in Matrix::from_rows(field, rows).unwrap().kernel() {
        let c = field.from_i64(rng.gen_range(-3..=3));
        for (x, y) in coeffs.iter_mut().zip(k) {
            *x = x.clone() + c.clone() * y;
        }
    }
    let top = a.index_of("v").unwrap();
    for (t, c) in ts.into_iter().zip(coeffs) {
        m.add_entry(t, top, c);
    }
    from_unshifted(&m)
}

fn random_instance(shape: usize, rng: &mut ChaCha8Rng) -> (OpSeries, PoincareData) {
    let (k, n, ell, degrees) = SHAPES[shape];
    let binary = pairing_algebra(n, degrees);
    let a = binary.src().clone();
    let mut phi = binary.add(&random_cyclic(&a, ell, n as i64, rng)).unwrap();
    if n as usize == (ell + 1) * k + 2 {
        phi = phi.add(&random_cyclic(&a, ell + 1, n as i64, rng)).unwrap();
    }
    let p = PoincareData::from_pairing(&phi, k, n as usize, ell).unwrap();
    (phi, p)
}

#[test]
fn random_instances_satisfy_the_hypotheses() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for shape in 0..SHAPES.len() {
        let (phi, p) = random_instance(shape, &mut rng);
        assert!(is_mc(&phi).unwrap());
        assert!(check_hypotheses(&p, &phi).unwrap().is_empty(), "shape {shape}");
        assert!(degree_audit(phi.src(), p.ell, A_MAX).iter().all(|a| a.admissible == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closed_forms_pass_their_residual_checks(seed in any::<u64>(), shape in 0..SHAPES.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (phi, p) = random_instance(shape, &mut rng);
        let lambda = build_lambda(&phi, &p).unwrap();
        prop_assert!(bracket(&phi.part(2), &lambda).unwrap().sub(&phi.part(p.ell)).unwrap().is_zero());
        let beta = build_beta(&phi, &p).unwrap();
        prop_assert!(bracket(&phi.part(2), &beta).unwrap().sub(&phi.part(p.ell + 1)).unwrap().is_zero());
    }

    #[test]
    fn pipeline_uses_the_closed_forms(seed in any::<u64>(), shape in 0..SHAPES.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (phi, p) = random_instance(shape, &mut rng);
        let c = make_contraction(phi.src()).unwrap();
        let r = minimal_model_pipeline(&phi, &c, &p, A_MAX).unwrap();
        if phi.component(p.ell).is_some() {
            prop_assert_eq!(&r.lambda.method, &GaugeMethod::ClosedForm);
        }
        if phi.component(p.ell + 1).is_some() {
            prop_assert_eq!(&r.beta.method, &GaugeMethod::ClosedForm);
        }
        prop_assert!((p.ell..=A_MAX).all(|a| r.final_structure.component(a).is_none()));
    }
}

/// Solves `[φ₂, λ] = φ₃` for the F3 sample by dense elimination over all
/// degree-0 binary operations on non-unit inputs.
fn f3_lambda_by_elimination(phi: &OpSeries) -> OpSeries {
    let a = phi.src();
    let field = Field::Rational;
    let mut unknowns: Vec<(Vec<u32>, usize)> = Vec::new();
    for x in 1..a.dim() as u32 {
        for y in 1..a.dim() as u32 {
            for o in 1..a.dim() {
                if a.shifted_degree(o) == a.shifted_degree(x as usize) + a.shifted_degree(y as usize) {
                    unknowns.push((vec![x, y], o));
                }
            }
        }
    }
    let images: Vec<OpSeries> = unknowns
        .iter()
        .map(|(t, o)| {
            let mut l = OpSeries::zero_on(a, 0, A_MAX);
            l.add_entry(t.clone(), *o, field.one());
            bracket(&phi.part(2), &l).unwrap()
        })
        .collect();
    let mut rows: BTreeMap<(Vec<u32>, usize), usize> = BTreeMap::new();
    for s in images.iter().chain(std::iter::once(&phi.part(3))) {
        for (_, comp) in s.components() {
            for (t, col) in &comp.entries {
                for (o, _) in &col.0 {
                    let next = rows.len();
                    rows.entry((t.clone(), *o)).or_insert(next);
                }
            }
        }
    }
    let coord = |s: &OpSeries, r: &(Vec<u32>, usize)| -> Scalar {
        s.eval(&r.0).get(r.1).cloned().unwrap_or_else(|| field.zero())
    };
    let keys: Vec<(Vec<u32>, usize)> = {
        let mut k: Vec<_> = rows.iter().collect();
        k.sort_by_key(|(_, &i)| i);
        k.into_iter().map(|(r, _)| r.clone()).collect()
    };
    let m = Matrix::from_rows(field, keys.iter().map(|r| images.iter().map(|s| coord(s, r)).collect()).collect()).unwrap();
    let b: Vec<Scalar> = keys.iter().map(|r| coord(&phi.part(3), r)).collect();
    let AffineSolution::Solved { x: particular, .. } = solve_affine(&m, &b).unwrap() else { panic!("no solution") };
    let mut l = OpSeries::zero_on(a, 0, A_MAX);
    for ((t, o), c) in unknowns.iter().zip(particular) {
        l.add_entry(t.clone(), *o, c);
    }
    l
}

#[test]
fn f3_closed_form_and_elimination_are_both_witnesses() {
    let s = f3(Field::Rational, A_MAX);
    let p = PoincareData::from_pairing(&s.structure, 1, 5, 3).unwrap();
    let closed = build_lambda(&s.structure, &p).unwrap();
    let solved = f3_lambda_by_elimination(&s.structure);
    for l in [&closed, &solved] {
        assert!(bracket(&s.structure.part(2), l).unwrap().sub(&s.structure.part(3)).unwrap().is_zero());
    }
    let gap = closed.sub(&solved).unwrap();
    assert!(bracket(&s.structure.part(2), &gap).unwrap().is_zero());
    assert!(!to_unshifted(&closed).is_zero());
}

