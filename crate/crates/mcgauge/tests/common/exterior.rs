//! A from-scratch model of the exterior algebra `Λ(a, b, c)` with `dc = ab`.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Monomials are bitmasks over the generators `a = 1`, `b = 2`, `c = 4`.
pub type Form = BTreeMap<u8, i64>;

pub fn wedge_sign(x: u8, y: u8) -> i64 {
    // number of pairs (i in x, j in y) with j < i
    let mut n = 0;
    for i in 0..3 {
        if x & (1 << i) != 0 {
            n += (y & ((1 << i) - 1)).count_ones();
        }
    }
    if n % 2 == 0 { 1 } else { -1 }
}

pub fn mul(x: &Form, y: &Form) -> Form {
    let mut out = Form::new();
    for (&m, &p) in x {
        for (&n, &q) in y {
            if m & n == 0 {
                *out.entry(m | n).or_insert(0) += wedge_sign(m, n) * p * q;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn mono(m: u8) -> Form {
    Form::from([(m, 1)])
}

pub fn d(x: &Form) -> Form {
    let mut out = Form::new();
    for (&m, &c) in x {
        if m & 4 != 0 {
            // d(u·c) = (-1)^{|u|} u·ab for u the part before c
            let u = m & 3;
            let s = if u.count_ones() % 2 == 0 { 1 } else { -1 };
            for (k, v) in mul(&mono(u), &mono(3)) {
                *out.entry(k).or_insert(0) += s * c * v;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn degree_basis(deg: u32) -> Vec<u8> {
    (0u8..8).filter(|m| m.count_ones() == deg).collect()
}

/// Some `u` with `du = x`, by search over small coefficients.
pub fn primitive(x: &Form, deg: u32) -> Option<Form> {
    let basis = degree_basis(deg);
    let n = basis.len() as u32;
    for code in 0..3i64.pow(n) {
        let mut u = Form::new();
        let mut c = code;
        for &m in &basis {
            let coef = c % 3 - 1;
            c /= 3;
            if coef != 0 {
                u.insert(m, coef);
            }
        }
        if d(&u) == *x {
            return Some(u);
        }
    }
    None
}

/// Coordinates in `H² = ⟨ac, bc⟩`, reducing modulo the exact form `ab`.
pub fn h2_class(x: &Form) -> (i64, i64) {
    (x.get(&5).copied().unwrap_or(0), x.get(&6).copied().unwrap_or(0))
}

/// The class of `⟨a, a, b⟩` in `H² = ⟨ac, bc⟩`, with the indeterminacy
/// `a·H¹ + H¹·b` checked to vanish.
pub fn massey_aab() -> ((i64, i64), bool) {
    let (a, b) = (mono(1), mono(2));
    let u = primitive(&mul(&a, &a), 1).expect("aa is exact");
    let v = primitive(&mul(&a, &b), 1).expect("ab is exact");
    let mut w = mul(&u, &b);
    for (k, c) in mul(&a, &v) {
        *w.entry(k).or_insert(0) += c;
    }
    w.retain(|_, c| *c != 0);
    assert!(d(&w).is_empty());
    let zero_indeterminacy = [mono(1), mono(2)]
        .iter()
        .all(|h| h2_class(&mul(&a, h)) == (0, 0) && h2_class(&mul(h, &b)) == (0, 0));
    (h2_class(&w), zero_indeterminacy)
}
