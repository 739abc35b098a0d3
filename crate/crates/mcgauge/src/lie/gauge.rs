//! The Maurer-Cartan equation, the gauge action and the BCH product.

use crate::linalg::{Rat, Scalar};

use super::{FilteredDgLie, LieElement, LieError};

fn require_degree(x: &LieElement, expected: i32) -> Result<(), LieError> {
    if x.degree() != expected {
        return Err(LieError::DegreeMismatch { found: x.degree(), expected });
    }
    Ok(())
}

fn inverse_of(g: &dyn FilteredDgLie, n: i64, what: &str) -> Result<Scalar, LieError> {
    g.field().from_i64(n).inv().map_err(|_| LieError::NotInvertible(what.to_string()))
}

fn require_factorials(g: &dyn FilteredDgLie) -> Result<(), LieError> {
    let w = g.weight_max() as u64;
    if !g.field().factorial_is_unit(w) {
        return Err(LieError::NotInvertible(format!("{w}!")));
    }
    Ok(())
}

/// `dφ + ½[φ, φ]`.
pub fn mc_residual(g: &dyn FilteredDgLie, phi: &LieElement) -> Result<LieElement, LieError> {
    require_degree(phi, -1)?;
    let half = inverse_of(g, 2, "2")?;
    g.differential(phi)?.add_scaled(&half, &g.bracket(phi, phi)?)
}

/// True when `φ` satisfies the Maurer-Cartan equation modulo `ℱ^{W+1}`.
pub fn mc_check(g: &dyn FilteredDgLie, phi: &LieElement) -> Result<bool, LieError> {
    Ok(mc_residual(g, phi)?.is_zero())
}

/// The gauge action `λ·φ = e^{ad_λ}(φ) - ((e^{ad_λ} - id)/ad_λ)(dλ)`.
///
/// Both series are finite modulo `ℱ^{W+1}` because `ad_λ` raises weight.
pub fn gauge_action(g: &dyn FilteredDgLie, lambda: &LieElement, phi: &LieElement) -> Result<LieElement, LieError> {
    require_degree(lambda, 0)?;
    require_degree(phi, -1)?;
    require_factorials(g)?;
    g.check_owner(lambda)?;
    g.check_owner(phi)?;
    let mut out = phi.clone();
    let mut term = phi.clone();
    for k in 1..=g.weight_max() as i64 {
        term = g.raw_bracket(lambda, &term).scale(&inverse_of(g, k, "k")?);
        if term.is_zero() {
            break;
        }
        out = out.add(&term)?;
    }
    let mut term = g.raw_differential(lambda);
    let mut corr = term.clone();
    for k in 1..=g.weight_max() as i64 {
        term = g.raw_bracket(lambda, &term).scale(&inverse_of(g, k + 1, "k")?);
        if term.is_zero() {
            break;
        }
        corr = corr.add(&term)?;
    }
    out.sub(&corr)
}

/// Bernoulli numbers `B_0, ..., B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rat> {
    let mut b = vec![Rat::from_int(1)];
    for m in 1..=n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rat::from_int(0);
        let mut binom = Rat::from_int(1);
        for (k, bk) in b.iter().enumerate() {
            acc = acc.add(&binom.mul(bk));
            binom = binom.mul(&Rat::new((m + 1 - k) as i64, (k + 1) as i64));
        }
        b.push(acc.neg().mul(&Rat::new(1, (m + 1) as i64)));
    }
    b
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The BCH product `BCH(x, y) = log(e^x e^y)` of two degree-0 elements,
/// modulo `ℱ^{W+1}`.
///
/// The homogeneous parts `Z_n` of order `n` in `x, y` satisfy `Z_1 = x + y` and
/// `(n+1) Z_{n+1} = ½[x - y, Z_n] + Σ_{p ≥ 1} B_{2p}/(2p)! Σ_{k_1+…+k_{2p} = n}
/// [Z_{k_1}, [… [Z_{k_{2p}}, x + y] …]]`. Order-`n` parts have weight at least
/// `n`, so the recursion stops at `n = W`.
pub fn bch(g: &dyn FilteredDgLie, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
    require_degree(x, 0)?;
    require_degree(y, 0)?;
    require_factorials(g)?;
    g.check_owner(x)?;
    g.check_owner(y)?;
    let field = g.field();
    let w = g.weight_max();
    let bern = bernoulli_numbers(w);
    let sum = x.add(y)?;
    let diff = x.sub(y)?;
    let half = inverse_of(g, 2, "2")?;
    let mut z: Vec<LieElement> = vec![g.zero(0), sum.clone()];
    for n in 1..w {
        let mut next = g.raw_bracket(&diff, &z[n]).scale(&half);
        let mut fact = Rat::from_int(1);
        for p in 1..=n / 2 {
            fact = fact.mul(&Rat::from_int(((2 * p - 1) * (2 * p)) as i64));
            let coef = bern[2 * p].mul(&fact.inv().expect("nonzero factorial"));
            if coef.is_zero() {
                continue;
            }
            let c = field.from_rat(&coef).map_err(|_| LieError::NotInvertible(format!("B_{}/{}!", 2 * p, 2 * p)))?;
            for ks in compositions(n, 2 * p) {
                let mut t = sum.clone();
                for &k in ks.iter().rev() {
                    t = g.raw_bracket(&z[k], &t);
                    if t.is_zero() {
                        break;
                    }
                }
                next = next.add_scaled(&c, &t)?;
            }
        }
        z.push(next.scale(&inverse_of(g, (n + 1) as i64, "n")?));
    }
    let mut out = g.zero(0);
    for part in z.iter().skip(1) {
        out = out.add(part)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(6);
        assert_eq!(b[1], Rat::new(-1, 2));
        assert_eq!(b[2], Rat::new(1, 6));
        assert_eq!(b[3], Rat::from_int(0));
        assert_eq!(b[4], Rat::new(-1, 30));
        assert_eq!(b[6], Rat::new(1, 42));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(5, 3).len(), 6);
        assert!(compositions(2, 3).is_empty());
    }
}
