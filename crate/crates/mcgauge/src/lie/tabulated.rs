//! Algebras given by explicit structure constants.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg::{Field, Scalar, SparseVec};

use super::{fresh_owner_id, FilteredDgLie, Key, LieElement, LieError};

/// A dg Lie algebra with a finite basis of weighted, graded elements and
/// tabulated bracket and differential constants.
///
/// The algebra is taken to be zero above its largest weight, so every
/// statement about it is exact.
#[derive(Debug)]
pub struct TabulatedDgLie {
    id: u64,
    field: Field,
    weight_max: usize,
    names: Vec<String>,
    weights: Vec<usize>,
    degrees: Vec<i32>,
    brackets: BTreeMap<(usize, usize), SparseVec>,
    diff: Vec<SparseVec>,
}

impl TabulatedDgLie {
    /// Builds an algebra from its basis `(name, weight, degree)`, the
    /// brackets `[e_i, e_j]` of some ordered pairs, and the differential
    /// column by column.
    ///
    /// A pair given in only one order is completed by antisymmetry. Products
    /// of total weight above `weight_max` must be absent. Constants violating
    /// the weight or degree rules are rejected; the Lie identities are
    /// checked separately by [`audit`](super::audit).
    pub fn new(
        field: Field,
        weight_max: usize,
        basis: Vec<(String, usize, i32)>,
        brackets: Vec<(usize, usize, SparseVec)>,
        diff: Vec<SparseVec>,
    ) -> Result<TabulatedDgLie, LieError> {
        let n = basis.len();
        if diff.len() != n {
            return Err(LieError::Basis(format!("{} differential columns for {n} basis elements", diff.len())));
        }
        let mut names = Vec::new();
        let mut weights = Vec::new();
        let mut degrees = Vec::new();
        for (name, w, d) in basis {
            if w == 0 || w > weight_max {
                return Err(LieError::Basis(format!("{name} has weight {w} outside 1..={weight_max}")));
            }
            names.push(name);
            weights.push(w);
            degrees.push(d);
        }
        let check_vec = |v: &SparseVec, w_lo: usize, deg: i32, what: &str| -> Result<(), LieError> {
            for (i, s) in &v.0 {
                if *i >= n || s.field() != field {
                    return Err(LieError::Basis(format!("{what}: entry out of range")));
                }
                if degrees[*i] != deg || weights[*i] < w_lo {
                    return Err(LieError::Basis(format!("{what}: term {} violates the degree or weight rule", names[*i])));
                }
            }
            Ok(())
        };
        for (j, col) in diff.iter().enumerate() {
            check_vec(col, weights[j], degrees[j] - 1, &format!("d({})", names[j]))?;
        }
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (i, j, v) in &brackets {
            if *i >= n || *j >= n {
                return Err(LieError::Basis("bracket index out of range".into()));
            }
            let what = format!("[{}, {}]", names[*i], names[*j]);
            if weights[*i] + weights[*j] > weight_max && !v.is_zero() {
                return Err(LieError::Basis(format!("{what} exceeds the maximal weight")));
            }
            check_vec(v, weights[*i] + weights[*j], degrees[*i] + degrees[*j], &what)?;
            table.insert((*i, *j), v.clone());
        }
        for (i, j, v) in &brackets {
            table.entry((*j, *i)).or_insert_with(|| {
                let s = field.sign(degrees[*i] as i64 * degrees[*j] as i64 + 1);
                v.scale(&s)
            });
        }
        table.retain(|_, v| !v.is_zero());
        Ok(TabulatedDgLie { id: fresh_owner_id(), field, weight_max, names, weights, degrees, brackets: table, diff })
    }

    /// The element `Σ c_i e_i` of the given degree.
    pub fn element(&self, degree: i32, coords: &[(usize, Scalar)]) -> Result<LieElement, LieError> {
        let mut x = self.zero(degree);
        for (i, c) in coords {
            if *i >= self.names.len() || self.degrees[*i] != degree {
                return Err(LieError::Basis(format!("basis index {i} is not of degree {degree}")));
            }
            x.add_term(self.weights[*i], vec![*i as u32], c.clone());
        }
        Ok(x)
    }

    /// Index of a basis name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn element_of(&self, degree: i32, v: &SparseVec) -> LieElement {
        let mut x = self.zero(degree);
        for (i, c) in &v.0 {
            if self.weights[*i] <= self.weight_max {
                x.add_term(self.weights[*i], vec![*i as u32], c.clone());
            }
        }
        x
    }
}

impl FilteredDgLie for TabulatedDgLie {
    fn owner_id(&self) -> u64 {
        self.id
    }

    fn field(&self) -> Field {
        self.field
    }

    fn weight_max(&self) -> usize {
        self.weight_max
    }

    fn raw_bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut acc = SparseVec::new();
        for (_, kx, cx) in x.terms() {
            for (_, ky, cy) in y.terms() {
                if let Some(v) = self.brackets.get(&(kx[0] as usize, ky[0] as usize)) {
                    acc = acc.add_scaled(&(cx * cy), v);
                }
            }
        }
        self.element_of(x.degree() + y.degree(), &acc)
    }

    fn raw_differential(&self, x: &LieElement) -> LieElement {
        let mut acc = SparseVec::new();
        for (_, k, c) in x.terms() {
            acc = acc.add_scaled(c, &self.diff[k[0] as usize]);
        }
        self.element_of(x.degree() - 1, &acc)
    }

    fn basis(&self, weight: usize, degree: i32) -> Result<Vec<Key>, LieError> {
        Ok((0..self.names.len())
            .filter(|&i| self.weights[i] == weight && self.degrees[i] == degree)
            .map(|i| vec![i as u32])
            .collect())
    }

    fn label(&self, _weight: usize, key: &[u32]) -> String {
        self.names[key[0] as usize].clone()
    }

    fn differential_weight_shifts(&self) -> Option<BTreeSet<usize>> {
        let mut s = BTreeSet::new();
        for (j, col) in self.diff.iter().enumerate() {
            for (i, _) in &col.0 {
                s.insert(self.weights[*i] - self.weights[j]);
            }
        }
        Some(s)
    }

    fn degree_minus_one_bound(&self) -> Option<usize> {
        let top = (0..self.names.len()).filter(|&i| self.degrees[i] == -1).map(|i| self.weights[i]).max();
        Some(top.map_or(1, |w| w + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::audit;

    /// The free nilpotent Lie algebra on `x, y` in weight 1 and degree 0,
    /// truncated at weight 3, with an odd line `t` in weight 1.
    fn sample() -> TabulatedDgLie {
        let q = Field::Rational;
        let v = |i: usize, c: i64| SparseVec(vec![(i, q.from_i64(c))]);
        let basis = vec![
            ("x".to_string(), 1, 0),
            ("y".to_string(), 1, 0),
            ("xy".to_string(), 2, 0),
            ("xxy".to_string(), 3, 0),
            ("yxy".to_string(), 3, 0),
        ];
        let brackets = vec![(0, 1, v(2, 1)), (0, 2, v(3, 1)), (1, 2, v(4, 1))];
        TabulatedDgLie::new(q, 3, basis, brackets, vec![SparseVec::new(); 5]).unwrap()
    }

    #[test]
    fn antisymmetric_completion_and_audit() {
        let g = sample();
        assert!(audit(&g, &[0]).unwrap().is_empty());
        let q = Field::Rational;
        let x = g.element(0, &[(0, q.one())]).unwrap();
        let y = g.element(0, &[(1, q.one())]).unwrap();
        assert_eq!(g.bracket(&y, &x).unwrap(), g.bracket(&x, &y).unwrap().neg());
        assert!(g.bracket(&x, &x).unwrap().is_zero());
        assert_eq!(g.degree_minus_one_bound(), Some(1));
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let q = Field::Rational;
        let v = |i: usize, c: i64| SparseVec(vec![(i, q.from_i64(c))]);
        let basis = vec![
            ("x".to_string(), 1, 0),
            ("y".to_string(), 1, 0),
            ("z".to_string(), 1, 0),
            ("xy".to_string(), 2, 0),
            ("yz".to_string(), 2, 0),
            ("zx".to_string(), 2, 0),
            ("top".to_string(), 3, 0),
        ];
        // [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 3 top
        let brackets = vec![
            (0, 1, v(3, 1)),
            (1, 2, v(4, 1)),
            (2, 0, v(5, 1)),
            (0, 4, v(6, 1)),
            (1, 5, v(6, 1)),
            (2, 3, v(6, 1)),
        ];
        let g = TabulatedDgLie::new(q, 3, basis, brackets, vec![SparseVec::new(); 7]).unwrap();
        let bad = audit(&g, &[0]).unwrap();
        assert!(bad.iter().any(|m| m.starts_with("Jacobi")));
    }

    #[test]
    fn weight_rule_is_enforced() {
        let q = Field::Rational;
        let basis = vec![("x".to_string(), 1, 0), ("y".to_string(), 1, 0)];
        let err = TabulatedDgLie::new(q, 2, basis, vec![(0, 1, SparseVec(vec![(1, q.one())]))], vec![SparseVec::new(); 2]);
        assert!(matches!(err, Err(LieError::Basis(_))));
    }
}
