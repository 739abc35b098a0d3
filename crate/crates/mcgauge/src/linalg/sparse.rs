//! Sparse vectors and the row-echelon solver shared by every linear system.

use std::collections::BTreeMap;

use super::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(pub Vec<(usize, Scalar)>);

impl SparseVec {
    /// The empty (zero) vector.
    pub fn new() -> SparseVec {
        SparseVec(Vec::new())
    }

    /// Drops zeros from a dense slice.
    pub fn from_dense(v: &[Scalar]) -> SparseVec {
        SparseVec(v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect())
    }

    /// Builds a vector from unsorted entries, summing duplicates.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, s) in entries {
            match acc.get_mut(&i) {
                Some(t) => *t += &s,
                None => {
                    acc.insert(i, s);
                }
            }
        }
        SparseVec(acc.into_iter().filter(|(_, s)| !s.is_zero()).collect())
    }

    /// Dense form of the given length.
    pub fn to_dense(&self, field: Field, len: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, s) in &self.0 {
            out[*i] = s.clone();
        }
        out
    }

    /// True for the zero vector.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    /// Coefficient at `i`.
    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.0[k].1)
    }

    /// Returns `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec(out)
    }

    /// Returns `c * self`.
    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, s)| (*i, c * s)).collect())
    }

    /// Dot product with another sparse vector.
    pub fn dot(&self, other: &SparseVec, field: Field) -> Scalar {
        let mut acc = field.zero();
        let (mut a, mut b) = (0, 0);
        while a < self.0.len() && b < other.0.len() {
            let (i, x) = &self.0[a];
            let (j, y) = &other.0[b];
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                acc += &(x * y);
                a += 1;
                b += 1;
            }
        }
        acc
    }
}

/// Outcome of [`SparseSystem::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparseSolution {
    /// No solution exists.
    NoSolution,
    /// Canonical particular solution and (optionally computed) kernel basis.
    Solved {
        /// Particular solution, free variables zero.
        x: SparseVec,
        /// Kernel basis, one vector per free column in increasing order.
        kernel: Vec<SparseVec>,
    },
}

/// A linear system stored as sparse equation rows.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    field: Field,
    ncols: usize,
    rows: Vec<SparseVec>,
    rhs: Vec<Scalar>,
}

/// Reduced row echelon form built one equation at a time.
struct Echelon {
    field: Field,
    /// Pivot column to slot in `rows`.
    pivots: BTreeMap<usize, usize>,
    /// Rows with leading coefficient one, zero in every other pivot column.
    rows: Vec<(SparseVec, Scalar)>,
    inconsistent: bool,
}

impl Echelon {
    fn new(field: Field) -> Echelon {
        Echelon { field, pivots: BTreeMap::new(), rows: Vec::new(), inconsistent: false }
    }

    fn push(&mut self, row: &SparseVec, rhs: &Scalar) {
        let mut r = row.clone();
        let mut b = rhs.clone();
        let hits: Vec<(usize, Scalar)> =
            row.0.iter().filter(|(c, _)| self.pivots.contains_key(c)).cloned().collect();
        for (c, v) in hits {
            let slot = self.pivots[&c];
            let (p, pb) = &self.rows[slot];
            let neg = -&v;
            r = r.add_scaled(&neg, p);
            b += &(&neg * pb);
        }
        let Some((lead, lv)) = r.0.first().cloned() else {
            if !b.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lv.inv().expect("leading entry is nonzero");
        let r = r.scale(&inv);
        let b = &b * &inv;
        for (p, pb) in self.rows.iter_mut() {
            if let Some(c) = p.get(lead).cloned() {
                let neg = -&c;
                *p = p.add_scaled(&neg, &r);
                *pb += &(&neg * &b);
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push((r, b));
    }
}

impl SparseSystem {
    /// A system with the given equation rows and right-hand side.
    pub fn new(field: Field, ncols: usize, rows: Vec<SparseVec>, rhs: Vec<Scalar>) -> SparseSystem {
        assert_eq!(rows.len(), rhs.len(), "one right-hand side entry per row");
        SparseSystem { field, ncols, rows, rhs }
    }

    /// Builds the system whose matrix has the given sparse columns.
    pub fn from_columns(field: Field, nrows: usize, cols: &[SparseVec], rhs: Vec<Scalar>) -> SparseSystem {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, s) in &col.0 {
                rows[*i].push((j, s.clone()));
            }
        }
        SparseSystem::new(field, cols.len(), rows.into_iter().map(SparseVec).collect(), rhs)
    }

    /// Number of unknowns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of equations.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Equation rows.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Right-hand side.
    pub fn rhs(&self) -> &[Scalar] {
        &self.rhs
    }

    fn echelon(&self, stop_on_inconsistency: bool) -> Echelon {
        let mut e = Echelon::new(self.field);
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            e.push(row, b);
            if stop_on_inconsistency && e.inconsistent {
                break;
            }
        }
        e
    }

    /// Pivot columns of the reduced row echelon form, in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut e = Echelon::new(self.field);
        let zero = self.field.zero();
        for row in &self.rows {
            e.push(row, &zero);
        }
        e.pivots.into_keys().collect()
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field);
        let zero = self.field.zero();
        for row in &self.rows {
            e.push(row, &zero);
        }
        e.rows.len()
    }

    /// Solves the system; the kernel basis is only assembled on request.
    pub fn solve(&self, with_kernel: bool) -> SparseSolution {
        let e = self.echelon(true);
        if e.inconsistent {
            return SparseSolution::NoSolution;
        }
        let x = SparseVec(
            e.pivots.iter().map(|(c, slot)| (*c, e.rows[*slot].1.clone())).filter(|(_, s)| !s.is_zero()).collect(),
        );
        let mut kernel = Vec::new();
        if with_kernel {
            let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for (c, slot) in &e.pivots {
                for (f, v) in &e.rows[*slot].0 .0 {
                    if f != c {
                        by_free.entry(*f).or_default().push((*c, -v));
                    }
                }
            }
            for f in (0..self.ncols).filter(|f| !e.pivots.contains_key(f)) {
                let mut entries = by_free.remove(&f).unwrap_or_default();
                entries.push((f, e.field.one()));
                entries.sort_by_key(|(i, _)| *i);
                kernel.push(SparseVec(entries));
            }
        }
        SparseSolution::Solved { x, kernel }
    }

    /// For an inconsistent system, a vector `y` with `y M = 0` and `y b = 1`.
    ///
    /// Such a `y` certifies that `M x = b` has no solution without rerunning
    /// the elimination. Returns `None` when the system is consistent.
    pub fn dual_certificate(&self) -> Option<SparseVec> {
        // Unknowns: y (one per row). Equations: columns of M, then b . y = 1.
        let nrows = self.rows.len();
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.ncols + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, s) in &row.0 {
                cols[*j].push((i, s.clone()));
            }
        }
        for (i, b) in self.rhs.iter().enumerate() {
            if !b.is_zero() {
                cols[self.ncols].push((i, b.clone()));
            }
        }
        let mut rhs = vec![self.field.zero(); self.ncols + 1];
        rhs[self.ncols] = self.field.one();
        let dual = SparseSystem::new(self.field, nrows, cols.into_iter().map(SparseVec).collect(), rhs);
        match dual.solve(false) {
            SparseSolution::Solved { x, .. } => Some(x),
            SparseSolution::NoSolution => None,
        }
    }

    /// Checks `M x = b` exactly.
    pub fn is_solution(&self, x: &SparseVec) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(r, b)| &r.dot(x, self.field) == b)
    }

    /// Checks that `y` certifies inconsistency: `y M = 0` and `y b != 0`.
    pub fn is_dual_certificate(&self, y: &SparseVec) -> bool {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, yi) in &y.0 {
            if *i >= self.rows.len() {
                return false;
            }
            for (j, s) in &self.rows[*i].0 {
                let e = acc.entry(*j).or_insert_with(|| self.field.zero());
                *e += &(yi * s);
            }
        }
        let yb = y.0.iter().fold(self.field.zero(), |a, (i, yi)| &a + &(yi * &self.rhs[*i]));
        acc.values().all(Scalar::is_zero) && !yb.is_zero()
    }
}
