//! Exact linear algebra over the rationals and prime fields.
//!
//! Every vanishing check in the crate reduces to an affine system `M x = b`.
//! Systems are reduced to reduced row echelon form, so the pivot columns, the
//! particular solution (free variables set to zero) and the kernel basis (one
//! vector per free column, in increasing column order) are canonical and
//! reproducible byte for byte.

mod rat;
mod scalar;
mod sparse;

pub use rat::{ParseRatError, Rat};
pub use scalar::{Field, Scalar};
pub use sparse::{SparseSolution, SparseSystem, SparseVec};

/// Errors raised by the linear algebra layer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    /// Shapes of the operands do not fit together.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Division by a zero scalar.
    #[error("division by zero")]
    DivisionByZero,
    /// A rational could not be mapped into a prime field.
    #[error("denominator {0} is not invertible in the active field")]
    NotInvertible(String),
    /// A prime-field modulus that is not a prime below 2^31.
    #[error("modulus {0} is not a prime below 2^31")]
    BadModulus(u32),
    /// Malformed scalar text.
    #[error("{0}")]
    Parse(String),
}

/// A dense row-major matrix of scalars from a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// The zero matrix.
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("rows of unequal length".into()));
        }
        let n = rows.len();
        Ok(Matrix { field, rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer rows.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Result<Matrix, LinalgError> {
        Matrix::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The ground field.
    pub fn field(&self) -> Field {
        self.field
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch("inner dimensions differ".into()));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transposed matrix.
    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn to_system(&self, b: &[Scalar]) -> SparseSystem {
        let rows = (0..self.rows).map(|i| SparseVec::from_dense(self.row(i))).collect();
        SparseSystem::new(self.field, self.cols, rows, b.to_vec())
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        self.to_system(&vec![self.field.zero(); self.rows]).rank()
    }

    /// Canonical kernel basis.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        match solve_affine(self, &vec![self.field.zero(); self.rows]) {
            Ok(AffineSolution::Solved { kernel, .. }) => kernel,
            _ => unreachable!("homogeneous systems are always solvable"),
        }
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut out = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            let mut e = vec![self.field.zero(); n];
            e[j] = self.field.one();
            match solve_affine(self, &e).ok()? {
                AffineSolution::Solved { x, kernel } if kernel.is_empty() => {
                    for (i, v) in x.into_iter().enumerate() {
                        out.set(i, j, v);
                    }
                }
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Result of [`solve_affine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    /// The system `M x = b` is inconsistent.
    NoSolution,
    /// A particular solution and a basis of the kernel of `M`.
    Solved {
        /// Particular solution with every free variable set to zero.
        x: Vec<Scalar>,
        /// Kernel basis, one vector per free column in increasing order.
        kernel: Vec<Vec<Scalar>>,
    },
}

/// Solves `M x = b` exactly.
///
/// ```
/// use mcgauge::linalg::{solve_affine, AffineSolution, Field, Matrix};
/// let q = Field::Rational;
/// let m = Matrix::from_i64_rows(q, &[&[1, 2]]).unwrap();
/// let AffineSolution::Solved { x, kernel } = solve_affine(&m, &[q.from_i64(4)]).unwrap() else {
///     panic!()
/// };
/// assert_eq!(x, vec![q.from_i64(4), q.zero()]);
/// assert_eq!(kernel, vec![vec![q.from_i64(-2), q.one()]]);
/// ```
pub fn solve_affine(m: &Matrix, b: &[Scalar]) -> Result<AffineSolution, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            m.rows
        )));
    }
    if b.iter().any(|s| s.field() != m.field) {
        return Err(LinalgError::DimensionMismatch("right-hand side lives in another field".into()));
    }
    Ok(match m.to_system(b).solve(true) {
        SparseSolution::NoSolution => AffineSolution::NoSolution,
        SparseSolution::Solved { x, kernel } => AffineSolution::Solved {
            x: x.to_dense(m.field, m.cols),
            kernel: kernel.iter().map(|k| k.to_dense(m.field, m.cols)).collect(),
        },
    })
}

/// True iff the integer `n >= 1` is invertible in `field`.
pub fn unit_check(field: Field, n: u64) -> bool {
    field.unit_check(n)
}
