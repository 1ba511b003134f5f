//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are row-major over `Complex64` and sized for automata work
//! (dimensions up to a few dozen). Composite spaces use the convention
//! that `tensor` block (i, j) of `a ⊗ b` equals `a[i,j] · b`, so the
//! composite basis index of `(i_a, i_b)` is `i_a * dim_b + i_b`.

use std::fmt;

use thiserror::Error;

pub use num_complex::Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("not a density operator: {reason}")]
    NotDensityOperator { reason: String },
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Create a matrix from row-major entries. Panics if the entry count
    /// does not equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            data: entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        }
    }

    /// The outer product `|i⟩⟨j|` on a `dim`-dimensional space.
    pub fn basis_outer(dim: usize, i: usize, j: usize) -> Self {
        assert!(i < dim && j < dim);
        let mut m = Self::zeros(dim, dim);
        m.set(i, j, Complex64::ONE);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions must agree for multiplication"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for j in 0..self.cols {
                acc += self.get(i, j) * v.data[j];
            }
            out.push(acc);
        }
        ComplexVector { data: out }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.distance(other) <= tol
    }

    /// Kronecker product: block (i, j) of the result equals `self[i,j] * other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Trace out the second factor of a bipartite operator on a space of
    /// dimension `dim_a * dim_b`.
    pub fn partial_trace_second(&self, dim_a: usize, dim_b: usize) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows != dim_a * dim_b {
            return Err(LinalgError::DimensionMismatch {
                context: format!(
                    "partial trace expects a {0}x{0} matrix for dims {1}x{2}, got {3}x{3}",
                    dim_a * dim_b,
                    dim_a,
                    dim_b,
                    self.rows
                ),
            });
        }
        let mut out = Self::zeros(dim_a, dim_a);
        for i in 0..dim_a {
            for j in 0..dim_a {
                let mut acc = Complex64::ZERO;
                for b in 0..dim_b {
                    acc += self.get(i * dim_b + b, j * dim_b + b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// True iff `‖V†V − I‖_F ≤ tol`. For square matrices this is the
    /// unitarity test; tall matrices are isometries in the usual sense.
    pub fn is_isometry(&self, tol: f64) -> bool {
        let gram = self.dagger().mul(self);
        gram.distance(&Self::identity(self.cols)) <= tol
    }

    /// Residual of the isometry condition, `‖V†V − I‖_F`.
    pub fn isometry_residual(&self) -> f64 {
        self.dagger().mul(self).distance(&Self::identity(self.cols))
    }

    /// True iff the matrix is Hermitian and idempotent within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        self.distance(&self.dagger()) <= tol && self.mul(self).distance(self) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.distance(&self.dagger()) <= tol
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.get(i, j);
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Diagonal 0/1 projector with 1 exactly at the listed indices.
pub fn projector_from_subset(dim: usize, indices: &[usize]) -> Result<ComplexMatrix, LinalgError> {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for &i in indices {
        if i >= dim {
            return Err(LinalgError::IndexOutOfRange { index: i, dim });
        }
        m.set(i, i, Complex64::ONE);
    }
    Ok(m)
}

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::ZERO; dim],
        }
    }

    /// Standard basis vector `|i⟩`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Self::zeros(dim);
        v.data[i] = Complex64::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: Complex64) {
        self.data[i] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    /// The rank-one operator `|self⟩⟨self|`.
    pub fn outer_self(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.data[i] * self.data[j].conj());
            }
        }
        m
    }
}

/// Eigenvalues of a Hermitian matrix by the cyclic Jacobi method,
/// ascending. The input is symmetrized first, so tiny Hermiticity
/// violations are tolerated; a genuinely non-Hermitian input gives
/// eigenvalues of its Hermitian part.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    // Hermitian part (A + A†)/2.
    let mut a = m.add(&m.dagger()).scale(Complex64::new(0.5, 0.0));
    let scale = 1.0 + a.frobenius_norm();

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a.get(p, q);
                let abs_z = z.norm();
                if abs_z <= 1e-300 {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let phase = z / abs_z;
                let tau = (beta - alpha) / (2.0 * abs_z);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // A <- U† A U with U[p,p]=c, U[p,q]=s, U[q,p]=-s̄, U[q,q]=c.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * c - aiq * s.conj());
                    a.set(i, q, aip * s + aiq * c);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * c - aqj * s);
                    a.set(q, j, apj * s.conj() + aqj * c);
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Density operator: Hermitian, positive semi-definite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validate the three density-operator invariants within `tol`
    /// (positive semi-definiteness allows eigenvalues down to `-tol`).
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(LinalgError::NotDensityOperator {
                reason: "non-finite entry".into(),
            });
        }
        if !matrix.is_hermitian(tol) {
            return Err(LinalgError::NotDensityOperator {
                reason: format!(
                    "not Hermitian, residual {:.1e}",
                    matrix.distance(&matrix.dagger())
                ),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(LinalgError::NotDensityOperator {
                reason: format!("trace is {:.6e}{:+.6e}i, expected 1", tr.re, tr.im),
            });
        }
        let eigs = hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = eigs.first() {
            if min < -tol {
                return Err(LinalgError::NotDensityOperator {
                    reason: format!("smallest eigenvalue {min:.6e} is negative"),
                });
            }
        }
        Ok(Self { matrix })
    }

    /// Wrap a matrix that is known to be a valid state, e.g. the output of
    /// a trace-preserving operation applied to a valid state.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Pure basis state `|i⟩⟨i|`.
    pub fn pure_basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        Self {
            matrix: ComplexMatrix::basis_outer(dim, i, i),
        }
    }

    /// Pure state `|ψ⟩⟨ψ|` from a normalized vector.
    pub fn from_pure(psi: &ComplexVector, tol: f64) -> Result<Self, LinalgError> {
        Self::new(psi.outer_self(), tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}
