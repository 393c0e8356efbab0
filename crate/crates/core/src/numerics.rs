//! Dense complex linear algebra for the small systems that show up in
//! multi-user precoding: matrices are at most a few dozen rows, so everything
//! here is plain row-major storage with direct factorizations.
//!
//! The kernels are:
//!
//! - [`Cholesky`] / [`hpd_solve`]: Hermitian positive-definite solves.
//! - [`rank_one_update_solve`]: `(A + x xᴴ)⁻¹ x` from a solver for `A` alone,
//!   using the Sherman-Morrison identity
//!   `(A + x xᴴ)⁻¹ x = A⁻¹x / (1 + xᴴA⁻¹x)`.
//! - [`dominant_eigvec`]: power iteration on a linear operator given as a
//!   closure.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Largest tolerated `|A_ij - conj(A_ji)|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// A Cholesky pivot at or below `PIVOT_RTOL * trace(A) / n` is treated as singular.
pub const PIVOT_RTOL: f64 = 1e-14;
/// Guard on `|1 + xᴴA⁻¹x|` in [`rank_one_update_solve`].
pub const DEGENERATE_UPDATE_TOL: f64 = 1e-14;
/// `‖M·start‖` at or below this makes [`dominant_eigvec`] report a zero operator.
pub const ZERO_OPERATOR_TOL: f64 = 1e-300;
/// Default residual tolerance for [`dominant_eigvec`].
pub const DEFAULT_EIG_TOL: f64 = 1e-12;
/// Default iteration cap for [`dominant_eigvec`].
pub const DEFAULT_EIG_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("matrix is not Hermitian: |A[{row},{col}] - conj(A[{col},{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("matrix is not positive definite: pivot {pivot:e} at step {step}")]
    NotPositiveDefinite { step: usize, pivot: f64 },
    #[error("degenerate rank-one update: |1 + x^H A^-1 x| = {0:e}")]
    DegenerateUpdate(f64),
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("operator maps the start vector to zero")]
    ZeroOperator,
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
}

/// Dense complex column vector.
#[derive(Clone, PartialEq, Default)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    /// Builds a vector and rejects NaN/Inf entries.
    pub fn try_new(entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if let Some(pos) = entries.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite(pos));
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `e_index` of length `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `selfᴴ · other` (conjugate-linear in `self`).
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    /// Returns `self / ‖self‖` together with `‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<(ComplexVector, f64)> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some((self.scale_real(1.0 / n), n))
        } else {
            None
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(s, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, checking length and finiteness.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite(pos));
        }
        Ok(Self { rows, cols, data })
    }

    /// Stacks the given vectors as columns. All columns must share `rows`.
    pub fn from_columns(rows: usize, columns: &[ComplexVector]) -> Result<Self, LinalgError> {
        for c in columns {
            if c.dim() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: c.dim(),
                });
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = ComplexVector> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    /// Copy with column `skip` removed, remaining columns in their original order.
    pub fn without_column(&self, skip: usize) -> ComplexMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != skip).collect();
        Self::from_fn(self.rows, keep.len(), |i, j| self[(i, keep[j])])
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector, LinalgError> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `selfᴴ · v`, without materializing the adjoint.
    pub fn adjoint_mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector, LinalgError> {
        if v.dim() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: v.dim(),
            });
        }
        Ok((0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].conj() * v[i]).sum())
            .collect())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|l| self[(i, l)] * other[(l, j)]).sum()
        }))
    }

    /// `shift·I + self·selfᴴ`, built exactly Hermitian (upper triangle mirrored).
    pub fn outer_gram(&self, shift: f64) -> ComplexMatrix {
        let n = self.rows;
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = (0..self.cols)
                    .map(|l| self[(i, l)] * self[(j, l)].conj())
                    .sum();
                if i == j {
                    g[(i, i)] = Complex64::new(s.re + shift, 0.0);
                } else {
                    g[(i, j)] = s;
                    g[(j, i)] = s.conj();
                }
            }
        }
        g
    }

    /// `shift·I + selfᴴ·self`, built exactly Hermitian.
    pub fn inner_gram(&self, shift: f64) -> ComplexMatrix {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = (0..self.rows)
                    .map(|l| self[(l, i)].conj() * self[(l, j)])
                    .sum();
                if i == j {
                    g[(i, i)] = Complex64::new(s.re + shift, 0.0);
                } else {
                    g[(i, j)] = s;
                    g[(j, i)] = s.conj();
                }
            }
        }
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower-triangular Cholesky factor `A = L·Lᴴ` of a Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: ComplexMatrix,
}

impl Cholesky {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if n == 0 {
            return Err(LinalgError::InvalidDimension(0));
        }
        if let Some(pos) = a.as_slice().iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite(pos));
        }
        for i in 0..n {
            for j in i..n {
                let deviation = (a[(i, j)] - a[(j, i)].conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(LinalgError::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }

        let pivot_floor = PIVOT_RTOL * a.trace().re / n as f64;
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for p in 0..j {
                d -= l[(j, p)].norm_sqr();
            }
            if !(d > pivot_floor) || d <= 0.0 {
                return Err(LinalgError::NotPositiveDefinite { step: j, pivot: d });
            }
            let ljj = d.sqrt();
            l[(j, j)] = Complex64::new(ljj, 0.0);
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for p in 0..j {
                    s -= l[(i, p)] * l[(j, p)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    pub fn factor_l(&self) -> &ComplexMatrix {
        &self.l
    }

    /// Solves `A·x = b` by forward then backward substitution.
    pub fn solve(&self, b: &ComplexVector) -> Result<ComplexVector, LinalgError> {
        let n = self.dim();
        if b.dim() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        let l = &self.l;
        let mut y = b.clone();
        for i in 0..n {
            let mut s = y[i];
            for p in 0..i {
                s -= l[(i, p)] * y[p];
            }
            y[i] = s / l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for p in i + 1..n {
                s -= l[(p, i)].conj() * y[p];
            }
            y[i] = s / l[(i, i)].re;
        }
        Ok(y)
    }

    /// Full inverse `A⁻¹`, assembled column by column.
    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.dim();
        let cols: Vec<ComplexVector> = (0..n)
            .map(|j| {
                self.solve(&ComplexVector::basis(n, j))
                    .expect("basis vector has factor dimension")
            })
            .collect();
        ComplexMatrix::from_columns(n, &cols).expect("columns have factor dimension")
    }
}

/// Solves `A·x = b` for Hermitian positive-definite `A`.
pub fn hpd_solve(a: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector, LinalgError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    Cholesky::factor(a)?.solve(b)
}

/// Result of [`rank_one_update_solve`].
#[derive(Debug, Clone)]
pub struct RankOneSolve {
    /// `(A + x xᴴ)⁻¹ x`.
    pub y: ComplexVector,
    /// `1 / (1 + xᴴA⁻¹x)`; `y = scale · A⁻¹x`.
    pub scale: f64,
}

/// Computes `(A + x xᴴ)⁻¹ x` given only a solver for `A`.
///
/// The result is `A⁻¹x` times the positive real factor `1 / (1 + xᴴA⁻¹x)`,
/// so `y` and `solve_a(x)` are collinear by construction. For Hermitian
/// positive-definite `A` the quadratic form is real and positive; only the
/// real part of `1 + xᴴA⁻¹x` is used.
pub fn rank_one_update_solve<F>(solve_a: F, x: &ComplexVector) -> Result<RankOneSolve, LinalgError>
where
    F: FnOnce(&ComplexVector) -> Result<ComplexVector, LinalgError>,
{
    let z = solve_a(x)?;
    if z.dim() != x.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: x.dim(),
            found: z.dim(),
        });
    }
    let denom = Complex64::new(1.0, 0.0) + x.dot(&z);
    if denom.norm() <= DEGENERATE_UPDATE_TOL {
        return Err(LinalgError::DegenerateUpdate(denom.norm()));
    }
    let scale = 1.0 / denom.re;
    Ok(RankOneSolve {
        y: z.scale_real(scale),
        scale,
    })
}

/// Dominant eigenpair from [`dominant_eigvec`].
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub vector: ComplexVector,
    pub value: Complex64,
    pub iterations: usize,
}

/// Power iteration for the eigenpair of largest modulus of the operator `apply`.
///
/// Returns a unit vector `v` and its Rayleigh quotient `λ = vᴴMv` once
/// `‖Mv − λv‖ ≤ tol·|λ|`. The start vector needs a nonzero component along
/// the dominant eigenvector. A rank-one operator `u·bᴴ` converges after a
/// single application.
pub fn dominant_eigvec<F>(
    mut apply: F,
    dim: usize,
    start: &ComplexVector,
    tol: f64,
    max_iter: usize,
) -> Result<Eigenpair, LinalgError>
where
    F: FnMut(&ComplexVector) -> ComplexVector,
{
    if dim == 0 {
        return Err(LinalgError::InvalidDimension(0));
    }
    if start.dim() != dim {
        return Err(LinalgError::DimensionMismatch {
            expected: dim,
            found: start.dim(),
        });
    }
    let (mut v, _) = start.normalized().ok_or(LinalgError::ZeroOperator)?;

    for iteration in 0..=max_iter {
        let mv = apply(&v);
        if mv.dim() != dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: mv.dim(),
            });
        }
        let mv_norm = mv.norm();
        if mv_norm <= ZERO_OPERATOR_TOL {
            return Err(LinalgError::ZeroOperator);
        }
        let value = v.dot(&mv);
        let residual = mv.sub(&v.scale(value)).norm();
        if residual <= tol * value.norm() {
            return Ok(Eigenpair {
                vector: v,
                value,
                iterations: iteration,
            });
        }
        if iteration == max_iter {
            break;
        }
        v = mv.scale_real(1.0 / mv_norm);
    }
    Err(LinalgError::NoConvergence(max_iter))
}
