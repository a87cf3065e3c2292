//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Dimensions here are tiny (≤ 16), so everything is stored as flat
//! row-major `Vec<Complex>` and computed with straightforward loops.

use std::ops::{Add, Index, Mul, Sub};

use crate::{Complex, Error, Result};

/// Tolerance for the hermitian / idempotent / normalization checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Residual norm below which Gram-Schmidt declares a vector dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Default threshold for [`commute_check`].
pub const DEFAULT_COMMUTE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    entries: Vec<Complex>,
}

impl StateVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("state vector"));
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// Coordinate vector `e_{index}` (zero-based) in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut entries = vec![Complex::new(0.0, 0.0); dim];
        entries[index] = Complex::new(1.0, 0.0);
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= STRUCTURE_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(self.scaled(Complex::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, k: Complex) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    fn axpy(&mut self, k: Complex, x: &StateVector) {
        for (a, b) in self.entries.iter_mut().zip(&x.entries) {
            *a += k * b;
        }
    }
}

impl Index<usize> for StateVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Build from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty("matrix"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dims(dim, row.len())?;
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Diagonal projector onto the listed coordinates.
    pub fn coordinate_projector(dim: usize, coords: &[usize]) -> Self {
        let mut m = Self::zeros(dim);
        for &i in coords {
            m.entries[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &StateVector, v: &StateVector) -> Result<Self> {
        check_dims(u.dim(), v.dim())?;
        let dim = u.dim();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = u[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m.entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_dims(self.dim, v.dim())?;
        let d = self.dim;
        let entries = (0..d)
            .map(|i| (0..d).map(|j| self.entries[i * d + j] * v[j]).sum())
            .collect();
        Ok(StateVector { entries })
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex> {
        psi.inner(&self.apply(psi)?)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        let sq = self.matmul(self).expect("same matrix");
        self.is_hermitian(tol) && (&sq - self).max_abs() <= tol
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul<Complex> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: Complex) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(a, b))
    }
}

/// Orthogonal projector onto `span(basis)`.
///
/// Modified Gram-Schmidt with a second re-orthogonalization pass; a vector
/// whose residual falls below [`RANK_TOL`] (relative to its own norm) makes
/// the input rank deficient.
pub fn projector_onto(basis: &[StateVector]) -> Result<ComplexMatrix> {
    let first = basis.first().ok_or(Error::Empty("projector basis"))?;
    let dim = first.dim();
    let mut ortho: Vec<StateVector> = Vec::with_capacity(basis.len());
    for v in basis {
        check_dims(dim, v.dim())?;
        let scale = v.norm();
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &ortho {
                let k = q.inner(&w)?;
                w.axpy(-k, q);
            }
        }
        let residual = w.norm();
        if scale == 0.0 || residual <= RANK_TOL * scale {
            return Err(Error::RankDeficient(residual));
        }
        ortho.push(w.scaled(Complex::new(1.0 / residual, 0.0)));
    }
    let mut p = ComplexMatrix::zeros(dim);
    for q in &ortho {
        p = &p + &ComplexMatrix::outer(q, q)?;
    }
    Ok(p)
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

/// Returns `(‖[A,B]‖_max ≤ tol, ‖[A,B]‖_max)`.
pub fn commute_check(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<(bool, f64)> {
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "> 0",
        });
    }
    let norm = commutator(a, b)?.max_abs();
    Ok((norm <= tol, norm))
}

/// Both sides of the Robertson relation `ΔA·ΔB ≥ ½|⟨[A,B]⟩|`.
///
/// Returns `(ΔA·ΔB, ½|⟨ψ|[A,B]|ψ⟩|)` without asserting any ordering.
pub fn uncertainty_product(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    psi: &StateVector,
) -> Result<(f64, f64)> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), psi.dim())?;
    for m in [a, b] {
        let defect = m.hermitian_defect();
        if defect > STRUCTURE_TOL {
            return Err(Error::NotHermitian(defect));
        }
    }
    if !psi.is_normalized() {
        return Err(Error::NotNormalized(psi.norm_sqr()));
    }
    let spread = |m: &ComplexMatrix| -> Result<f64> {
        let mean = m.expectation(psi)?.re;
        let second = m.matmul(m)?.expectation(psi)?.re;
        Ok((second - mean * mean).max(0.0).sqrt())
    };
    let lhs = spread(a)? * spread(b)?;
    let rhs = 0.5 * commutator(a, b)?.expectation(psi)?.norm();
    Ok((lhs, rhs))
}
