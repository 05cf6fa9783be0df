//! Dense complex linear algebra kernels.
//!
//! Everything here is plain `Vec<Complex64>` row-major storage with Jacobi
//! style decompositions, which are accurate and entirely deterministic at
//! the dimensions this crate targets. Spectral p-norms, PSD checks and the
//! block-norm compression used by the separability arguments all sit on
//! top of the two decompositions ([`hermitian_eigensystem`] and [`svd`]).

mod eigen;
mod svd;

pub use eigen::{
    hermitian_eigensystem, hermitian_eigenvalues, unitary_eigensystem, Eigensystem,
    UnitaryEigensystem,
};
pub use svd::{orthonormalize_columns, singular_values, svd, Svd};
pub(crate) use svd::{polar_unitary as svd_polar_unitary, pseudoinverse as svd_pseudoinverse};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance for accepting a matrix as Hermitian.
///
/// Inputs within `TOL_HERM_REL * max(1, |entry|_max)` of conjugate symmetry
/// are symmetrized; anything worse is rejected so that caller bugs do not
/// get silently averaged away.
pub const TOL_HERM_REL: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build from row-major entries, rejecting NaN/Inf and length mismatches.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "entry count {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidShape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product, left factor indexing the coarse blocks.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            let (bi, ri) = (i / other.rows, i % other.rows);
            let (bj, rj) = (j / other.cols, j % other.cols);
            self.get(bi, bj) * other.get(ri, rj)
        })
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidShape(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Hermitian matrix; construction symmetrizes small asymmetries and rejects
/// large ones, so a value of this type always satisfies `A = A†` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    data: Vec<C64>,
}

impl HermitianOperator {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        let m = ComplexMatrix::new(dim, dim, entries)?;
        Self::from_matrix(&m)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidShape(format!(
                "hermitian operator must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let dim = m.rows();
        let tol = TOL_HERM_REL * f64::max(1.0, m.max_abs_entry());
        let mut violation: f64 = 0.0;
        for i in 0..dim {
            violation = violation.max(m.get(i, i).im.abs());
            for j in (i + 1)..dim {
                violation = violation.max((m.get(i, j) - m.get(j, i).conj()).norm());
            }
        }
        if violation > tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: max |A - A†| entry {violation:e} exceeds tolerance {tol:e}"
            )));
        }
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(m.get(i, i).re, 0.0);
            for j in (i + 1)..dim {
                let avg = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                data[i * dim + j] = avg;
                data[j * dim + i] = avg.conj();
            }
        }
        Ok(Self { dim, data })
    }

    /// Constructor for matrices that are Hermitian by construction
    /// (partial transposes, projectors, real-linear combinations).
    pub(crate) fn from_raw_unchecked(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        debug_assert!((0..dim).all(|i| {
            (0..dim).all(|j| (data[i * dim + j] - data[j * dim + i].conj()).norm() == 0.0)
        }));
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim,
            cols: self.dim,
            data: self.data.clone(),
        }
    }

    /// Real scalar multiple (stays Hermitian exactly).
    pub fn scaled(&self, r: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * r).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self + r·I`.
    pub fn shifted(&self, r: f64) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.dim {
            data[i * self.dim + i] += r;
        }
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::InvalidShape(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

/// Real eigenvalues in nondecreasing order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the values; ties keep their original relative order.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        f64::max(self.min().abs(), self.max().abs())
    }

    /// l_p norm of the eigenvalue vector; `p = ∞` is the largest modulus.
    pub fn p_norm(&self, p: PNorm) -> f64 {
        let pp = match p {
            PNorm::Infinity => return self.max_abs(),
            PNorm::Finite(pp) => pp,
        };
        if pp == 1.0 {
            self.0.iter().map(|x| x.abs()).sum()
        } else if pp == 2.0 {
            self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
        } else {
            let m = self.max_abs();
            if m == 0.0 {
                return 0.0;
            }
            let sum: f64 = self.0.iter().map(|x| (x.abs() / m).powf(pp)).sum();
            m * sum.powf(1.0 / pp)
        }
    }
}

/// p-norm exponent with a distinguished infinity, never a large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub const ONE: PNorm = PNorm::Finite(1.0);
    pub const TWO: PNorm = PNorm::Finite(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "p-norm exponent must satisfy p >= 1, got {p}"
            )));
        }
        if p.is_infinite() {
            Ok(PNorm::Infinity)
        } else {
            Ok(PNorm::Finite(p))
        }
    }

    /// Exponent as a float, `f64::INFINITY` for the sentinel.
    pub fn exponent(&self) -> f64 {
        match self {
            PNorm::Finite(p) => *p,
            PNorm::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PNorm::Infinity)
    }
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::Infinity => write!(f, "inf"),
            PNorm::Finite(p) if p.fract() == 0.0 && p.abs() < 1e15 => {
                write!(f, "{}", *p as i64)
            }
            PNorm::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Result of [`psd_check`].
#[derive(Clone, Copy, Debug)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eig: f64,
}

/// Spectral l_p norm of a Hermitian matrix, computed from its eigenvalues.
pub fn spectral_p_norm(h: &HermitianOperator, p: PNorm) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?.p_norm(p))
}

/// Positive-semidefiniteness gate: `min eigenvalue >= -tol * max(1, ||H||_∞)`.
pub fn psd_check(h: &HermitianOperator, tol: f64) -> Result<PsdCheck> {
    let spectrum = hermitian_eigenvalues(h)?;
    let scale = f64::max(1.0, spectrum.max_abs());
    let min_eig = spectrum.min();
    Ok(PsdCheck {
        is_psd: min_eig >= -tol * scale,
        min_eig,
    })
}

/// Matrix of operator norms of the blocks of `a`, each block
/// `block_rows x block_cols`. The result is real-valued (stored as complex).
pub fn block_norm_compression(
    a: &ComplexMatrix,
    block_rows: usize,
    block_cols: usize,
) -> Result<ComplexMatrix> {
    if block_rows == 0 || block_cols == 0 {
        return Err(Error::InvalidShape(
            "block dimensions must be positive".into(),
        ));
    }
    if !a.rows().is_multiple_of(block_rows) || !a.cols().is_multiple_of(block_cols) {
        return Err(Error::InvalidShape(format!(
            "{}x{} matrix is not divisible into {}x{} blocks",
            a.rows(),
            a.cols(),
            block_rows,
            block_cols
        )));
    }
    let grid_rows = a.rows() / block_rows;
    let grid_cols = a.cols() / block_cols;
    let mut out = ComplexMatrix::zeros(grid_rows, grid_cols);
    for bi in 0..grid_rows {
        for bj in 0..grid_cols {
            let block = ComplexMatrix::from_fn(block_rows, block_cols, |i, j| {
                a.get(bi * block_rows + i, bj * block_cols + j)
            });
            let norm = operator_norm(&block)?;
            out.set(bi, bj, C64::new(norm, 0.0));
        }
    }
    Ok(out)
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}
