//! Bipartite structure: partial transpose, Schmidt decomposition, the
//! maximally entangled state and the swap operator.
//!
//! An `M ⊗ N` operator is an `M × M` block matrix with `N × N` blocks; the
//! composite index of `e_i ⊗ e_j` is `i·N + j` (left factor picks the
//! block). The partial transpose acts on the right (`N`-dimensional)
//! factor, i.e. transposes each block in place; the left-factor variant is
//! the composition with a full transpose.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, HermitianOperator, Spectrum};

/// Tolerance for state normalization (`‖ψ‖ = 1`, Schmidt squares summing
/// to one). Loose enough for file-ingested data.
pub const TOL_NORM: f64 = 1e-8;

/// Subsystem dimensions `(M, N)` of a bipartite system; the total
/// dimension is `M·N`. The left factor indexes blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteShape {
    pub dim_left: usize,
    pub dim_right: usize,
}

impl BipartiteShape {
    pub fn new(dim_left: usize, dim_right: usize) -> Result<Self> {
        if dim_left == 0 || dim_right == 0 {
            return Err(Error::InvalidShape(
                "subsystem dimensions must be at least 1".into(),
            ));
        }
        Ok(Self {
            dim_left,
            dim_right,
        })
    }

    /// Square `N ⊗ N` shape.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn total(&self) -> usize {
        self.dim_left * self.dim_right
    }

    pub fn check_operator(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::InvalidShape(format!(
                "operator dimension {} does not match {}⊗{} (total {})",
                dim,
                self.dim_left,
                self.dim_right,
                self.total()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.dim_left, self.dim_right)
    }
}

/// Normalized pure state with coefficient matrix `ψ` (`M × N`), i.e.
/// `|ψ⟩ = Σ ψ_ij e_i ⊗ e_j`.
#[derive(Clone, Debug)]
pub struct PureState {
    shape: BipartiteShape,
    coefficients: ComplexMatrix,
}

impl PureState {
    pub fn new(coefficients: ComplexMatrix) -> Result<Self> {
        let shape = BipartiteShape::new(coefficients.rows(), coefficients.cols())?;
        let norm = coefficients.frobenius_norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::InvalidInput(format!(
                "pure state is not normalized: ||ψ|| = {norm}"
            )));
        }
        Ok(Self {
            shape,
            coefficients,
        })
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    /// Density matrix `ψψ†` on the composite space.
    pub fn density(&self) -> HermitianOperator {
        let d = self.shape.total();
        let n = self.shape.dim_right;
        let amp = |k: usize| self.coefficients.get(k / n, k % n);
        let data: Vec<C64> = (0..d * d)
            .map(|idx| amp(idx / d) * amp(idx % d).conj())
            .collect();
        HermitianOperator::from_raw_unchecked(d, data)
    }
}

/// Schmidt data of a pure state: nonincreasing values `d_1 ≥ … ≥ d_k ≥ 0`
/// with `Σ d_i² = 1`, plus the local unitaries,
/// `ψ = left · diag(d) · right†`.
#[derive(Clone, Debug)]
pub struct SchmidtData {
    pub values: Vec<f64>,
    pub left_unitary: ComplexMatrix,
    pub right_unitary: ComplexMatrix,
}

/// Schmidt (singular value) decomposition of a pure state's coefficient
/// matrix. Works for rectangular `ψ` (M ≠ N) as well.
pub fn schmidt(psi: &PureState) -> Result<SchmidtData> {
    let s = svd(psi.coefficients())?;
    Ok(SchmidtData {
        values: s.values,
        left_unitary: s.u,
        right_unitary: s.v,
    })
}

/// Partial transpose: each `N × N` block is transposed in place.
///
/// A pure entry permutation fixing the diagonal: an exact involution that
/// preserves the trace exactly and the Frobenius norm to rounding.
pub fn partial_transpose(
    a: &HermitianOperator,
    shape: BipartiteShape,
) -> Result<HermitianOperator> {
    shape.check_operator(a.dim())?;
    let d = a.dim();
    let n = shape.dim_right;
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for row in 0..d {
        let (bi, k) = (row / n, row % n);
        for col in 0..d {
            let (bj, l) = (col / n, col % n);
            // block (bi, bj): entry (k, l) <- entry (l, k)
            data[row * d + col] = a.get(bi * n + l, bj * n + k);
        }
    }
    Ok(HermitianOperator::from_raw_unchecked(d, data))
}

/// Closed-form spectrum of the partial transpose of a pure `N ⊗ N` state
/// with Schmidt values `d_i`: the multiset `{d_i²} ∪ {±d_i d_j : i < j}`,
/// returned sorted, length `N²`.
pub fn pure_pt_spectrum(schmidt_values: &[f64]) -> Result<Spectrum> {
    validate_schmidt_values(schmidt_values)?;
    let n = schmidt_values.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(schmidt_values[i] * schmidt_values[i]);
        for j in (i + 1)..n {
            let prod = schmidt_values[i] * schmidt_values[j];
            out.push(prod);
            out.push(-prod);
        }
    }
    Ok(Spectrum::new(out))
}

pub(crate) fn validate_schmidt_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidInput("empty Schmidt value list".into()));
    }
    if values.iter().any(|&v| !v.is_finite() || v < -1e-12) {
        return Err(Error::InvalidInput(
            "Schmidt values must be nonnegative".into(),
        ));
    }
    let sq: f64 = values.iter().map(|v| v * v).sum();
    if (sq - 1.0).abs() > TOL_NORM {
        return Err(Error::InvalidInput(format!(
            "Schmidt values are not normalized: Σ d_i² = {sq}"
        )));
    }
    Ok(())
}

/// The fully entangled pure state on `N ⊗ N`: coefficient matrix `I/√N`.
pub fn maximally_entangled(n: usize) -> PureState {
    let coeff = ComplexMatrix::identity(n).scaled(C64::new(1.0 / (n as f64).sqrt(), 0.0));
    PureState::new(coeff).expect("identity/√N is normalized")
}

/// Swap operator on `N ⊗ N`: `S[(i,j),(k,l)] = δ_il δ_jk`.
///
/// Equals `N` times the partial transpose of the maximally entangled
/// state's density matrix; eigenvalues are ±1 and `S² = I`.
pub fn swap_operator(n: usize) -> HermitianOperator {
    let d = n * n;
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..n {
        for j in 0..n {
            // S (e_j ⊗ e_i) = e_i ⊗ e_j
            data[(i * n + j) * d + (j * n + i)] = C64::new(1.0, 0.0);
        }
    }
    HermitianOperator::from_raw_unchecked(d, data)
}
