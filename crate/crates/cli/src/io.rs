//! File formats: matrix files, report envelopes and decomposition files.
//!
//! A matrix file is a single UTF-8 JSON object with complex entries as
//! `[re, im]` pairs in row-major order. serde_json prints floats with
//! shortest-round-trip decimals, so writing and re-reading is bit-exact.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sepball_core::criteria::CriterionReport;
use sepball_core::linalg::ComplexMatrix;
use sepball_core::toeplitz::SeparableDecomposition;
use sepball_core::BipartiteShape;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    /// (rows, cols)
    pub dims: (usize, usize),
    /// row-major `[re, im]` pairs
    pub data: Vec<(f64, f64)>,
    /// optional bipartite split (M, N) with M·N = rows = cols
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shape: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(
        m: &ComplexMatrix,
        shape: Option<BipartiteShape>,
        label: Option<String>,
    ) -> Self {
        Self {
            dims: (m.rows(), m.cols()),
            data: m.data().iter().map(|z| (z.re, z.im)).collect(),
            shape: shape.map(|s| (s.dim_left, s.dim_right)),
            label,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let (rows, cols) = self.dims;
        if self.data.len() != rows * cols {
            return Err(CliError::Input(format!(
                "matrix file has {} entries, dims say {}x{}",
                self.data.len(),
                rows,
                cols
            )));
        }
        let data: Vec<C64> = self.data.iter().map(|&(re, im)| C64::new(re, im)).collect();
        ComplexMatrix::new(rows, cols, data).map_err(CliError::from)
    }

    pub fn embedded_shape(&self) -> Result<Option<BipartiteShape>, CliError> {
        match self.shape {
            None => Ok(None),
            Some((m, n)) => {
                let shape = BipartiteShape::new(m, n).map_err(CliError::from)?;
                if self.dims.0 != self.dims.1 || shape.total() != self.dims.0 {
                    return Err(CliError::Input(format!(
                        "embedded shape {m}x{n} does not match matrix dims {}x{}",
                        self.dims.0, self.dims.1
                    )));
                }
                Ok(Some(shape))
            }
        }
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, String), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let file: MatrixFile = serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
        Ok((file, sha256_hex(&bytes)))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Input(format!("serialization failure: {e}")))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}

/// Report envelope around a [`CriterionReport`].
#[derive(Serialize)]
pub struct ReportFile<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub input_digest: &'a str,
    pub tol: f64,
    #[serde(flatten)]
    pub report: &'a CriterionReport,
}

/// Decomposition output: the `(Z_i, L_i)` vector pairs plus the measured
/// reconstruction residual.
#[derive(Serialize)]
pub struct DecompositionFile<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub block_count: usize,
    pub block_dim: usize,
    pub residual: f64,
    pub terms: Vec<TermOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'a str>,
}

#[derive(Serialize)]
pub struct TermOut {
    pub z: Vec<(f64, f64)>,
    pub l: Vec<(f64, f64)>,
}

impl<'a> DecompositionFile<'a> {
    pub fn new(dec: &SeparableDecomposition, residual: f64, label: Option<&'a str>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            block_count: dec.block_count,
            block_dim: dec.block_dim,
            residual,
            terms: dec
                .terms
                .iter()
                .map(|t| TermOut {
                    z: t.z.iter().map(|z| (z.re, z.im)).collect(),
                    l: t.l.iter().map(|z| (z.re, z.im)).collect(),
                })
                .collect(),
            label,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Fixed 9-significant-digit formatting for text tables.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mut exp = x.abs().log10().floor() as i32;
    // rounding to 9 significant digits may carry into the next decade
    // (e.g. 0.99999999996 prints as 1.00000000)
    let scaled = x.abs() / 10f64.powi(exp);
    if (scaled * 1e8).round() >= 1e9 {
        exp += 1;
    }
    if !(-4..9).contains(&exp) {
        format!("{x:.8e}")
    } else {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    }
}
