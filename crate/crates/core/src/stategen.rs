//! Reproducible random generation of pure states, density matrices and
//! projectors for property testing.
//!
//! The generator algorithm is fixed here rather than delegated to a
//! platform default, so test corpora are reproducible across runs and
//! platforms:
//!
//! - **Stream**: SplitMix64. The state advances by the Weyl constant
//!   `0x9E3779B97F4A7C15` per draw and each output is the mixed counter
//!   (`xor`-shift/multiply finalizer with constants `0xBF58476D1CE4E5B9`
//!   and `0x94D049BB133111EB`).
//! - **Uniforms**: the top 53 bits of a draw, `(x >> 11) · 2⁻⁵³ ∈ [0, 1)`;
//!   the open-zero variant `((x >> 11) + 1) · 2⁻⁵³ ∈ (0, 1]` feeds the
//!   logarithm below.
//! - **Gaussians**: one Box–Muller pair per complex amplitude,
//!   `√(−2 ln u₁)·(cos 2πu₂, sin 2πu₂)`, scaled by `1/√2` so the complex
//!   amplitude has unit total variance.
//!
//! Splitting a seed feeds `(value, index)` through the same finalizer,
//! giving independent streams for parallel sampling.

use num_complex::Complex64 as C64;

use crate::bipartite::{BipartiteShape, PureState};
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize_columns, ComplexMatrix, HermitianOperator};

const WEYL: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator seed. Identical seed and parameters give bit-identical
/// output streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Seed {
    /// Derive an independent child stream for `index`.
    pub fn split(self, index: u64) -> Seed {
        Seed(mix64(self.0 ^ mix64(index.wrapping_add(WEYL))))
    }
}

/// The fixed counter-based generator (SplitMix64).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: Seed) -> Self {
        Self { state: seed.0 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(WEYL);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in `(0, 1]`, safe as a logarithm argument.
    #[inline]
    fn next_uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Box–Muller pair of independent standard real Gaussians.
    #[inline]
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_uniform_open_zero();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Standard complex Gaussian with unit total variance.
    #[inline]
    pub fn next_complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.next_gaussian_pair();
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Matrix of independent standard complex Gaussians, drawn row-major.
pub fn random_complex_gaussian(rows: usize, cols: usize, seed: Seed) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.next_complex_gaussian())
}

/// Haar-distributed pure state: Gaussian coefficients, normalized.
pub fn random_pure(shape: BipartiteShape, seed: Seed) -> PureState {
    let mut rng = SplitMix64::new(seed);
    loop {
        let g = ComplexMatrix::from_fn(shape.dim_left, shape.dim_right, |_, _| {
            rng.next_complex_gaussian()
        });
        let norm = g.frobenius_norm();
        if norm > 1e-150 {
            let coeff = g.scaled(C64::new(1.0 / norm, 0.0));
            return PureState::new(coeff).expect("normalized by construction");
        }
        // astronomically unlikely; draw again from the same stream
    }
}

/// Random density matrix `G G† / tr(G G†)` for a `d × rank` complex
/// Gaussian `G`; PSD, trace one, rank as requested (generically).
pub fn random_density(d: usize, rank: usize, seed: Seed) -> Result<HermitianOperator> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "density rank must lie in 1..={d}, got {rank}"
        )));
    }
    let g = random_complex_gaussian(d, rank, seed);
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..rank {
                s += g.get(i, k) * g.get(j, k).conj();
            }
            data[i * d + j] = s;
        }
    }
    let trace: f64 = (0..d).map(|i| data[i * d + i].re).sum();
    let rho = HermitianOperator::from_raw_unchecked(d, data);
    Ok(rho.scaled(1.0 / trace))
}

/// Haar-random rank-`m` orthogonal projector: orthonormalize `m` Gaussian
/// columns and return `Q Q†`.
pub fn random_projector(d: usize, m: usize, seed: Seed) -> Result<HermitianOperator> {
    if m == 0 || m > d {
        return Err(Error::InvalidParameter(format!(
            "projector rank must lie in 1..={d}, got {m}"
        )));
    }
    let g = random_complex_gaussian(d, m, seed);
    let q = orthonormalize_columns(&g)?;
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..m {
                s += q.get(i, k) * q.get(j, k).conj();
            }
            data[i * d + j] = s;
        }
    }
    Ok(HermitianOperator::from_raw_unchecked(d, data))
}

/// Haar-random unitary: QR of a square Gaussian matrix (the modified
/// Gram–Schmidt here produces a positive-diagonal R, which makes Q exactly
/// Haar).
pub fn random_unitary(d: usize, seed: Seed) -> Result<ComplexMatrix> {
    orthonormalize_columns(&random_complex_gaussian(d, d, seed))
}
