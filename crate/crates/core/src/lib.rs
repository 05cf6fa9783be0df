//! Separability analysis for bipartite quantum states.
//!
//! The crate decides separability/entanglement questions for (unnormalized)
//! density matrices of an `M ⊗ N` system using exact separable-ball results:
//!
//! - sufficient spectral criteria (scaling score, purity bound, Frobenius
//!   ball, spectral p-norm balls around the identity),
//! - the necessary positive-partial-transpose (PPT) test,
//! - constructive separable decompositions of positive semidefinite block
//!   Toeplitz matrices,
//! - extremal witnesses and thresholds that realize the tightness of the
//!   ball radii.
//!
//! All linear algebra is dense complex `f64`, self-contained, and aimed at
//! the small dimensions (up to a few hundred) where these questions are
//! usually asked.
//!
//! ```
//! use sepball_core::bipartite::maximally_entangled;
//! use sepball_core::criteria::{analyze, Verdict};
//! use sepball_core::{BipartiteShape, HermitianOperator};
//!
//! // a Bell state is entangled: its partial transpose has eigenvalue −1/2
//! let shape = BipartiteShape::square(2)?;
//! let rho = maximally_entangled(2).density();
//! let report = analyze(&rho, shape, 1e-9)?;
//! assert_eq!(report.verdict, Verdict::Entangled);
//! assert!((report.ppt_min_eig + 0.5).abs() < 1e-12);
//!
//! // mixed with enough identity it falls inside the separable ball
//! let sigma = rho.scaled(0.25).plus(&HermitianOperator::identity(4).scaled(0.75 / 4.0))?;
//! assert_eq!(analyze(&sigma, shape, 1e-9)?.verdict, Verdict::Separable);
//! # Ok::<(), sepball_core::Error>(())
//! ```

pub mod bipartite;
pub mod criteria;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod stategen;
pub mod toeplitz;

pub use bipartite::{BipartiteShape, PureState, SchmidtData};
pub use criteria::{CriterionReport, Verdict};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, PNorm, Spectrum};
pub use stategen::Seed;
pub use toeplitz::{BlockToeplitz, SeparableDecomposition};
