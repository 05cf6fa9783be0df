//! The separability decision engine.
//!
//! Sufficient criteria (any one passing proves separability):
//!
//! - scaling score `S(λ) = d − ‖λ‖₁²/‖λ‖₂² ≤ 1`,
//! - purity `tr ρ² ≤ 1/(d−1)` of the normalized matrix,
//! - Frobenius distance `‖ρ − I/d‖₂ ≤ 1/√(d(d−1))` of the normalized matrix,
//! - spectral p-balls around the identity: `‖A − I‖_p` within the exact
//!   largest separable radius.
//!
//! The partial-transpose (PPT) test is necessary: failing it proves
//! entanglement. [`analyze`] aggregates everything into a tri-state
//! verdict. A failed sufficient criterion proves nothing (the spectral
//! conditions are not necessary), so the verdict never claims
//! entanglement from those.

use serde::Serialize;

use crate::bipartite::{partial_transpose, BipartiteShape, TOL_NORM};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_check, HermitianOperator, PNorm, Spectrum};

/// Default relative tolerance for all pass/fail margins. Boundary cases
/// within the tolerance count as passing for sufficient criteria and as
/// PPT-holding for the necessary one, so "entangled" verdicts are always
/// trustworthy.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tri-state separability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Separable,
    Entangled,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Separable => write!(f, "separable"),
            Verdict::Entangled => write!(f, "entangled"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One p-ball membership entry of a report.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PballMargin {
    pub p: PNorm,
    pub deviation: f64,
    pub radius: f64,
    pub passes: bool,
}

/// Everything [`analyze`] measured, plus the verdict and which criteria
/// produced it.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub shape: BipartiteShape,
    pub trace: f64,
    /// `S(λ)` of the input spectrum (scale invariant).
    pub scaling_score: f64,
    /// `tr ρ²` of the trace-normalized input.
    pub purity: f64,
    /// `‖ρ − I/d‖₂` of the trace-normalized input.
    pub frobenius_distance: f64,
    /// `‖A − I‖_p` against the exact ball radius, for p ∈ {1, 2, ∞}.
    pub pball_margins: Vec<PballMargin>,
    /// Smallest eigenvalue of the partial transpose.
    pub ppt_min_eig: f64,
    pub verdict: Verdict,
    /// Names of the passing sufficient criteria, or `["ppt"]` when the
    /// necessary criterion failed.
    pub triggered_by: Vec<String>,
}

/// Scaling score `S(λ) = d − ‖λ‖₁²/‖λ‖₂²`.
///
/// Equals `min_{a>0} ‖aλ − e‖₂²`; at most 1 means separable. Requires a
/// PSD spectrum that is not identically zero.
pub fn scaling_score(spectrum: &Spectrum) -> Result<f64> {
    scaling_score_with_tol(spectrum, DEFAULT_TOL)
}

pub fn scaling_score_with_tol(spectrum: &Spectrum, tol: f64) -> Result<f64> {
    let scale = spectrum.max_abs();
    if spectrum.min() < -tol * f64::max(1.0, scale) {
        return Err(Error::NotPsd {
            min_eig: spectrum.min(),
        });
    }
    let l1: f64 = spectrum.values().iter().map(|x| x.abs()).sum();
    let l2_sq: f64 = spectrum.values().iter().map(|x| x * x).sum();
    if l2_sq == 0.0 {
        return Err(Error::InvalidInput(
            "scaling score of the zero spectrum".into(),
        ));
    }
    Ok(spectrum.len() as f64 - l1 * l1 / l2_sq)
}

/// Result of one sufficient criterion with its measured value.
#[derive(Clone, Copy, Debug)]
pub struct CriterionOutcome {
    pub value: f64,
    pub passes: bool,
}

/// Purity test on a normalized density matrix: separable if
/// `tr ρ² ≤ 1/(d−1)`.
pub fn purity_test(rho: &HermitianOperator, shape: BipartiteShape) -> Result<CriterionOutcome> {
    purity_test_with_tol(rho, shape, DEFAULT_TOL)
}

pub fn purity_test_with_tol(
    rho: &HermitianOperator,
    shape: BipartiteShape,
    tol: f64,
) -> Result<CriterionOutcome> {
    let spectrum = normalized_state_spectrum(rho, shape, tol)?;
    Ok(purity_outcome(&spectrum, shape.total(), tol))
}

/// Frobenius-ball test on a normalized density matrix: separable if
/// `‖ρ − I/d‖₂ ≤ 1/√(d(d−1))`.
pub fn frobenius_ball_test(
    rho: &HermitianOperator,
    shape: BipartiteShape,
) -> Result<CriterionOutcome> {
    frobenius_ball_test_with_tol(rho, shape, DEFAULT_TOL)
}

pub fn frobenius_ball_test_with_tol(
    rho: &HermitianOperator,
    shape: BipartiteShape,
    tol: f64,
) -> Result<CriterionOutcome> {
    let spectrum = normalized_state_spectrum(rho, shape, tol)?;
    Ok(frobenius_outcome(&spectrum, shape.total(), tol))
}

/// Membership of `A` in the separable p-ball around the identity:
/// `‖A − I‖_p` against radius 1 for `p ≤ 2` and `d^{1/p − 1/2}` for
/// `p ≥ 2` (which is the exact `N^{2/p−1}` when `M = N`; for `M ≠ N` the
/// same norm-inequality chain gives the bound but tightness is only
/// claimed for square systems).
pub fn pball_membership(
    a: &HermitianOperator,
    p: PNorm,
    shape: BipartiteShape,
) -> Result<PballMargin> {
    pball_membership_with_tol(a, p, shape, DEFAULT_TOL)
}

pub fn pball_membership_with_tol(
    a: &HermitianOperator,
    p: PNorm,
    shape: BipartiteShape,
    tol: f64,
) -> Result<PballMargin> {
    shape.check_operator(a.dim())?;
    let delta_spectrum = hermitian_eigenvalues(&a.shifted(-1.0))?;
    Ok(pball_outcome(&delta_spectrum, p, shape.total(), tol))
}

/// The strongest scaling-derived sufficient condition: `S(λ) ≤ 1` for the
/// spectrum of (unnormalized) PSD `A`.
pub fn scaled_separability_test(
    a: &HermitianOperator,
    shape: BipartiteShape,
) -> Result<CriterionOutcome> {
    scaled_separability_test_with_tol(a, shape, DEFAULT_TOL)
}

pub fn scaled_separability_test_with_tol(
    a: &HermitianOperator,
    shape: BipartiteShape,
    tol: f64,
) -> Result<CriterionOutcome> {
    shape.check_operator(a.dim())?;
    let spectrum = hermitian_eigenvalues(a)?;
    let score = scaling_score_with_tol(&spectrum, tol)?;
    Ok(CriterionOutcome {
        value: score,
        passes: score <= 1.0 + tol,
    })
}

/// PPT (positive partial transpose) test: smallest eigenvalue of the partial
/// transpose. A negative result (beyond tolerance) proves entanglement.
pub fn ppt_test(a: &HermitianOperator, shape: BipartiteShape) -> Result<CriterionOutcome> {
    ppt_test_with_tol(a, shape, DEFAULT_TOL)
}

pub fn ppt_test_with_tol(
    a: &HermitianOperator,
    shape: BipartiteShape,
    tol: f64,
) -> Result<CriterionOutcome> {
    shape.check_operator(a.dim())?;
    let pt = partial_transpose(a, shape)?;
    let check = psd_check(&pt, tol)?;
    Ok(CriterionOutcome {
        value: check.min_eig,
        passes: check.is_psd,
    })
}

/// Run every criterion and combine them into a report.
///
/// The input must be PSD (checked here; failing that is a not-a-state
/// error carrying the minimum eigenvalue). Unnormalized input is fine:
/// the scaling score and the p-balls see `A` as given, while purity and
/// the Frobenius ball apply to `A/tr A`. A violated PPT is authoritative
/// for "entangled"; sufficient criteria only ever upgrade "inconclusive"
/// to "separable".
pub fn analyze(a: &HermitianOperator, shape: BipartiteShape, tol: f64) -> Result<CriterionReport> {
    shape.check_operator(a.dim())?;
    let d = shape.total();
    let spectrum = hermitian_eigenvalues(a)?;
    let scale = f64::max(1.0, spectrum.max_abs());
    if spectrum.min() < -tol * scale {
        return Err(Error::NotPsd {
            min_eig: spectrum.min(),
        });
    }

    let scaling = scaling_score_with_tol(&spectrum, tol)?;
    let trace: f64 = spectrum.values().iter().sum();

    // normalization-dependent criteria see A / tr A
    let normalized = Spectrum::new(spectrum.values().iter().map(|v| v / trace).collect());
    let purity = purity_outcome(&normalized, d, tol);
    let frobenius = frobenius_outcome(&normalized, d, tol);

    let delta_spectrum = hermitian_eigenvalues(&a.shifted(-1.0))?;
    let pballs: Vec<PballMargin> = [PNorm::ONE, PNorm::TWO, PNorm::Infinity]
        .into_iter()
        .map(|p| pball_outcome(&delta_spectrum, p, d, tol))
        .collect();

    let ppt = ppt_test_with_tol(a, shape, tol)?;

    let mut triggered = Vec::new();
    let verdict = if !ppt.passes {
        triggered.push("ppt".to_string());
        Verdict::Entangled
    } else {
        if scaling <= 1.0 + tol {
            triggered.push("scaling".to_string());
        }
        if purity.passes {
            triggered.push("purity".to_string());
        }
        if frobenius.passes {
            triggered.push("frobenius_ball".to_string());
        }
        for margin in &pballs {
            if margin.passes {
                triggered.push(format!("pball_p{}", margin.p));
            }
        }
        if triggered.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Separable
        }
    };

    Ok(CriterionReport {
        shape,
        trace,
        scaling_score: scaling,
        purity: purity.value,
        frobenius_distance: frobenius.value,
        pball_margins: pballs,
        ppt_min_eig: ppt.value,
        verdict,
        triggered_by: triggered,
    })
}

fn purity_outcome(normalized: &Spectrum, d: usize, tol: f64) -> CriterionOutcome {
    let purity: f64 = normalized.values().iter().map(|v| v * v).sum();
    let bound = 1.0 / (d as f64 - 1.0);
    CriterionOutcome {
        value: purity,
        passes: purity <= bound + tol,
    }
}

fn frobenius_outcome(normalized: &Spectrum, d: usize, tol: f64) -> CriterionOutcome {
    let center = 1.0 / d as f64;
    let dist = normalized
        .values()
        .iter()
        .map(|v| (v - center) * (v - center))
        .sum::<f64>()
        .sqrt();
    let radius = 1.0 / (d as f64 * (d as f64 - 1.0)).sqrt();
    CriterionOutcome {
        value: dist,
        passes: dist <= radius + tol,
    }
}

fn pball_outcome(delta_spectrum: &Spectrum, p: PNorm, d: usize, tol: f64) -> PballMargin {
    let deviation = delta_spectrum.p_norm(p);
    let radius = pball_radius_for_dim(p, d);
    PballMargin {
        p,
        deviation,
        radius,
        passes: deviation <= radius + tol,
    }
}

/// Ball radius in total dimension `d`: 1 for `p ≤ 2`, `d^{1/p − 1/2}`
/// for `p ≥ 2`.
pub(crate) fn pball_radius_for_dim(p: PNorm, d: usize) -> f64 {
    match p {
        PNorm::Infinity => 1.0 / (d as f64).sqrt(),
        PNorm::Finite(pp) if pp <= 2.0 => 1.0,
        PNorm::Finite(pp) => (d as f64).powf(1.0 / pp - 0.5),
    }
}

// One eigenvalue pass shared by the trace-1 criteria: validates PSD and
// trace normalization.
fn normalized_state_spectrum(
    rho: &HermitianOperator,
    shape: BipartiteShape,
    tol: f64,
) -> Result<Spectrum> {
    shape.check_operator(rho.dim())?;
    let spectrum = hermitian_eigenvalues(rho)?;
    let scale = f64::max(1.0, spectrum.max_abs());
    if spectrum.min() < -tol * scale {
        return Err(Error::NotPsd {
            min_eig: spectrum.min(),
        });
    }
    let trace: f64 = spectrum.values().iter().sum();
    if (trace - 1.0).abs() > TOL_NORM {
        return Err(Error::InvalidInput(format!(
            "density matrix is not normalized: trace = {trace}"
        )));
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::maximally_entangled;
    use crate::linalg::ComplexMatrix;
    use num_complex::Complex64 as C64;

    fn bell_density_2x2() -> HermitianOperator {
        let s = 0.5_f64.sqrt();
        let coeff = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                C64::new(s, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        crate::bipartite::PureState::new(coeff).unwrap().density()
    }

    /// Werner-type mixture (1−ε) I/4 + ε · Bell on 2 ⊗ 2.
    fn werner(eps: f64) -> HermitianOperator {
        let id = HermitianOperator::identity(4).scaled((1.0 - eps) / 4.0);
        id.plus(&bell_density_2x2().scaled(eps)).unwrap()
    }

    fn spectrum(values: &[f64]) -> Spectrum {
        Spectrum::new(values.to_vec())
    }

    #[test]
    fn scaling_score_examples() {
        assert!(
            scaling_score(&spectrum(&[1.0, 1.0, 1.0, 1.0]))
                .unwrap()
                .abs()
                < 1e-14
        );
        let s = scaling_score(&spectrum(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((s - 3.0).abs() < 1e-14);
        // spectrum of I + a·(pure state) at the boundary a = N²/(N²−2) = 2
        let s = scaling_score(&spectrum(&[1.0, 1.0, 1.0, 3.0])).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaling_score_errors() {
        assert!(matches!(
            scaling_score(&spectrum(&[0.0, 0.0])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            scaling_score(&spectrum(&[1.0, -0.5])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn purity_cases() {
        let shape = BipartiteShape::square(2).unwrap();
        let mixed = HermitianOperator::identity(4).scaled(0.25);
        let out = purity_test(&mixed, shape).unwrap();
        assert!((out.value - 0.25).abs() < 1e-14 && out.passes);

        let pure = bell_density_2x2();
        let out = purity_test(&pure, shape).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12 && !out.passes);

        // boundary: Werner at ε = 1/3 has eigenvalues (1/6,1/6,1/6,1/2),
        // purity 3/36 + 1/4 = 1/3 = 1/(d−1)
        let out = purity_test(&werner(1.0 / 3.0), shape).unwrap();
        assert!((out.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(out.passes);
    }

    #[test]
    fn purity_rejects_unnormalized() {
        let shape = BipartiteShape::square(2).unwrap();
        let a = HermitianOperator::identity(4);
        assert!(matches!(
            purity_test(&a, shape),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn frobenius_cases() {
        let shape = BipartiteShape::square(2).unwrap();
        let mixed = HermitianOperator::identity(4).scaled(0.25);
        let out = frobenius_ball_test(&mixed, shape).unwrap();
        assert!(out.value.abs() < 1e-14 && out.passes);

        let out = frobenius_ball_test(&bell_density_2x2(), shape).unwrap();
        assert!((out.value - (0.75_f64).sqrt()).abs() < 1e-12);
        assert!(!out.passes);

        // the radius itself: 1/√12
        let radius = 1.0 / 12.0_f64.sqrt();
        assert!((radius - 0.288675).abs() < 1e-6);
    }

    #[test]
    fn pball_cases() {
        let shape = BipartiteShape::square(2).unwrap();
        let id = HermitianOperator::identity(4);
        let out = pball_membership(&id, PNorm::TWO, shape).unwrap();
        assert!(out.deviation.abs() < 1e-14 && out.passes);

        // boundary at p = ∞: A = I + diag(0.5, −0.5, 0.5, −0.5)
        let diag = [0.5, -0.5, 0.5, -0.5];
        let a = HermitianOperator::from_matrix(&ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::new(1.0 + diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap();
        let out = pball_membership(&a, PNorm::Infinity, shape).unwrap();
        assert!((out.deviation - 0.5).abs() < 1e-14);
        assert!((out.radius - 0.5).abs() < 1e-14);
        assert!(out.passes);

        // ||Δ||₂ just above 1 fails for N = 3 at p = 2
        let shape3 = BipartiteShape::square(3).unwrap();
        let delta = crate::extremal::interior_boundary_delta(3).scaled(1.001);
        let a = delta.shifted(1.0);
        let out = pball_membership(&a, PNorm::TWO, shape3).unwrap();
        assert!((out.radius - 1.0).abs() < 1e-14);
        assert!(!out.passes);
    }

    #[test]
    fn scaled_test_cases() {
        let shape = BipartiteShape::square(2).unwrap();
        let out =
            scaled_separability_test(&HermitianOperator::identity(4).scaled(7.3), shape).unwrap();
        assert!(out.value.abs() < 1e-12 && out.passes);

        // I + 2·Bell sits exactly on the boundary
        let a = HermitianOperator::identity(4)
            .plus(&bell_density_2x2().scaled(2.0))
            .unwrap();
        let out = scaled_separability_test(&a, shape).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);
        assert!(out.passes);

        // I + 3·Bell: S = 4 − 49/19, fails
        let a = HermitianOperator::identity(4)
            .plus(&bell_density_2x2().scaled(3.0))
            .unwrap();
        let out = scaled_separability_test(&a, shape).unwrap();
        assert!((out.value - (4.0 - 49.0 / 19.0)).abs() < 1e-12);
        assert!(!out.passes);
    }

    // independent oracle for S(λ) = min_{a>0} ||aλ − e||²: golden-section
    // search over a
    fn brute_force_scaling_score(values: &[f64]) -> f64 {
        let f = |a: f64| -> f64 { values.iter().map(|&l| (a * l - 1.0) * (a * l - 1.0)).sum() };
        let (mut lo, mut hi) = (1e-6, 1e6);
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn scaling_score_matches_brute_force_minimization() {
        for values in [
            vec![1.0, 1.0, 1.0, 4.0],
            vec![0.2, 0.3, 0.1, 0.4],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.5],
        ] {
            let s = scaling_score(&Spectrum::new(values.clone())).unwrap();
            let b = brute_force_scaling_score(&values);
            assert!((s - b).abs() < 1e-6, "S = {s}, brute force = {b}");
        }
    }

    #[test]
    fn ppt_cases() {
        let shape = BipartiteShape::square(2).unwrap();
        let out = ppt_test(&bell_density_2x2(), shape).unwrap();
        assert!((out.value + 0.5).abs() < 1e-12);
        assert!(!out.passes);

        // Werner at ε = 0.4: min PT eigenvalue (1 − 3ε)/4 = −0.05
        let out = ppt_test(&werner(0.4), shape).unwrap();
        assert!((out.value + 0.05).abs() < 1e-12);
        assert!(!out.passes);
    }

    #[test]
    fn analyze_maximally_mixed() {
        let shape = BipartiteShape::square(3).unwrap();
        let rho = HermitianOperator::identity(9).scaled(1.0 / 9.0);
        let report = analyze(&rho, shape, DEFAULT_TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Separable);
        assert!(report.scaling_score.abs() < 1e-12);
        assert!(report.triggered_by.contains(&"scaling".to_string()));
    }

    #[test]
    fn analyze_werner_point_three() {
        let shape = BipartiteShape::square(2).unwrap();
        let report = analyze(&werner(0.3), shape, DEFAULT_TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Separable);
        // eigenvalues (0.175, 0.175, 0.175, 0.475)
        assert!((report.purity - 0.3175).abs() < 1e-12);
        assert!((report.ppt_min_eig - 0.025).abs() < 1e-12);
        assert!(report.triggered_by.contains(&"purity".to_string()));
    }

    #[test]
    fn analyze_maxent_3x3() {
        let shape = BipartiteShape::square(3).unwrap();
        let rho = maximally_entangled(3).density();
        let report = analyze(&rho, shape, DEFAULT_TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Entangled);
        assert!((report.ppt_min_eig + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.triggered_by, vec!["ppt".to_string()]);
    }

    #[test]
    fn analyze_rejects_non_state() {
        let shape = BipartiteShape::square(2).unwrap();
        let a = HermitianOperator::from_matrix(&ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::new(if i == 0 { -1.0 } else { 1.0 }, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap();
        match analyze(&a, shape, DEFAULT_TOL) {
            Err(Error::NotPsd { min_eig }) => assert!((min_eig + 1.0).abs() < 1e-12),
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }
}
