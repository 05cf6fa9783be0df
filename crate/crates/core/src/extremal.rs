//! Extremal objects and thresholds: exact ball radii, NPT witnesses that
//! realize their tightness, pure-state perturbation thresholds, the
//! antisymmetric projector's extremal negativity, and pseudopure mixing
//! bounds.
//!
//! Conventions: `W`-style quantities are exposed as suprema of
//! `−λ_min(ρ^T)` over the stated families. Random-search estimates for
//! projector ranks without a closed form are lower estimates of the
//! supremum and are labeled as such, never as exact values.

use serde::Serialize;

use crate::bipartite::{
    partial_transpose, swap_operator, validate_schmidt_values, BipartiteShape, PureState,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, HermitianOperator, PNorm};
use crate::stategen::{random_projector, Seed};

/// Exact radius of the largest separable p-ball around the identity of an
/// `N ⊗ N` system: 1 for `p ∈ [1, 2]` and `N^{2/p − 1}` for `p ∈ [2, ∞]`
/// (continuous at `p = 2`).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BallRadius {
    pub n: usize,
    pub p: PNorm,
    pub radius: f64,
}

/// The closed-form thresholds attached to an `N ⊗ N` system.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PerturbationProfile {
    pub n: usize,
    /// Largest `a` with `I + aρ` separable by scaling, any pure `ρ`:
    /// `N²/(N²−2)`.
    pub pure_scaling_threshold: f64,
    /// Largest `a` with `I + a·Bell` PPT: 2 (the worst pure perturbation).
    pub pure_ppt_threshold_bell: f64,
    /// Guaranteed-separable polarization for any mixed-in state:
    /// `1/(N²−1)`.
    pub pseudopure_lower: f64,
    /// Polarization where the Bell mixture turns NPT: `2/(2+N²)`.
    pub pseudopure_upper: f64,
    /// Extremal PT negativity over rank-`N(N−1)/2` projectors: `(N−1)/2`.
    pub projector_negativity_max: f64,
}

/// Lower estimate of a supremum obtained by random search.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NegativityEstimate {
    pub max_negativity: f64,
    pub samples: usize,
}

pub fn ball_radius(n: usize, p: PNorm) -> Result<BallRadius> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ball radius needs N >= 2, got {n}"
        )));
    }
    let radius = match p {
        PNorm::Infinity => 1.0 / n as f64,
        PNorm::Finite(pp) if pp <= 2.0 => 1.0,
        PNorm::Finite(pp) => (n as f64).powf(2.0 / pp - 1.0),
    };
    Ok(BallRadius { n, p, radius })
}

/// Witness direction that saturates the p-ball radius: the Hermitian
/// `Δ = −(a / N^{2/p}) · swap`, which has `‖Δ‖_p = a` and
/// `λ_min((I + Δ)^T) = 1 − a·N^{1−2/p}`.
///
/// The partial transpose turns negative exactly when `a` exceeds
/// [`swap_witness_ppt_threshold`], which coincides with the ball radius
/// `B(N, p)` for `p ≥ 2` — that coincidence is what makes the radii
/// exact there. For `p < 2` the ball radius is 1 but this direction
/// stays PPT up to `N^{2/p−1} > 1` (the `p < 2` radii are instead
/// saturated at the boundary of the positive cone).
pub fn npt_witness(n: usize, p: PNorm, a: f64) -> Result<HermitianOperator> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "witness needs N >= 2, got {n}"
        )));
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "witness amplitude must be positive, got {a}"
        )));
    }
    let two_over_p = match p {
        PNorm::Infinity => 0.0,
        PNorm::Finite(pp) => 2.0 / pp,
    };
    let scale = -a / (n as f64).powf(two_over_p);
    Ok(swap_operator(n).scaled(scale))
}

/// Amplitude where the swap-direction witness loses PPT:
/// `N^{2/p − 1}`. Equals the ball radius for `p ≥ 2` and exceeds it
/// (radius 1) for `p < 2`.
pub fn swap_witness_ppt_threshold(n: usize, p: PNorm) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "witness needs N >= 2, got {n}"
        )));
    }
    Ok(match p {
        PNorm::Infinity => 1.0 / n as f64,
        PNorm::Finite(pp) => (n as f64).powf(2.0 / pp - 1.0),
    })
}

/// `−λ_min(ρ^T)` of a pure state from its Schmidt values: the largest
/// product `d_i d_j` over distinct pairs. Always at most 1/2, with
/// equality exactly for a Bell pair of Schmidt values `1/√2`.
pub fn pure_pt_negativity(schmidt_values: &[f64]) -> Result<f64> {
    validate_schmidt_values(schmidt_values)?;
    let mut sorted = schmidt_values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite Schmidt values"));
    if sorted.len() < 2 {
        return Ok(0.0);
    }
    Ok(sorted[0] * sorted[1])
}

/// Thresholds for perturbing the identity by a positive multiple of the
/// given pure state.
#[derive(Clone, Copy, Debug)]
pub struct PureThresholds {
    /// `I + aρ` passes the scaling criterion iff `a` is at most this;
    /// equals `N²/(N²−2)` independently of the state.
    pub scaling_max_a: f64,
    /// `I + aρ` is PPT iff `a` is at most this; infinite for product
    /// states.
    pub ppt_max_a: f64,
}

pub fn pure_perturbation_thresholds(psi: &PureState) -> Result<PureThresholds> {
    let shape = psi.shape();
    if shape.dim_left != shape.dim_right {
        return Err(Error::InvalidShape(format!(
            "pure perturbation thresholds need a square N⊗N system, got {shape}"
        )));
    }
    let n = shape.dim_left;
    if n < 2 {
        return Err(Error::InvalidShape(
            "pure perturbation thresholds need N >= 2".into(),
        ));
    }
    let nn = (n * n) as f64;
    let schmidt = crate::bipartite::schmidt(psi)?;
    let negativity = pure_pt_negativity(&schmidt.values)?;
    let ppt_max_a = if negativity > 0.0 {
        1.0 / negativity
    } else {
        f64::INFINITY
    };
    Ok(PureThresholds {
        scaling_max_a: nn / (nn - 2.0),
        ppt_max_a,
    })
}

/// Projector onto the antisymmetric subspace of `C^N ⊗ C^N`:
/// `(I − swap)/2`, rank `N(N−1)/2`. Its partial transpose attains the
/// extremal negativity `(N−1)/2`.
pub fn antisymmetric_projector(n: usize) -> HermitianOperator {
    let d = n * n;
    HermitianOperator::identity(d)
        .minus(&swap_operator(n))
        .expect("same dimension")
        .scaled(0.5)
}

/// Negativity of an orthogonal projector's partial transpose: the modulus
/// of the most negative eigenvalue of `P^T`, 0 when the partial transpose
/// is PSD.
pub fn projector_negativity(p: &HermitianOperator, shape: BipartiteShape) -> Result<f64> {
    shape.check_operator(p.dim())?;
    let p_mat = p.to_matrix();
    let defect = p_mat.mul(&p_mat)?.sub(&p_mat)?.frobenius_norm();
    if defect > 1e-8 * f64::max(1.0, p_mat.frobenius_norm()) {
        return Err(Error::NotProjector { defect });
    }
    let pt = partial_transpose(p, shape)?;
    Ok(f64::max(0.0, -hermitian_eigenvalues(&pt)?.min()))
}

/// The p = 2 boundary direction inside the positive cone:
/// `Δ = ((N−1)/N)(I + (2/(N−1))·P_antisym) − I`, with `N(N+1)/2`
/// eigenvalues `−1/N`, `N(N−1)/2` eigenvalues `+1/N`, and `‖Δ‖₂ = 1`.
/// `I + Δ` is PSD with minimum eigenvalue `1 − 1/N`, while
/// `I + (1+δ)Δ` is NPT for every `δ > 0`.
pub fn interior_boundary_delta(n: usize) -> HermitianOperator {
    let nf = n as f64;
    let inner = antisymmetric_projector(n)
        .scaled(2.0 / (nf - 1.0))
        .shifted(1.0);
    inner.scaled((nf - 1.0) / nf).shifted(-1.0)
}

/// Closed-form pseudopure thresholds for mixtures
/// `σ = (1−ε) I/d + ε ρ` on an `N ⊗ N` system (`d = N²`).
pub fn pseudopure_bounds(n: usize) -> Result<PerturbationProfile> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "pseudopure bounds need N >= 2, got {n}"
        )));
    }
    let nn = (n * n) as f64;
    Ok(PerturbationProfile {
        n,
        pure_scaling_threshold: nn / (nn - 2.0),
        pure_ppt_threshold_bell: 2.0,
        pseudopure_lower: 1.0 / (nn - 1.0),
        pseudopure_upper: 2.0 / (2.0 + nn),
        projector_negativity_max: (n as f64 - 1.0) / 2.0,
    })
}

/// Refined separability guarantee for a pseudopure mixture when the
/// purity `tr ρ²` of the mixed-in state is known: solves
/// `tr σ² = (1−ε²)/d + ε²·purity ≤ 1/(d−1)` for ε. Reduces to the
/// universal `1/(d−1)` at purity 1 and improves on it for mixed `ρ`.
pub fn pseudopure_refined_threshold(n: usize, purity: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "pseudopure bounds need N >= 2, got {n}"
        )));
    }
    let d = (n * n) as f64;
    if !(purity >= 1.0 / d - 1e-12 && purity <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "purity must lie in [1/d, 1] = [{}, 1], got {purity}",
            1.0 / d
        )));
    }
    let excess = purity - 1.0 / d;
    if excess <= 0.0 {
        return Ok(1.0); // mixing in the maximally mixed state never entangles
    }
    Ok(f64::min(1.0, 1.0 / (d * (d - 1.0) * excess).sqrt()))
}

/// Random-search lower estimate of the supremum of `−λ_min(P^T)` over
/// Haar-random rank-`rank` projectors on `N ⊗ N`.
pub fn estimate_projector_negativity(
    n: usize,
    rank: usize,
    samples: usize,
    seed: Seed,
) -> Result<NegativityEstimate> {
    let d = n * n;
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "projector rank must lie in 1..={d}, got {rank}"
        )));
    }
    let shape = BipartiteShape::square(n)?;
    let mut max_negativity = f64::NEG_INFINITY;
    for k in 0..samples {
        let p = random_projector(d, rank, seed.split(k as u64))?;
        let neg = projector_negativity(&p, shape)?;
        max_negativity = max_negativity.max(neg);
    }
    Ok(NegativityEstimate {
        max_negativity,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::maximally_entangled;
    use crate::criteria::{analyze, ppt_test, scaled_separability_test, Verdict, DEFAULT_TOL};
    use crate::linalg::{spectral_p_norm, ComplexMatrix};
    use num_complex::Complex64 as C64;

    #[test]
    fn ball_radius_values() {
        let b = ball_radius(3, PNorm::Infinity).unwrap();
        assert!((b.radius - 1.0 / 3.0).abs() < 4.0 * f64::EPSILON);
        let b = ball_radius(7, PNorm::TWO).unwrap();
        assert_eq!(b.radius, 1.0);
        let b = ball_radius(2, PNorm::new(4.0).unwrap()).unwrap();
        assert!((b.radius - 1.0 / 2.0_f64.sqrt()).abs() < 4.0 * f64::EPSILON);
        // continuity at p = 2 from above
        let b = ball_radius(5, PNorm::new(2.0).unwrap()).unwrap();
        assert_eq!(b.radius, 1.0);
        assert!(ball_radius(1, PNorm::TWO).is_err());
    }

    #[test]
    fn witness_norm_and_boundary() {
        // boundary at N = 2, p = ∞, a = B = 1/2: min PT eigenvalue 0
        let delta = npt_witness(2, PNorm::Infinity, 0.5).unwrap();
        assert!((spectral_p_norm(&delta, PNorm::Infinity).unwrap() - 0.5).abs() < 1e-12);
        let shape = BipartiteShape::square(2).unwrap();
        let out = ppt_test(&delta.shifted(1.0), shape).unwrap();
        assert!(out.value.abs() < 1e-12);
        assert!(out.passes);
    }

    #[test]
    fn witness_outside_two_ball_is_npt() {
        let delta = npt_witness(3, PNorm::TWO, 1.01).unwrap();
        assert!((spectral_p_norm(&delta, PNorm::TWO).unwrap() - 1.01).abs() < 1e-12);
        let shape = BipartiteShape::square(3).unwrap();
        let out = ppt_test(&delta.shifted(1.0), shape).unwrap();
        assert!(!out.passes);
        assert!(out.value < -1e-4);
    }

    #[test]
    fn witness_crossing_below_two_differs_from_radius() {
        // for p < 2 the ball radius is 1 but the swap direction keeps a
        // positive partial transpose until N^{2/p−1}
        let shape = BipartiteShape::square(2).unwrap();
        let crossing = swap_witness_ppt_threshold(2, PNorm::ONE).unwrap();
        assert!((crossing - 2.0).abs() < 1e-14);
        let inside = npt_witness(2, PNorm::ONE, 1.5).unwrap().shifted(1.0);
        assert!(ppt_test(&inside, shape).unwrap().passes);
        let outside = npt_witness(2, PNorm::ONE, 2.2).unwrap().shifted(1.0);
        assert!(!ppt_test(&outside, shape).unwrap().passes);
        // for p ≥ 2 the crossing and the radius coincide
        for p in [PNorm::TWO, PNorm::new(3.0).unwrap(), PNorm::Infinity] {
            let b = ball_radius(3, p).unwrap().radius;
            let c = swap_witness_ppt_threshold(3, p).unwrap();
            assert!((b - c).abs() < 1e-15);
        }
    }

    #[test]
    fn witness_min_pt_eigenvalue_formula() {
        // min PT eigenvalue of I + Δ is 1 − a·N^{1−2/p}, checked against a
        // direct partial-transpose eigendecomposition
        for (n, p, a) in [
            (3usize, PNorm::new(3.0).unwrap(), 0.5),
            (2, PNorm::Infinity, 0.3),
            (4, PNorm::TWO, 0.7),
        ] {
            let delta = npt_witness(n, p, a).unwrap();
            assert!((spectral_p_norm(&delta, p).unwrap() - a).abs() < 1e-12);
            let shape = BipartiteShape::square(n).unwrap();
            let out = ppt_test(&delta.shifted(1.0), shape).unwrap();
            let two_over_p = match p {
                PNorm::Infinity => 0.0,
                PNorm::Finite(pp) => 2.0 / pp,
            };
            let expected = 1.0 - a * (n as f64).powf(1.0 - two_over_p);
            assert!(
                (out.value - expected).abs() < 1e-12,
                "N={n}: {} vs {expected}",
                out.value
            );
        }
    }

    #[test]
    fn witness_inside_inf_ball_is_separable() {
        let delta = npt_witness(3, PNorm::Infinity, 1.0 / 3.0 - 0.01).unwrap();
        let shape = BipartiteShape::square(3).unwrap();
        let report = analyze(&delta.shifted(1.0), shape, DEFAULT_TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Separable);
    }

    #[test]
    fn pure_negativity_cases() {
        assert!(pure_pt_negativity(&[1.0, 0.0]).unwrap().abs() < 1e-15);
        let r = 0.5_f64.sqrt();
        assert!((pure_pt_negativity(&[r, r]).unwrap() - 0.5).abs() < 1e-15);
        let t = (1.0_f64 / 3.0).sqrt();
        assert!((pure_pt_negativity(&[t, t, t]).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn perturbation_thresholds() {
        // Bell on 2⊗2: both thresholds equal 2
        let bell = {
            let s = 0.5_f64.sqrt();
            let coeff = ComplexMatrix::from_fn(2, 2, |i, j| {
                if i == j {
                    C64::new(s, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            PureState::new(coeff).unwrap()
        };
        let t = pure_perturbation_thresholds(&bell).unwrap();
        assert!((t.scaling_max_a - 2.0).abs() < 1e-12);
        assert!((t.ppt_max_a - 2.0).abs() < 1e-12);

        // maximally entangled N = 3: (9/7, 3)
        let t = pure_perturbation_thresholds(&maximally_entangled(3)).unwrap();
        assert!((t.scaling_max_a - 9.0 / 7.0).abs() < 1e-12);
        assert!((t.ppt_max_a - 3.0).abs() < 1e-12);

        // product state: PPT threshold infinite
        let prod = {
            let coeff = ComplexMatrix::from_fn(3, 3, |i, j| {
                if i == 0 && j == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            PureState::new(coeff).unwrap()
        };
        let t = pure_perturbation_thresholds(&prod).unwrap();
        assert!((t.scaling_max_a - 9.0 / 7.0).abs() < 1e-12);
        assert!(t.ppt_max_a.is_infinite());
    }

    #[test]
    fn antisymmetric_projector_properties() {
        for n in 2..=4 {
            let p = antisymmetric_projector(n);
            let rank = n * (n - 1) / 2;
            assert!((p.trace() - rank as f64).abs() < 1e-12);
            let pm = p.to_matrix();
            assert!(pm.mul(&pm).unwrap().sub(&pm).unwrap().frobenius_norm() < 1e-12);
            let shape = BipartiteShape::square(n).unwrap();
            let neg = projector_negativity(&p, shape).unwrap();
            assert!((neg - (n as f64 - 1.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn antisym_scaling_transition() {
        for n in 2..=4 {
            let p = antisymmetric_projector(n);
            let shape = BipartiteShape::square(n).unwrap();
            let a = 2.0 / (n as f64 - 1.0);
            let at_boundary = scaled_separability_test(&p.scaled(a).shifted(1.0), shape).unwrap();
            assert!((at_boundary.value - 1.0).abs() < 1e-10);
            let above = ppt_test(&p.scaled(a + 0.05).shifted(1.0), shape).unwrap();
            assert!(!above.passes);
        }
    }

    #[test]
    fn projector_negativity_cases() {
        let shape = BipartiteShape::square(3).unwrap();
        // identity is its own partial transpose
        let neg = projector_negativity(&HermitianOperator::identity(9), shape).unwrap();
        assert!(neg.abs() < 1e-12);

        let shape4 = BipartiteShape::square(4).unwrap();
        let neg = projector_negativity(&antisymmetric_projector(4), shape4).unwrap();
        assert!((neg - 1.5).abs() < 1e-12);

        // projectors onto spans of product vectors have PSD partial transpose
        let mut data = vec![C64::new(0.0, 0.0); 81];
        for k in [0usize, 4, 8] {
            data[k * 9 + k] = C64::new(1.0, 0.0); // e_i ⊗ e_i, i = 0,1,2
        }
        let p = HermitianOperator::new(9, data).unwrap();
        let neg = projector_negativity(&p, shape).unwrap();
        assert!(neg.abs() < 1e-12);

        // non-projector rejected
        let bad = HermitianOperator::identity(9).scaled(0.5);
        assert!(matches!(
            projector_negativity(&bad, shape),
            Err(Error::NotProjector { .. })
        ));
    }

    #[test]
    fn interior_delta_spectrum_and_norm() {
        for n in 2..=4 {
            let delta = interior_boundary_delta(n);
            let eig = hermitian_eigenvalues(&delta).unwrap();
            let minus = eig.values().iter().filter(|&&v| v < 0.0).count();
            assert_eq!(minus, n * (n + 1) / 2);
            for v in eig.values() {
                assert!((v.abs() - 1.0 / n as f64).abs() < 1e-12);
            }
            assert!((spectral_p_norm(&delta, PNorm::TWO).unwrap() - 1.0).abs() < 1e-12);
            // matches the swap direction exactly
            let swap_dir = swap_operator(n).scaled(-1.0 / n as f64);
            assert!(delta.minus(&swap_dir).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn interior_delta_ppt_boundary() {
        let shape = BipartiteShape::square(3).unwrap();
        let delta = interior_boundary_delta(3);
        let on = ppt_test(&delta.shifted(1.0), shape).unwrap();
        assert!(on.passes && on.value.abs() < 1e-12);
        let beyond = ppt_test(&delta.scaled(1.02).shifted(1.0), shape).unwrap();
        assert!(!beyond.passes);
    }

    #[test]
    fn pseudopure_values() {
        let b = pseudopure_bounds(2).unwrap();
        assert!((b.pseudopure_lower - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.pseudopure_upper - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.projector_negativity_max - 0.5).abs() < 1e-15);

        let b = pseudopure_bounds(3).unwrap();
        assert!((b.pseudopure_lower - 0.125).abs() < 1e-15);
        assert!((b.pseudopure_upper - 2.0 / 11.0).abs() < 1e-15);
        assert!((b.pure_scaling_threshold - 9.0 / 7.0).abs() < 1e-15);

        // earlier published bounds for N = 2 bracket from below:
        // 1/(1+N³) = 1/9 < 1/3, and 1/(1+N) = 1/3 coincides
        let n = 2.0_f64;
        assert!(1.0 / (1.0 + n.powi(3)) < b2_lower());
        assert!((1.0 / (1.0 + n) - b2_lower()).abs() < 1e-15);
    }

    fn b2_lower() -> f64 {
        pseudopure_bounds(2).unwrap().pseudopure_lower
    }

    #[test]
    fn refined_threshold_matches_closed_form() {
        // purity 1 reduces to 1/(d−1)
        let t = pseudopure_refined_threshold(2, 1.0).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-12);
        // maximally mixed input never entangles
        assert_eq!(pseudopure_refined_threshold(2, 0.25).unwrap(), 1.0);
        // a mildly mixed state does better than the universal bound
        let t = pseudopure_refined_threshold(2, 0.5).unwrap();
        assert!(t > 1.0 / 3.0);
        assert!(pseudopure_refined_threshold(2, 0.1).is_err());
    }

    #[test]
    fn antisym_projector_spectrum_is_zero_one() {
        let eig = hermitian_eigenvalues(&antisymmetric_projector(3)).unwrap();
        for v in eig.values() {
            assert!(v.abs() < 1e-12 || (v - 1.0).abs() < 1e-12);
        }
    }
}
