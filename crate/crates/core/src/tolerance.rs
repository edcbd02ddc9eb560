//! Centralized tolerance record.
//!
//! Every threshold used by the verification suites lives here. The global
//! multiplier `QSGEOM_TOL_SCALE` scales absolute/relative tolerances; order
//! and ratio thresholds (convergence rates) are never scaled.

use std::env;

/// Environment variable holding the global tolerance multiplier.
pub const TOL_SCALE_ENV: &str = "QSGEOM_TOL_SCALE";

/// Thresholds for every verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Minimum measured order of `|ds² − 4 g(δ,δ)|` in `|δ|`.
    pub fs_consistency_order: f64,
    /// Entrywise change of the ray-space metric under a gauge transformation.
    pub gauge_invariance: f64,
    /// Minimum entrywise change of the configuration metric under `α(r) = r`.
    pub gauge_variation_min: f64,
    /// Maximum relative error of stencil metrics against hydrogen closed forms.
    pub hydrogen_rel_err: f64,
    /// Relative threshold under which an eigenvalue counts as zero.
    pub signature_zero: f64,
    /// CP(1) pullback (×4) against the round unit sphere.
    pub cp1_sphere_metric: f64,
    /// Scalar curvature of the unit sphere against 2.
    pub sphere_scalar_curvature: f64,
    /// Pointwise stddev/mean of the CP(2) Einstein constant.
    pub einstein_constancy: f64,
    /// Re-run reproducibility of the fitted cosmological constant.
    pub lambda_reproducibility: f64,
    /// Fubini–Study speed minus `2ΔE/ħ`.
    pub aa_speed: f64,
    /// Minimum shrink factor of the speed residual when dt halves.
    pub aa_shrink_ratio: f64,
    /// Geodesic residual of an equatorial evolution.
    pub geodesic_residual_max: f64,
    /// Minimum geodesic residual of a tilted (non-geodesic) evolution.
    pub non_geodesic_residual_min: f64,
    /// Translation invariance of the Gaussian pullback.
    pub gaussian_translation: f64,
    /// `1/λ²` scaling of the Gaussian pullback.
    pub gaussian_scaling: f64,
    /// Klein–Gordon invariant residuals.
    pub klein_gordon: f64,
    /// Norm drift of a long spectral evolution.
    pub unitarity: f64,
    /// Summed proper time against the Fubini–Study length of a trace.
    pub proper_time_length: f64,
    /// Expected shrink factor per halving of Zα for the Dirac limit.
    pub dirac_ratio_expected: f64,
    /// Allowed relative deviation of that factor.
    pub dirac_ratio_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fs_consistency_order: 3.0,
            gauge_invariance: 1e-6,
            gauge_variation_min: 1e-3,
            hydrogen_rel_err: 1e-6,
            signature_zero: 1e-9,
            cp1_sphere_metric: 1e-6,
            sphere_scalar_curvature: 1e-4,
            einstein_constancy: 1e-3,
            lambda_reproducibility: 1e-6,
            aa_speed: 1e-6,
            aa_shrink_ratio: 3.5,
            geodesic_residual_max: 1e-4,
            non_geodesic_residual_min: 0.05,
            gaussian_translation: 1e-8,
            gaussian_scaling: 1e-6,
            klein_gordon: 1e-6,
            unitarity: 1e-12,
            proper_time_length: 1e-5,
            dirac_ratio_expected: 4.0,
            dirac_ratio_slack: 0.2,
        }
    }
}

impl Tolerances {
    /// Defaults multiplied by `factor` (precision thresholds only).
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            gauge_invariance: d.gauge_invariance * factor,
            hydrogen_rel_err: d.hydrogen_rel_err * factor,
            cp1_sphere_metric: d.cp1_sphere_metric * factor,
            sphere_scalar_curvature: d.sphere_scalar_curvature * factor,
            einstein_constancy: d.einstein_constancy * factor,
            lambda_reproducibility: d.lambda_reproducibility * factor,
            aa_speed: d.aa_speed * factor,
            geodesic_residual_max: d.geodesic_residual_max * factor,
            gaussian_translation: d.gaussian_translation * factor,
            gaussian_scaling: d.gaussian_scaling * factor,
            klein_gordon: d.klein_gordon * factor,
            unitarity: d.unitarity * factor,
            proper_time_length: d.proper_time_length * factor,
            ..d
        }
    }

    /// Defaults scaled by `QSGEOM_TOL_SCALE` when it is set to a positive number.
    pub fn from_env() -> Self {
        match env::var(TOL_SCALE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
        {
            Some(f) if f.is_finite() && f > 0.0 => Self::scaled(f),
            _ => Self::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_scale_is_default() {
        assert_eq!(Tolerances::scaled(1.0), Tolerances::default());
    }

    #[test]
    fn scaling_leaves_rates_alone() {
        let t = Tolerances::scaled(10.0);
        assert_eq!(t.fs_consistency_order, 3.0);
        assert_eq!(t.aa_shrink_ratio, 3.5);
        assert!((t.hydrogen_rel_err - 1e-5).abs() < 1e-20);
    }
}
