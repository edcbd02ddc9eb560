//! Gaussian coherent family `Ψ_l(x) ∝ exp(−|x − l|²/(2w²))`, `w² = ħλ²`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{Chart, DomainBox, Family, ParamPoint, RayFamily, Stencil, Unit};
use crate::hilbert::{AxisSpec, Grid, GridState, Measure};
use crate::metrics::fs_pullback;

/// Width in `λ`, action `ħ`, spatial dimension 1 or 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub lambda: f64,
    pub hbar: f64,
    pub dim: usize,
}

impl Default for GaussianParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            hbar: 1.0,
            dim: 1,
        }
    }
}

impl GaussianParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0)
            || !(self.hbar > 0.0)
            || !self.lambda.is_finite()
            || !self.hbar.is_finite()
        {
            return Err(Error::InvalidParameter(
                "Gaussian family needs lambda > 0 and hbar > 0".into(),
            ));
        }
        if self.dim != 1 && self.dim != 3 {
            return Err(Error::InvalidParameter(format!(
                "Gaussian dimension must be 1 or 3, got {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Packet width `w = λ√ħ`.
    pub fn width(&self) -> f64 {
        self.lambda * self.hbar.sqrt()
    }

    /// Required extent on each side of a center.
    fn support(&self) -> f64 {
        8.0 * self.lambda.max(self.width())
    }
}

/// Continuum value `1/(2ħλ²)` of the Fubini–Study pullback `g_ll`.
pub fn gaussian_metric_constant(params: &GaussianParams) -> f64 {
    1.0 / (2.0 * params.hbar * params.lambda * params.lambda)
}

/// Trapezoid grid with spacing `w/2` covering every center in `centers`
/// with `10·max(λ, w)` to spare on each side.
pub fn gaussian_grid(params: &GaussianParams, centers: &[Vec<f64>]) -> Result<Arc<Grid>> {
    params.validate()?;
    let pad = 1.25 * params.support();
    let h = 0.5 * params.width();
    let specs = (0..params.dim)
        .map(|i| {
            let lo = centers.iter().map(|c| c[i]).fold(0.0f64, f64::min) - pad;
            let hi = centers.iter().map(|c| c[i]).fold(0.0f64, f64::max) + pad;
            AxisSpec::trapezoid(lo, hi, ((hi - lo) / h).ceil() as usize + 1)
        })
        .collect::<Vec<_>>();
    Ok(Arc::new(Grid::build(&specs, Measure::Cartesian)?))
}

fn center_chart(dim: usize) -> Result<Arc<Chart>> {
    if dim == 1 {
        Chart::new(vec![("l", Unit::Length)])
    } else {
        Chart::new(vec![
            ("l1", Unit::Length),
            ("l2", Unit::Length),
            ("l3", Unit::Length),
        ])
    }
}

/// Ray family over the center `l`, sampled on `grid` (or on
/// [`gaussian_grid`] around the origin when `None`).
pub fn gaussian_family(
    params: &GaussianParams,
    grid: Option<Arc<Grid>>,
) -> Result<RayFamily<GridState>> {
    params.validate()?;
    let grid = match grid {
        Some(g) => g,
        None => gaussian_grid(params, &[vec![0.0; params.dim]])?,
    };
    if grid.axes().len() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            found: grid.axes().len(),
        });
    }
    let w2 = params.width().powi(2);
    RayFamily::new(
        center_chart(params.dim)?,
        DomainBox::unbounded(params.dim),
        move |l: &[f64]| {
            GridState::sample(Arc::clone(&grid), |x| {
                let d2: f64 = x.iter().zip(l).map(|(a, b)| (a - b).powi(2)).sum();
                Complex64::new((-d2 / (2.0 * w2)).exp(), 0.0)
            })
        },
    )
}

/// Pullback metric of the Gaussian family over a set of centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianReport {
    pub lambda: f64,
    pub hbar: f64,
    pub dim: usize,
    /// Mean of the diagonal entries over all samples.
    pub g_ll: f64,
    /// Largest relative deviation of any diagonal entry from `g_ll`.
    pub translation_variation: f64,
    /// Largest off-diagonal entry relative to `g_ll`.
    pub isotropy_error: f64,
    /// `g_ll · λ²`, the measured proportionality constant.
    pub constant: f64,
}

/// [`gaussian_limit_check_on`] with a grid from [`gaussian_grid`].
pub fn gaussian_limit_check(
    params: &GaussianParams,
    centers: &[Vec<f64>],
    s: &Stencil,
) -> Result<GaussianReport> {
    gaussian_limit_check_on(params, gaussian_grid(params, centers)?, centers, s)
}

/// Evaluate `g` at each center; every grid axis must extend `8·max(λ, w)`
/// beyond every center.
pub fn gaussian_limit_check_on(
    params: &GaussianParams,
    grid: Arc<Grid>,
    centers: &[Vec<f64>],
    s: &Stencil,
) -> Result<GaussianReport> {
    params.validate()?;
    if centers.is_empty() {
        return Err(Error::InvalidParameter("no center samples".into()));
    }
    let need = params.support();
    for c in centers {
        if c.len() != params.dim {
            return Err(Error::DimensionMismatch {
                expected: params.dim,
                found: c.len(),
            });
        }
        for (axis, l) in grid.axes().iter().zip(c) {
            let (lo, hi) = (axis[0], axis[axis.len() - 1]);
            if l - lo < need || hi - l < need {
                return Err(Error::InvalidParameter(format!(
                    "insufficient grid support: center {l} needs [{}, {}] but grid spans [{lo}, {hi}]",
                    l - need,
                    l + need
                )));
            }
        }
    }
    let family = gaussian_family(params, Some(grid))?;
    let metrics = centers
        .iter()
        .map(|c| fs_pullback(&family, &ParamPoint::new(family.chart(), c.clone())?, s))
        .collect::<Result<Vec<_>>>()?;
    let n = params.dim;
    let diag: Vec<f64> = metrics
        .iter()
        .flat_map(|g| (0..n).map(move |i| g.get(i, i)))
        .collect();
    let g_ll = diag.iter().sum::<f64>() / diag.len() as f64;
    let translation_variation = diag
        .iter()
        .map(|d| (d - g_ll).abs() / g_ll)
        .fold(0.0, f64::max);
    let isotropy_error = metrics
        .iter()
        .flat_map(|g| (0..n).flat_map(move |i| (0..i).map(move |j| g.get(i, j).abs())))
        .fold(0.0, f64::max)
        / g_ll;
    Ok(GaussianReport {
        lambda: params.lambda,
        hbar: params.hbar,
        dim: n,
        g_ll,
        translation_variation,
        isotropy_error,
        constant: g_ll * params.lambda * params.lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centers_1d() -> Vec<Vec<f64>> {
        [-1.3, -0.2, 0.0, 0.37, 2.0]
            .iter()
            .map(|l| vec![*l])
            .collect()
    }

    #[test]
    fn translation_invariance_and_continuum_value() {
        let p = GaussianParams::default();
        let rep = gaussian_limit_check(&p, &centers_1d(), &Stencil::default()).unwrap();
        assert!(
            rep.translation_variation < 1e-8,
            "{}",
            rep.translation_variation
        );
        assert!((rep.g_ll - gaussian_metric_constant(&p)).abs() < 1e-8);
    }

    #[test]
    fn doubling_lambda_quarters_the_metric() {
        let s = Stencil::default();
        let g = |lambda: f64| {
            let p = GaussianParams {
                lambda,
                ..Default::default()
            };
            let c: Vec<Vec<f64>> = centers_1d().iter().map(|c| vec![c[0] * lambda]).collect();
            gaussian_limit_check(&p, &c, &s.scaled(lambda))
                .unwrap()
                .g_ll
        };
        let ratio = g(0.5) / g(1.0);
        assert!((ratio - 4.0).abs() < 4e-6);
    }

    #[test]
    fn hbar_enters_through_the_width() {
        let p = GaussianParams {
            hbar: 0.25,
            ..Default::default()
        };
        let rep = gaussian_limit_check(&p, &[vec![0.1]], &Stencil::default()).unwrap();
        assert!((rep.g_ll - 2.0).abs() < 1e-7);
    }

    #[test]
    fn three_dimensional_packet_is_isotropic() {
        let p = GaussianParams {
            dim: 3,
            ..Default::default()
        };
        let c = vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.2, 0.5]];
        let rep = gaussian_limit_check(&p, &c, &Stencil::default()).unwrap();
        assert!(rep.isotropy_error < 1e-6);
        assert!(rep.translation_variation < 1e-6);
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let p = GaussianParams::default();
        let grid = Arc::new(
            Grid::build(&[AxisSpec::trapezoid(-3.0, 3.0, 61)], Measure::Cartesian).unwrap(),
        );
        let err = gaussian_limit_check_on(&p, grid, &[vec![0.0]], &Stencil::default()).unwrap_err();
        assert!(err.to_string().contains("insufficient grid support"));
    }
}
