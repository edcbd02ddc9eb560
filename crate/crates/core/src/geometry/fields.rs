//! Standard metric fields: flat space, the round sphere and complex
//! projective spaces with the Fubini–Study pullback.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FnMetricField, PullbackField};
use crate::error::Result;
use crate::families::{Chart, DomainBox, Interval, RayFamily, Stencil, Unit};
use crate::hilbert::StateVector;

/// Identity metric on `dim` dimensionless coordinates.
pub fn euclidean(dim: usize) -> Result<FnMetricField> {
    FnMetricField::new(
        Chart::numbered(dim)?,
        DomainBox::unbounded(dim),
        move |_| DMatrix::identity(dim, dim),
    )
}

/// Polar chart `(θ, φ)` with `θ ∈ (0, π)`.
pub fn polar_chart() -> Result<std::sync::Arc<Chart>> {
    Chart::new(vec![("theta", Unit::Angle), ("phi", Unit::Angle)])
}

fn polar_domain() -> DomainBox {
    DomainBox::new(vec![Interval::open(0.0, PI), Interval::unbounded()])
}

/// `dθ² + sin²θ dφ²`.
pub fn round_sphere() -> Result<FnMetricField> {
    FnMetricField::new(polar_chart()?, polar_domain(), |x| {
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, x[0].sin().powi(2)])
    })
}

/// Bloch parametrization `(cos θ/2, e^{iφ} sin θ/2)` of CP(1).
pub fn bloch_family() -> Result<RayFamily<StateVector>> {
    RayFamily::new(polar_chart()?, DomainBox::unbounded(2), |x: &[f64]| {
        StateVector::new(vec![
            Complex64::new((0.5 * x[0]).cos(), 0.0),
            Complex64::from_polar((0.5 * x[0]).sin(), x[1]),
        ])
    })
}

/// `scale ×` Fubini–Study pullback on the Bloch chart; `scale = 4` gives the
/// round unit sphere.
pub fn cp1_field(scale: f64, stencil: Stencil) -> Result<PullbackField<StateVector>> {
    PullbackField::new(bloch_family()?, stencil, scale, polar_domain())
}

/// Affine chart of CP(N): `(1, z₁, …, z_N)` with `z_a = x_a + i y_a`, chart
/// coordinates ordered `x1, y1, x2, y2, …`.
pub fn cpn_affine_family(n: usize) -> Result<RayFamily<StateVector>> {
    let names: Vec<String> = (1..=n)
        .flat_map(|a| [format!("x{a}"), format!("y{a}")])
        .collect();
    let chart = Chart::new(
        names
            .iter()
            .map(|s| (s.as_str(), Unit::Dimensionless))
            .collect(),
    )?;
    RayFamily::new(chart, DomainBox::unbounded(2 * n), move |x: &[f64]| {
        let mut amps = Vec::with_capacity(n + 1);
        amps.push(Complex64::new(1.0, 0.0));
        amps.extend(x.chunks(2).map(|p| Complex64::new(p[0], p[1])));
        StateVector::new(amps)
    })
}

/// `scale ×` Fubini–Study pullback on the affine chart of CP(N).
pub fn cpn_field(n: usize, scale: f64, stencil: Stencil) -> Result<PullbackField<StateVector>> {
    PullbackField::new(
        cpn_affine_family(n)?,
        stencil,
        scale,
        DomainBox::unbounded(2 * n),
    )
}
