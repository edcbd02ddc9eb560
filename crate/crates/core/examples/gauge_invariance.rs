//! Local phase changes leave the ray-space metric alone but move the pointwise
//! configuration metric.

use std::sync::Arc;

use num_complex::Complex64;
use qsgeom::families::{
    Chart, DomainBox, Family, FieldFamily, ParamPoint, RayFamily, Stencil, Unit,
};
use qsgeom::hilbert::StateVector;
use qsgeom::metrics::{config_metric, fs_pullback, ConfigMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chart = Chart::numbered(2)?;
    let ray = RayFamily::new(
        Arc::clone(&chart),
        DomainBox::unbounded(2),
        |x: &[f64]| {
            StateVector::new(vec![
                Complex64::new(x[0].cos(), 0.2 * x[1]),
                Complex64::new(x[0].sin() * x[1].cos(), 0.5),
                Complex64::new(0.3, x[1].sin()),
            ])
        },
    )?;
    let p = ParamPoint::new(&chart, vec![0.4, -0.7])?;
    let s = Stencil::new(4, 1e-3)?;
    let g = fs_pullback(&ray, &p, &s)?;
    println!("g = {}", g.to_json());
    for k in [0.5, 2.0, 7.0] {
        let shifted = ray.gauge_transform(Arc::new(move |x: &[f64]| k * (x[0] + 2.0 * x[1])));
        let diff = fs_pullback(&shifted, &p, &s)?.max_abs_diff(&g)?;
        println!("α = {k}(x0 + 2 x1): max |Δg| = {diff:.2e}");
    }
    let wavy = ray.gauge_transform(Arc::new(|x: &[f64]| {
        (3.0 * x[0]).sin() * x[1] + x[1] * x[1]
    }));
    println!(
        "α = sin(3 x0) x1 + x1²: max |Δg| = {:.2e}",
        fs_pullback(&wavy, &p, &s)?.max_abs_diff(&g)?
    );

    // the configuration-space metric is not a ray-space object
    let rt = Chart::new(vec![("r", Unit::Length), ("t", Unit::Time)])?;
    let field = FieldFamily::new(Arc::clone(&rt), DomainBox::unbounded(2), |x: &[f64]| {
        Complex64::from_polar((-x[0]).exp(), -x[1])
    })?;
    let q = ParamPoint::named(&rt, &[("r", 1.0), ("t", 0.3)])?;
    let before = config_metric(&field, &q, &s, ConfigMode::AnalyticSquare)?;
    let after = config_metric(
        &field.gauge_transform(Arc::new(|x: &[f64]| 0.8 * x[0])),
        &q,
        &s,
        ConfigMode::AnalyticSquare,
    )?;
    println!("configuration metric before {}", before.to_json());
    println!("configuration metric after  {}", after.to_json());
    Ok(())
}
