//! Gaussian wave packets translated by l have ds² = dl²/(2ħλ²).

use qsgeom::catalog::{gaussian_limit_check, gaussian_metric_constant, GaussianParams};
use qsgeom::families::Stencil;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = Stencil::new(4, 1e-3)?;
    let centers: Vec<Vec<f64>> = [-1.0, -0.3, 0.0, 0.4, 1.0]
        .iter()
        .map(|c| vec![*c])
        .collect();
    for lambda in [0.5, 1.0, 2.0] {
        let params = GaussianParams {
            lambda,
            ..GaussianParams::default()
        };
        let r = gaussian_limit_check(&params, &centers, &s)?;
        println!(
            "λ = {lambda}: g_ll = {:.10}  1/(2ħλ²) = {:.10}  λ²g_ll = {:.10}  variation across centers {:.1e}",
            r.g_ll,
            gaussian_metric_constant(&params),
            r.constant,
            r.translation_variation
        );
    }
    let params = GaussianParams {
        lambda: 0.8,
        hbar: 1.0,
        dim: 3,
    };
    let centers = vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.2, 0.1]];
    let r = gaussian_limit_check(&params, &centers, &Stencil::new(4, 1e-2)?)?;
    println!(
        "3-D packet: g_ll = {:.8}, isotropy error {:.1e}",
        r.g_ll, r.isotropy_error
    );
    Ok(())
}
