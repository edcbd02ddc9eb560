//! Ricci and Einstein data of the unit sphere and of CP(2).

use qsgeom::families::{Family, ParamPoint, Stencil};
use qsgeom::geometry::fields::{cpn_affine_family, cpn_field, round_sphere};
use qsgeom::geometry::{best_fit_lambda, curvature, MetricField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = Stencil::new(4, 1e-3)?;
    let sphere = round_sphere()?;
    for theta in [0.5, 1.2, 2.4] {
        let p = ParamPoint::new(sphere.chart(), vec![theta, 1.0])?;
        let r = curvature(&sphere, &p, &s, None)?;
        println!("S²  θ = {theta}: R = {:.8}", r.scalar);
    }

    let cp2 = cpn_field(2, 1.0, s.clone())?;
    let chart = cpn_affine_family(2)?.chart().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<ParamPoint> = (0..6)
        .map(|_| ParamPoint::new(&chart, (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect::<Result<_, _>>()?;
    for p in &pts {
        let r = curvature(&cp2, p, &s, None)?;
        println!(
            "CP(2) R = {:.6}  Ricci/g = {:.6}  ratio spread {:.1e}",
            r.scalar,
            r.einstein_constant(),
            r.ricci_ratios.iter().fold(0.0f64, |m, v| m.max(v.abs()))
                - r.ricci_ratios
                    .iter()
                    .fold(f64::INFINITY, |m, v| m.min(v.abs()))
        );
    }
    let fit = best_fit_lambda(&cp2, &pts, &s)?;
    println!(
        "G + Λg = 0 with Λ = {:.6}, worst residual {:.2e}",
        fit.lambda, fit.max_relative_residual
    );
    println!("metric dimension {}", cp2.chart().dim());
    Ok(())
}
