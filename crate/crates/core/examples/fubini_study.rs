//! Fubini–Study distance between states and its pullback onto a Bloch chart.

use num_complex::Complex64;
use qsgeom::families::{Family, ParamPoint, Stencil};
use qsgeom::geometry::fields::{bloch_family, round_sphere};
use qsgeom::geometry::MetricField;
use qsgeom::hilbert::{apply_phase, StateVector};
use qsgeom::metrics::{fs_distance_sq, fs_pullback};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let up = StateVector::basis(2, 0)?;
    let plus = StateVector::from_parts(&[1.0, 1.0], &[0.0, 0.0])?;
    let down = StateVector::basis(2, 1)?;
    println!("ds²(up, plus) = {:.6}", fs_distance_sq(&up, &plus)?);
    println!("ds²(up, down) = {:.6}", fs_distance_sq(&up, &down)?);
    // global phases and overall scale drop out
    let rotated = apply_phase(&plus, 1.3);
    let scaled = StateVector::new(
        plus.amplitudes()
            .iter()
            .map(|a| a * Complex64::new(0.0, 3.0))
            .collect(),
    )?;
    println!(
        "ds²(plus, e^iα plus) = {:.3e}",
        fs_distance_sq(&plus, &rotated)?
    );
    println!(
        "ds²(plus, 3i plus) = {:.3e}",
        fs_distance_sq(&plus, &scaled)?
    );

    // 4 g on the Bloch chart is the round unit sphere
    let bloch = bloch_family()?;
    let sphere = round_sphere()?;
    let s = Stencil::new(4, 1e-3)?;
    for (theta, phi) in [(0.4, 0.0), (1.2, 2.0), (2.5, 4.0)] {
        let p = ParamPoint::new(bloch.chart(), vec![theta, phi])?;
        let g = fs_pullback(&bloch, &p, &s)?.scaled(4.0);
        let exact = sphere.metric(&p)?;
        println!(
            "θ={theta:.1} φ={phi:.1}  4g = diag({:.8}, {:.8})  sin²θ = {:.8}  err {:.1e}",
            g.get(0, 0),
            g.get(1, 1),
            theta.sin().powi(2),
            (g.entries() - exact.entries()).abs().max()
        );
    }

    // finite distance against the infinitesimal line element
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let orders = qsgeom::verify::consistency_orders(&mut rng)?;
    let lo = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().copied().fold(0.0, f64::max);
    println!("ds² − 4 g(δ,δ) ~ |δ|^k over 20 random families: k ∈ [{lo:.3}, {hi:.3}]");
    Ok(())
}
