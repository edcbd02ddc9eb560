//! The configuration metric of a plane wave reproduces the Klein–Gordon mass
//! shell: −Ψ*□Ψ = (m₀c/ħ)²|Ψ|².

use std::sync::Arc;

use num_complex::Complex64;
use qsgeom::families::{Chart, DomainBox, FieldFamily, ParamPoint, Stencil, Unit};
use qsgeom::metrics::{kg_invariant_residual, KleinGordon};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chart = Chart::new(vec![
        ("t", Unit::Time),
        ("x", Unit::Length),
        ("y", Unit::Length),
        ("z", Unit::Length),
    ])?;
    let kg = KleinGordon {
        mass: 0.8,
        c: 1.0,
        hbar: 1.0,
    };
    let k = [0.6, -0.3, 1.1];
    let k2: f64 = k.iter().map(|v| v * v).sum();
    let p = ParamPoint::new(&chart, vec![0.2, 0.1, -0.4, 0.7])?;
    let s = Stencil::new(4, 1e-3)?;
    for (label, omega) in [
        ("on shell", (k2 + kg.mass * kg.mass).sqrt()),
        ("massless", k2.sqrt()),
    ] {
        let wave = FieldFamily::new(
            Arc::clone(&chart),
            DomainBox::unbounded(4),
            move |x: &[f64]| {
                Complex64::from_polar(1.0, k[0] * x[1] + k[1] * x[2] + k[2] * x[3] - omega * x[0])
            },
        )?;
        println!(
            "{label:<9} ω = {omega:.6}: residual {:.3e}",
            kg_invariant_residual(&wave, &p, kg, &s)?
        );
    }
    println!("(m₀c/ħ)² = {:.6}", (kg.mass * kg.c / kg.hbar).powi(2));
    Ok(())
}
