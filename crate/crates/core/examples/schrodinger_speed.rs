//! Schrödinger evolution moves through ray space at speed 2ΔE/ħ.

use num_complex::Complex64;
use qsgeom::dynamics::{
    aa_speed_residual, energy_dispersion, evolve, fs_path_length, projected_trajectory,
    proper_time, Hamiltonian, ProjectedTrajectory,
};
use qsgeom::families::Stencil;
use qsgeom::geometry::fields::cp1_field;
use qsgeom::geometry::geodesic_residual;
use qsgeom::hilbert::StateVector;
use qsgeom::verify::{random_hamiltonian, random_state};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = random_hamiltonian(&mut rng, 6, 1.0)?;
    let psi = random_state(&mut rng, 6)?;
    let de = energy_dispersion(&h, &psi)?;
    println!(
        "ΔE = {de:.6}, expected speed 2ΔE/ħ = {:.6}",
        2.0 * de / h.hbar()
    );
    for dt in [1e-2, 1e-3, 1e-4] {
        println!(
            "dt = {dt:.0e}: |ds/dt − 2ΔE/ħ| = {:.3e}",
            aa_speed_residual(&h, &psi, dt)?
        );
    }

    let dt = 1e-3;
    let trace = evolve(&h, &psi, dt, 1000)?;
    let tau = proper_time(dt, de, h.hbar()) * (trace.len() - 1) as f64;
    println!(
        "path length {:.8}  ∫2ΔE dt/ħ {:.8}",
        fs_path_length(&trace)?,
        tau
    );
    println!("norm drift {:.2e}", trace.norm_drift());

    // two-level projections: equatorial motion is a great circle, tilted motion is not
    let two = Hamiltonian::diagonal(&[0.0, 1.0], 1.0)?;
    let fs = cp1_field(4.0, Stencil::default())?;
    for theta in [std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4] {
        let start = StateVector::new(vec![
            Complex64::new((0.5 * theta).cos(), 0.0),
            Complex64::new((0.5 * theta).sin(), 0.0),
        ])?;
        let trace = evolve(&two, &start, 0.01, 300)?;
        match projected_trajectory(&trace)? {
            ProjectedTrajectory::Path(path) => {
                let res = geodesic_residual(&path, &fs, &Stencil::default())?;
                println!(
                    "θ0 = {theta:.4}: geodesic residual {:.3e}",
                    res.iter().fold(0.0f64, |m, r| m.max(*r))
                );
            }
            ProjectedTrajectory::Stationary(p) => {
                println!("θ0 = {theta:.4}: stationary at {:?}", p.values())
            }
        }
    }
    let eigen = evolve(&two, &StateVector::basis(2, 1)?, 0.01, 10)?;
    if let ProjectedTrajectory::Stationary(_) = projected_trajectory(&eigen)? {
        println!("energy eigenstates do not move");
    }
    Ok(())
}
