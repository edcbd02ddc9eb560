//! Metric coefficients of the hydrogen-like catalog against their closed forms.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use qsgeom::catalog::{
    compare, dirac_convergence, make_family, oracle_metric, standard_grid, standard_stencil,
    FamilyId, FamilyParams, HydrogenParams,
};
use qsgeom::families::{Family, ParamPoint};
use qsgeom::metrics::{config_metric, signature, ConfigMode, DEFAULT_ZERO_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = HydrogenParams::default();
    let dirac = HydrogenParams {
        zalpha: 0.3,
        ..params
    };
    for id in FamilyId::ALL.into_iter().filter(|id| id.is_hydrogen()) {
        let prm = if matches!(id, FamilyId::DiracGroundR | FamilyId::DiracLimitR) {
            dirac
        } else {
            params
        };
        let report = compare(
            id,
            &prm,
            &standard_grid(id, &prm)?,
            &standard_stencil(id, &prm)?,
        )?;
        println!(
            "{id:<13} {} points  max rel err {:.2e}",
            report.points.len(),
            report.max_rel_err
        );
    }

    // ds² at the Bohr radius for the ground state
    let psi100 = make_family(FamilyId::Psi100, &FamilyParams::Hydrogen(params))?;
    let field = psi100.as_field().ok_or("Psi100 is a field family")?;
    let p = ParamPoint::named(field.chart(), &[("r", 1.0), ("t", 0.0)])?;
    let s = standard_stencil(FamilyId::Psi100, &params)?;
    println!(
        "Psi100 at r = a0: {}",
        config_metric(field, &p, &s, ConfigMode::AnalyticSquare)?.to_json()
    );

    let psi211 = make_family(FamilyId::Psi211R, &FamilyParams::Hydrogen(params))?;
    let field = psi211.as_field().ok_or("Psi211R is a field family")?;
    let chart = field.chart();
    let p = ParamPoint::named(
        chart,
        &[
            ("r", 1.0),
            ("theta", FRAC_PI_3),
            ("phi", FRAC_PI_6),
            ("t", 0.0),
        ],
    )?;
    let g = oracle_metric(FamilyId::Psi211R, &params, &p)?;
    println!(
        "Psi211R closed form {}  signature {}",
        g.to_json(),
        signature(&g, DEFAULT_ZERO_TOL)
    );

    let id = FamilyId::DiracLimitR;
    let conv = dirac_convergence(
        &params,
        &[0.2, 0.1, 0.05, 0.025],
        &standard_grid(id, &params)?,
        &standard_stencil(id, &params)?,
    )?;
    for (za, e) in conv.zalphas.iter().zip(&conv.errors) {
        println!("Zα = {za:<6} |Dirac − Schrödinger| = {e:.3e}");
    }
    println!(
        "successive ratios {:.3?} (4 for quadratic convergence)",
        conv.ratios
    );
    Ok(())
}
