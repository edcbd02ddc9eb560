//! Property suites behind `qsgeom verify`.
//!
//! Every check produces a [`CheckRecord`]. Randomized checks draw from a
//! ChaCha8 stream seeded by the caller; each suite uses its own stream, so a
//! suite gives the same records whether it runs alone or inside `all`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{
    bohr_radius, compare, dirac_convergence, gaussian_limit_check, hydrogen_chart, hydrogen_family,
    standard_grid, standard_stencil, FamilyId, GaussianParams, HydrogenParams,
};
use crate::dynamics::{
    aa_speed_residual, energy_dispersion, evolve, fs_path_length, projected_trajectory,
    proper_time, Hamiltonian, ProjectedTrajectory,
};
use crate::error::{Error, Result};
use crate::families::{
    gauge_transform, Chart, DomainBox, Family, FieldFamily, ParamPoint, PhaseFn, RayFamily,
    Stencil, Unit,
};
use crate::geometry::fields::{cp1_field, cpn_affine_family, cpn_field, polar_chart};
use crate::geometry::{best_fit_lambda, curvature, geodesic_residual, MetricField};
use crate::hilbert::{normalize, StateVector};
use crate::metrics::{
    config_metric, fs_distance_sq, fs_pullback, kg_invariant_residual, line_element, signature,
    ConfigMode, KleinGordon,
};
use crate::tolerance::Tolerances;

/// Named group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fs,
    Gauge,
    Hydrogen,
    Curvature,
    Dynamics,
    All,
}

impl Suite {
    /// Suites run by `All`, in output order.
    pub const EACH: [Suite; 5] = [
        Suite::Fs,
        Suite::Gauge,
        Suite::Hydrogen,
        Suite::Curvature,
        Suite::Dynamics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fs => "fs",
            Suite::Gauge => "gauge",
            Suite::Hydrogen => "hydrogen",
            Suite::Curvature => "curvature",
            Suite::Dynamics => "dynamics",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        match self {
            Suite::Fs => 1,
            Suite::Gauge => 2,
            Suite::Hydrogen => 3,
            Suite::Curvature => 4,
            Suite::Dynamics => 5,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fs" => Suite::Fs,
            "gauge" => Suite::Gauge,
            "hydrogen" => Suite::Hydrogen,
            "curvature" => Suite::Curvature,
            "dynamics" => Suite::Dynamics,
            "all" => Suite::All,
            _ => return Err(Error::InvalidParameter(format!("unknown suite `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Direction of a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// `None` when the computation itself failed.
    pub measured: Option<f64>,
    pub tolerance: f64,
    #[serde(skip)]
    pub bound: Bound,
    #[serde(skip)]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Bound::AtMost)
    }

    pub fn at_least(name: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Bound::AtLeast)
    }

    fn new(name: &str, measured: f64, tolerance: f64, bound: Bound) -> Self {
        let ok = match bound {
            Bound::AtMost => measured <= tolerance,
            Bound::AtLeast => measured >= tolerance,
        };
        Self {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            tolerance,
            bound,
            error: None,
        }
    }

    fn failed(name: &str, tolerance: f64, bound: Bound, err: &Error) -> Self {
        Self {
            name: name.to_string(),
            status: Status::Fail,
            measured: None,
            tolerance,
            bound,
            error: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn record(name: &str, tolerance: f64, bound: Bound, measured: Result<f64>) -> CheckRecord {
    match measured {
        Ok(v) => CheckRecord::new(name, v, tolerance, bound),
        Err(e) => CheckRecord::failed(name, tolerance, bound, &e),
    }
}

/// Records of `suite` (every suite, in order, for [`Suite::All`]).
pub fn run_suite(suite: Suite, seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    if suite == Suite::All {
        return Suite::EACH
            .iter()
            .flat_map(|s| run_suite(*s, seed, tol))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.stream());
    match suite {
        Suite::Fs => {
            let mut out = vec![fs_consistency(&mut rng, tol), cp1_sphere_metric(tol)];
            out.extend(gaussian_limit(tol));
            out.extend(klein_gordon(&mut rng, tol));
            out
        }
        Suite::Gauge => gauge_checks(&mut rng, tol),
        Suite::Hydrogen => {
            let mut out = hydrogen_compare(tol);
            out.extend(hydrogen_signature(tol));
            out.push(dirac_limit(tol));
            out.push(bohr_radius_check());
            out
        }
        Suite::Curvature => {
            let mut out = sphere_curvature(tol);
            out.extend(cp2_einstein(&mut rng, tol));
            out
        }
        Suite::Dynamics => {
            let mut out = aa_speed(&mut rng, tol);
            out.extend(geodesic_lemma(tol));
            out.extend(unitarity_and_proper_time(&mut rng, tol));
            out
        }
        Suite::All => unreachable!(),
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| random_complex(rng)).collect()
}

/// Random normalized state of dimension `dim`.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Result<StateVector> {
    normalize(&StateVector::new(random_vector(rng, dim))?)
}

/// Random Hermitian `dim × dim` matrix with entries in the unit square.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, dim: usize, hbar: f64) -> Result<Hamiltonian> {
    let a = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    Hamiltonian::new((&a + a.adjoint()) * Complex64::new(0.5, 0.0), hbar)
}

/// Two-parameter family `ψ(x) = a + b x₁ + c x₂ + d x₁² + e x₁x₂ + f x₂²`
/// with random coefficient vectors of dimension `dim`.
pub fn random_ray_family(rng: &mut ChaCha8Rng, dim: usize) -> Result<RayFamily<StateVector>> {
    let coeffs: Vec<Vec<Complex64>> = (0..6).map(|_| random_vector(rng, dim)).collect();
    RayFamily::new(
        Chart::numbered(2)?,
        DomainBox::unbounded(2),
        move |x: &[f64]| {
            let basis = [1.0, x[0], x[1], x[0] * x[0], x[0] * x[1], x[1] * x[1]];
            StateVector::new(
                (0..dim)
                    .map(|k| basis.iter().zip(&coeffs).map(|(b, c)| c[k] * *b).sum())
                    .collect(),
            )
        },
    )
}

/// Step sizes of the second-order consistency check.
pub const CONSISTENCY_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Least-squares slope of `log|ds² − 4 g_p(δ,δ)|` against `log|δ|` over
/// [`CONSISTENCY_STEPS`] along `direction`, with `g` the pullback at `p`.
pub fn consistency_order(
    family: &RayFamily<StateVector>,
    p: &ParamPoint,
    direction: &[f64],
    s: &Stencil,
) -> Result<f64> {
    let g = fs_pullback(family, p, s)?;
    let base = family.eval(p)?;
    let pts = CONSISTENCY_STEPS
        .iter()
        .map(|&d| {
            let dx: Vec<f64> = direction.iter().map(|v| v * d).collect();
            let q = ParamPoint::new(
                p.chart(),
                p.values().iter().zip(&dx).map(|(a, b)| a + b).collect(),
            )?;
            let resid =
                (fs_distance_sq(&base, &family.eval(&q)?)? - 4.0 * line_element(&g, &dx)?).abs();
            Ok((d.ln(), resid.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Measured orders for 20 random 4-level families at random points and
/// directions.
pub fn consistency_orders(rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let s = Stencil::default();
    (0..20)
        .map(|_| {
            let family = random_ray_family(rng, 4)?;
            let p = ParamPoint::new(
                family.chart(),
                vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
            )?;
            let angle: f64 = rng.gen_range(0.0..2.0 * PI);
            consistency_order(&family, &p, &[angle.cos(), angle.sin()], &s)
        })
        .collect()
}

fn fs_consistency(rng: &mut ChaCha8Rng, tol: &Tolerances) -> CheckRecord {
    let orders = consistency_orders(rng).map(|o| o.into_iter().fold(f64::INFINITY, f64::min));
    record(
        "fs.consistency_order_min",
        tol.fs_consistency_order,
        Bound::AtLeast,
        orders,
    )
}

/// 25 points of the Bloch chart away from the poles.
pub fn bloch_points() -> Result<Vec<ParamPoint>> {
    let chart = polar_chart()?;
    let thetas = [0.3, 0.9, FRAC_PI_2, 2.2, PI - 0.3];
    let phis = [0.0, 1.1, 2.5, 3.9, 5.6];
    thetas
        .iter()
        .flat_map(|t| phis.iter().map(move |p| vec![*t, *p]))
        .map(|v| ParamPoint::new(&chart, v))
        .collect()
}

fn cp1_sphere_metric(tol: &Tolerances) -> CheckRecord {
    let run = || -> Result<f64> {
        let field = cp1_field(4.0, Stencil::default())?;
        bloch_points()?.iter().try_fold(0.0f64, |worst, p| {
            let g = field.metric(p)?;
            let th = p.values()[0];
            let round = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, th.sin().powi(2)]);
            Ok(worst.max((g.entries() - round).amax()))
        })
    };
    record(
        "fs.cp1_round_sphere_metric",
        tol.cp1_sphere_metric,
        Bound::AtMost,
        run(),
    )
}

fn gaussian_limit(tol: &Tolerances) -> Vec<CheckRecord> {
    let s = Stencil::default();
    let centers: Vec<Vec<f64>> = [-1.5, -0.35, 0.0, 0.8, 2.1]
        .iter()
        .map(|l| vec![*l])
        .collect();
    let reports: Result<Vec<_>> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&lambda| {
            gaussian_limit_check(
                &GaussianParams {
                    lambda,
                    hbar: 1.0,
                    dim: 1,
                },
                &centers,
                &s,
            )
        })
        .collect();
    let translation = reports
        .as_ref()
        .map(|r| {
            r.iter()
                .map(|x| x.translation_variation)
                .fold(0.0, f64::max)
        })
        .map_err(clone_err);
    let scaling = reports
        .as_ref()
        .map(|r| {
            r.windows(2)
                .map(|w| (w[0].g_ll / w[1].g_ll / 4.0 - 1.0).abs())
                .fold(0.0, f64::max)
        })
        .map_err(clone_err);
    let iso = gaussian_limit_check(
        &GaussianParams {
            lambda: 1.0,
            hbar: 1.0,
            dim: 3,
        },
        &[vec![0.0, 0.0, 0.0], vec![0.4, -0.3, 0.25]],
        &s,
    )
    .map(|r| r.isotropy_error.max(r.translation_variation));
    vec![
        record(
            "fs.gaussian_translation_invariance",
            tol.gaussian_translation,
            Bound::AtMost,
            translation,
        ),
        record(
            "fs.gaussian_inverse_square_scaling",
            tol.gaussian_scaling,
            Bound::AtMost,
            scaling,
        ),
        record(
            "fs.gaussian_isotropy_3d",
            tol.gaussian_scaling,
            Bound::AtMost,
            iso,
        ),
    ]
}

fn clone_err(e: &Error) -> Error {
    Error::InvalidParameter(e.to_string())
}

fn spacetime_chart() -> Result<Arc<Chart>> {
    Chart::new(vec![
        ("t", Unit::Time),
        ("x", Unit::Length),
        ("y", Unit::Length),
        ("z", Unit::Length),
    ])
}

fn plane_wave(chart: &Arc<Chart>, k: [f64; 3], omega: f64) -> Result<FieldFamily> {
    FieldFamily::new(Arc::clone(chart), DomainBox::unbounded(4), move |x| {
        Complex64::from_polar(1.0, k[0] * x[1] + k[1] * x[2] + k[2] * x[3] - omega * x[0])
    })
}

fn klein_gordon(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<CheckRecord> {
    let kg = KleinGordon {
        mass: 0.8,
        c: 1.0,
        hbar: 1.0,
    };
    let m2 = (kg.mass * kg.c / kg.hbar).powi(2);
    let s = Stencil::default();
    let mut on = Ok(0.0f64);
    let mut off = Ok(0.0f64);
    let run = |rng: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let chart = spacetime_chart()?;
        let k = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let k2: f64 = k.iter().map(|v| v * v).sum();
        let p = ParamPoint::new(&chart, (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect())?;
        let on_shell = plane_wave(&chart, k, kg.c * (k2 + m2).sqrt())?;
        let massless = plane_wave(&chart, k, kg.c * k2.sqrt())?;
        let r_on = kg_invariant_residual(&on_shell, &p, kg, &s)?;
        // a massless wave misses the mass shell by exactly (m₀c/ħ)²|Ψ|²
        let r_off = (kg_invariant_residual(&massless, &p, kg, &s)?
            - m2 * massless.eval(&p)?.norm_sqr())
        .abs();
        Ok((r_on, r_off))
    };
    for _ in 0..5 {
        match run(rng) {
            Ok((a, b)) => {
                on = on.map(|v| v.max(a));
                off = off.map(|v| v.max(b));
            }
            Err(e) => {
                on = Err(clone_err(&e));
                off = Err(e);
                break;
            }
        }
    }
    vec![
        record(
            "fs.klein_gordon_on_shell",
            tol.klein_gordon,
            Bound::AtMost,
            on,
        ),
        record(
            "fs.klein_gordon_off_shell",
            tol.klein_gordon,
            Bound::AtMost,
            off,
        ),
    ]
}

fn gauge_checks(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<CheckRecord> {
    let s = Stencil::default();
    let mut out = Vec::new();
    let mut families = Vec::new();
    for _ in 0..3 {
        let fam = random_ray_family(rng, 4);
        let p = vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        families.push(fam.map(|f| (f, p)));
    }
    let change = |alpha: PhaseFn| -> Result<f64> {
        families.iter().try_fold(0.0f64, |worst, entry| {
            let (fam, p) = entry.as_ref().map_err(clone_err)?;
            let p = ParamPoint::new(fam.chart(), p.clone())?;
            let g0 = fs_pullback(fam, &p, &s)?;
            let g1 = fs_pullback(&gauge_transform(fam, Arc::clone(&alpha)), &p, &s)?;
            Ok(worst.max(g0.max_abs_diff(&g1)?))
        })
    };
    for k in [0.5, 2.0, 7.0] {
        let alpha: PhaseFn = Arc::new(move |x: &[f64]| k * (x[0] + x[1]));
        out.push(record(
            &format!("gauge.fs_pullback_linear_k{k}"),
            tol.gauge_invariance,
            Bound::AtMost,
            change(alpha),
        ));
    }
    let (a, b, c) = (
        rng.gen_range(0.5..3.0),
        rng.gen_range(0.5..3.0),
        rng.gen_range(-1.0..1.0),
    );
    let alpha: PhaseFn =
        Arc::new(move |x: &[f64]| a * (b * x[0]).sin() + c * x[0] * x[1] + x[1] * x[1]);
    out.push(record(
        "gauge.fs_pullback_random_smooth",
        tol.gauge_invariance,
        Bound::AtMost,
        change(alpha),
    ));

    let variation = || -> Result<f64> {
        let params = HydrogenParams::default();
        let fam = hydrogen_family(FamilyId::Psi100, &params)?;
        let shifted = gauge_transform(&fam, Arc::new(|x: &[f64]| x[0]));
        let st = standard_stencil(FamilyId::Psi100, &params)?;
        standard_grid(FamilyId::Psi100, &params)?
            .iter()
            .try_fold(0.0f64, |worst, p| {
                let g0 = config_metric(&fam, p, &st, ConfigMode::AnalyticSquare)?;
                let g1 = config_metric(&shifted, p, &st, ConfigMode::AnalyticSquare)?;
                Ok(worst.max(g0.max_abs_diff(&g1)?))
            })
    };
    out.push(record(
        "gauge.config_metric_not_invariant",
        tol.gauge_variation_min,
        Bound::AtLeast,
        variation(),
    ));
    out
}

fn hydrogen_compare(tol: &Tolerances) -> Vec<CheckRecord> {
    let params = HydrogenParams::default();
    let cases = [
        (FamilyId::Psi100, params),
        (FamilyId::Psi200, params),
        (FamilyId::Psi210R, params),
        (FamilyId::Psi211R, params),
        (
            FamilyId::DiracGroundR,
            HydrogenParams {
                zalpha: 0.3,
                ..params
            },
        ),
        (FamilyId::DiracLimitR, params),
    ];
    cases
        .iter()
        .map(|(id, p)| {
            let run = || -> Result<f64> {
                Ok(
                    compare(*id, p, &standard_grid(*id, p)?, &standard_stencil(*id, p)?)?
                        .max_rel_err,
                )
            };
            record(
                &format!("hydrogen.compare_{id}"),
                tol.hydrogen_rel_err,
                Bound::AtMost,
                run(),
            )
        })
        .collect()
}

/// Eight points with `t = 0` away from every node of Psi211R and
/// DiracGroundR.
pub fn generic_signature_points(id: FamilyId) -> Result<Vec<ParamPoint>> {
    let chart = hydrogen_chart(id)?;
    let mut pts = Vec::new();
    for r in [0.7, 1.4] {
        for th in [0.6, 1.2] {
            for ph in [0.4, 1.0] {
                pts.push(ParamPoint::new(&chart, vec![r, th, ph, 0.0])?);
            }
        }
    }
    Ok(pts)
}

fn hydrogen_signature(tol: &Tolerances) -> Vec<CheckRecord> {
    [(FamilyId::Psi211R, 0.0), (FamilyId::DiracGroundR, 0.3)]
        .iter()
        .map(|&(id, zalpha)| {
            let run = || -> Result<f64> {
                let params = HydrogenParams {
                    zalpha,
                    ..Default::default()
                };
                let fam = hydrogen_family(id, &params)?;
                let st = standard_stencil(id, &params)?;
                let mut wrong = 0usize;
                for p in generic_signature_points(id)? {
                    let g = config_metric(&fam, &p, &st, ConfigMode::AnalyticSquare)?;
                    if signature(&g, tol.signature_zero).counts() != (3, 1, 0) {
                        wrong += 1;
                    }
                }
                Ok(wrong as f64)
            };
            record(
                &format!("hydrogen.signature_3_1_0_{id}"),
                0.0,
                Bound::AtMost,
                run(),
            )
        })
        .collect()
}

fn dirac_limit(tol: &Tolerances) -> CheckRecord {
    let run = || -> Result<f64> {
        let params = HydrogenParams::default();
        let pts = standard_grid(FamilyId::DiracGroundR, &params)?;
        let st = standard_stencil(FamilyId::DiracGroundR, &params)?;
        let conv = dirac_convergence(&params, &[0.3, 0.15, 0.075], &pts, &st)?;
        Ok(conv
            .ratios
            .iter()
            .map(|r| (r / tol.dirac_ratio_expected - 1.0).abs())
            .fold(0.0, f64::max))
    };
    record(
        "hydrogen.dirac_limit_quadratic",
        tol.dirac_ratio_slack,
        Bound::AtMost,
        run(),
    )
}

fn bohr_radius_check() -> CheckRecord {
    record(
        "hydrogen.bohr_radius_fine_structure",
        1e-12,
        Bound::AtMost,
        bohr_radius(1.0, 1.0 / 137.0, 1.0, 1.0).map(|a| (a - 68.5).abs()),
    )
}

fn sphere_curvature(tol: &Tolerances) -> Vec<CheckRecord> {
    let s = Stencil::default();
    let run = || -> Result<(f64, f64)> {
        let field = cp1_field(4.0, s.clone())?;
        let chart = polar_chart()?;
        let pts = [[0.6, 0.2], [1.2, 2.0], [FRAC_PI_2, 4.0], [2.4, 5.5]]
            .iter()
            .map(|v| ParamPoint::new(&chart, v.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let worst = pts.iter().try_fold(0.0f64, |w, p| {
            Ok::<_, Error>(w.max((curvature(&field, p, &s, None)?.scalar - 2.0).abs()))
        })?;
        let fit = best_fit_lambda(&field, &pts, &s)?;
        Ok((
            worst,
            if fit.two_dimensional {
                fit.lambda.abs()
            } else {
                f64::INFINITY
            },
        ))
    };
    let res = run();
    let (r, l) = match &res {
        Ok((a, b)) => (Ok(*a), Ok(*b)),
        Err(e) => (Err(clone_err(e)), Err(clone_err(e))),
    };
    vec![
        record(
            "curvature.cp1_scalar_curvature_2",
            tol.sphere_scalar_curvature,
            Bound::AtMost,
            r,
        ),
        record(
            "curvature.cp1_lambda_two_dimensional",
            0.0,
            Bound::AtMost,
            l,
        ),
    ]
}

/// Twenty CP(2) affine-chart points with coordinates in `[−1, 1]`.
pub fn cp2_samples(rng: &mut ChaCha8Rng) -> Result<Vec<ParamPoint>> {
    let chart = Arc::clone(cpn_affine_family(2)?.chart());
    (0..20)
        .map(|_| ParamPoint::new(&chart, (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect()
}

/// Per-sample Einstein constants `R/4` and the largest spread of the
/// eigenvalues of `g⁻¹R` within one sample, relative to its constant.
pub fn cp2_einstein_constants(samples: &[ParamPoint], s: &Stencil) -> Result<(Vec<f64>, f64)> {
    let field = cpn_field(2, 1.0, s.clone())?;
    let mut ks = Vec::new();
    let mut spread = 0.0f64;
    for p in samples {
        let rep = curvature(&field, p, s, None)?;
        let k = rep.einstein_constant();
        let (lo, hi) = rep
            .ricci_ratios
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                (a.min(*v), b.max(*v))
            });
        spread = spread.max((hi - lo) / k.abs());
        ks.push(k);
    }
    Ok((ks, spread))
}

fn cp2_einstein(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<CheckRecord> {
    let s = Stencil::default();
    let samples = cp2_samples(rng);
    let constants = samples
        .as_ref()
        .map_err(clone_err)
        .and_then(|pts| cp2_einstein_constants(pts, &s));
    let constancy = constants.as_ref().map_err(clone_err).map(|(ks, _)| {
        let n = ks.len() as f64;
        let mean = ks.iter().sum::<f64>() / n;
        let var = ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / n;
        var.sqrt() / mean.abs()
    });
    let isotropy = constants
        .as_ref()
        .map_err(clone_err)
        .map(|(_, spread)| *spread);
    let fits = samples.as_ref().map_err(clone_err).and_then(|pts| {
        let field = cpn_field(2, 1.0, s.clone())?;
        Ok((
            best_fit_lambda(&field, pts, &s)?,
            best_fit_lambda(&field, pts, &s)?,
        ))
    });
    let (lambda, rerun, residual) = match &fits {
        Ok((a, b)) => (
            Ok(a.lambda),
            Ok((a.lambda - b.lambda).abs()),
            Ok(a.max_relative_residual),
        ),
        Err(e) => (Err(clone_err(e)), Err(clone_err(e)), Err(clone_err(e))),
    };
    vec![
        record(
            "curvature.cp2_einstein_constant_spread",
            tol.einstein_constancy,
            Bound::AtMost,
            constancy,
        ),
        record(
            "curvature.cp2_ricci_isotropy",
            tol.einstein_constancy,
            Bound::AtMost,
            isotropy,
        ),
        record("curvature.cp2_lambda_positive", 0.0, Bound::AtLeast, lambda),
        record(
            "curvature.cp2_einstein_residual",
            tol.einstein_constancy,
            Bound::AtMost,
            residual,
        ),
        record(
            "curvature.cp2_lambda_rerun",
            tol.lambda_reproducibility,
            Bound::AtMost,
            rerun,
        ),
    ]
}

fn aa_speed(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<CheckRecord> {
    let run = |rng: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let mut worst = 0.0f64;
        let mut ratio = f64::INFINITY;
        for k in 0..10 {
            let dim = 2 + k % 7;
            let h = random_hamiltonian(rng, dim, 1.0)?;
            let psi = random_state(rng, dim)?;
            let r1 = aa_speed_residual(&h, &psi, 1e-4)?;
            let r2 = aa_speed_residual(&h, &psi, 5e-5)?;
            worst = worst.max(r1);
            ratio = ratio.min(r1 / r2);
        }
        Ok((worst, ratio))
    };
    let res = run(rng);
    let (w, r) = match &res {
        Ok((a, b)) => (Ok(*a), Ok(*b)),
        Err(e) => (Err(clone_err(e)), Err(clone_err(e))),
    };
    vec![
        record("dynamics.aa_speed_residual", tol.aa_speed, Bound::AtMost, w),
        record(
            "dynamics.aa_speed_shrink_ratio",
            tol.aa_shrink_ratio,
            Bound::AtLeast,
            r,
        ),
    ]
}

/// Geodesic residual range `(min, max)` of the Bloch-sphere image of the
/// evolution under `diag(0, 1)` starting from colatitude `theta0`.
pub fn projected_residual(theta0: f64) -> Result<(f64, f64)> {
    let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0)?;
    let psi = StateVector::new(vec![
        Complex64::new((0.5 * theta0).cos(), 0.0),
        Complex64::new((0.5 * theta0).sin(), 0.0),
    ])?;
    let trace = evolve(&h, &psi, 0.01, 300)?;
    let ProjectedTrajectory::Path(path) = projected_trajectory(&trace)? else {
        return Err(Error::InvalidParameter("evolution is stationary".into()));
    };
    let field = cp1_field(4.0, Stencil::default())?;
    let res = geodesic_residual(&path, &field, &Stencil::default())?;
    Ok(res.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(*r), hi.max(*r))
    }))
}

fn geodesic_lemma(tol: &Tolerances) -> Vec<CheckRecord> {
    vec![
        record(
            "dynamics.equatorial_geodesic_residual",
            tol.geodesic_residual_max,
            Bound::AtMost,
            projected_residual(FRAC_PI_2).map(|r| r.1),
        ),
        record(
            "dynamics.tilted_non_geodesic_residual",
            tol.non_geodesic_residual_min,
            Bound::AtLeast,
            projected_residual(2.0 * FRAC_PI_8).map(|r| r.0),
        ),
    ]
}

fn unitarity_and_proper_time(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<CheckRecord> {
    let run = |rng: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let h = random_hamiltonian(rng, 6, 1.0)?;
        let psi = random_state(rng, 6)?;
        let long = evolve(&h, &psi, 0.01, 10_000)?;
        let dt = 1e-3;
        let short = evolve(&h, &psi, dt, 1000)?;
        let de = energy_dispersion(&h, &psi)?;
        let tau = proper_time(dt, de, h.hbar()) * (short.len() - 1) as f64;
        Ok((long.norm_drift(), (tau - fs_path_length(&short)?).abs()))
    };
    let res = run(rng);
    let (n, p) = match &res {
        Ok((a, b)) => (Ok(*a), Ok(*b)),
        Err(e) => (Err(clone_err(e)), Err(clone_err(e))),
    };
    vec![
        record(
            "dynamics.unitarity_norm_drift",
            tol.unitarity,
            Bound::AtMost,
            n,
        ),
        record(
            "dynamics.proper_time_path_length",
            tol.proper_time_length,
            Bound::AtMost,
            p,
        ),
    ]
}
