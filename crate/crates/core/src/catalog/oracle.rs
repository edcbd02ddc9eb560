//! Closed-form metric coefficients of the hydrogen-like families and the
//! comparison against finite-difference metrics.
//!
//! With `Ψ = C₀ f e^{−iωt}` and `f` real, the analytic-square coefficients
//! are `g_μμ = (∂_μ f)² cos 2ωt` for the spatial coordinates and
//! `g_tt = −ω² f² cos 2ωt`. The gradients below are differentiated by hand.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use super::{dirac_gamma, hydrogen_chart, hydrogen_family, profile, FamilyId, HydrogenParams};
use crate::error::{Error, Result};
use crate::families::{Family, ParamPoint, Stencil, Unit};
use crate::metrics::{config_metric, config_tensor, ConfigMode, MetricMatrix};

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Spatial gradient of the profile `f`.
fn gradient(id: FamilyId, p: &HydrogenParams, x: &[f64]) -> Vec<f64> {
    let (c0, a0) = (p.c0, p.a0);
    let r = x[0];
    let half = (-r / (2.0 * a0)).exp();
    match id {
        FamilyId::Psi100 => vec![-(c0 / a0) * (-r / a0).exp()],
        FamilyId::Psi200 => vec![-(c0 / (4.0 * a0 * a0)) * (4.0 * a0 - r) * half],
        FamilyId::Psi210R => {
            let th = x[1];
            vec![
                c0 / a0 * (1.0 - r / (2.0 * a0)) * th.cos() * half,
                -c0 * (r / a0) * th.sin() * half,
            ]
        }
        FamilyId::Psi211R => {
            let (th, ph) = (x[1], x[2]);
            vec![
                c0 / a0 * (1.0 - r / (2.0 * a0)) * th.sin() * ph.cos() * half,
                c0 * (r / a0) * th.cos() * ph.cos() * half,
                -c0 * (r / a0) * th.sin() * ph.sin() * half,
            ]
        }
        FamilyId::DiracGroundR | FamilyId::DiracLimitR => {
            let g = dirac_gamma(id, p);
            let (th, ph) = (x[1], x[2]);
            let radial = c0 * (r / a0).powf(g - 1.0) * (-r / a0).exp();
            vec![
                ((g - 1.0) / r - 1.0 / a0) * radial * th.sin() * ph.sin(),
                radial * th.cos() * ph.sin(),
                radial * th.sin() * ph.cos(),
            ]
        }
        FamilyId::GaussianCoherent => unreachable!("not a hydrogen family"),
    }
}

/// Closed-form diagonal configuration metric (analytic-square mode).
pub fn oracle_metric(
    id: FamilyId,
    params: &HydrogenParams,
    p: &ParamPoint,
) -> Result<MetricMatrix> {
    let family = hydrogen_family(id, params)?;
    let chart = family.chart();
    if p.chart().names() != chart.names() {
        return Err(Error::ChartMismatch(format!(
            "{id} uses coordinates {:?}",
            chart.names()
        )));
    }
    // validates the point against the family domain
    family.eval(p)?;
    if let Some(phi) = p.get("phi") {
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::OutOfDomain {
                coord: "phi".into(),
                value: phi,
            });
        }
    }
    let x = p.values();
    let (space, t) = x.split_at(x.len() - 1);
    let cos2 = (2.0 * params.omega * t[0]).cos();
    let f = profile(id, params, space);
    let mut diag: Vec<f64> = gradient(id, params, space)
        .iter()
        .map(|d| d * d * cos2)
        .collect();
    diag.push(-params.omega.powi(2) * f * f * cos2);
    MetricMatrix::diagonal(std::sync::Arc::clone(chart), &diag)
}

/// Verification points: `r/a0 ∈ {0.5, 1, 2}` (without the `r = 2a0` node of
/// Psi200), `θ, φ ∈ {π/6, π/3}`, `t ∈ {0, 0.1/ω}`.
pub fn standard_grid(id: FamilyId, params: &HydrogenParams) -> Result<Vec<ParamPoint>> {
    params.validate()?;
    let chart = hydrogen_chart(id)?;
    let radii: &[f64] = if id == FamilyId::Psi200 {
        &[0.5, 1.0]
    } else {
        &[0.5, 1.0, 2.0]
    };
    let angles = [PI / 6.0, PI / 3.0];
    let times = [0.0, 0.1 / params.omega];
    let mut axes: Vec<Vec<f64>> = vec![radii.iter().map(|r| r * params.a0).collect()];
    for c in &chart.coords()[1..chart.dim() - 1] {
        debug_assert_eq!(c.unit, Unit::Angle);
        axes.push(angles.to_vec());
    }
    axes.push(times.to_vec());
    let mut points = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut q = prefix.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    points
        .into_iter()
        .map(|v| ParamPoint::new(&chart, v))
        .collect()
}

/// Order-4 stencil with steps `1e-4·a0` for `r`, `1e-4` for angles and
/// `1e-4/ω` for `t`.
pub fn standard_stencil(id: FamilyId, params: &HydrogenParams) -> Result<Stencil> {
    let chart = hydrogen_chart(id)?;
    let steps = chart
        .coords()
        .iter()
        .map(|c| match c.unit {
            Unit::Length => 1e-4 * params.a0,
            Unit::Time => 1e-4 / params.omega,
            _ => 1e-4,
        })
        .collect();
    Stencil::with_steps(4, steps)
}

/// One diagonal entry of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareEntry {
    pub point: usize,
    pub coord: String,
    pub numeric: f64,
    pub oracle: f64,
    pub rel_err: f64,
}

/// Finite-difference metric against the closed form over a point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub family: FamilyId,
    pub points: Vec<Vec<f64>>,
    /// Largest entry error relative to the largest oracle entry at its point.
    pub max_rel_err: f64,
    pub entries: Vec<CompareEntry>,
    /// Largest off-diagonal magnitude of the full tensor relative to the
    /// largest oracle entry; these terms are not part of the line element.
    pub max_offdiag: f64,
}

impl CompareReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Table with columns `point, coords…, entry, numeric, oracle, rel_err`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point");
        let names: Vec<&str> = self
            .entries
            .iter()
            .take_while(|e| e.point == 0)
            .map(|e| e.coord.as_str())
            .collect();
        for n in &names {
            let _ = write!(out, ",{n}");
        }
        out.push_str(",entry,numeric,oracle,rel_err\n");
        for e in &self.entries {
            let _ = write!(out, "{}", e.point);
            for v in &self.points[e.point] {
                let _ = write!(out, ",{v:.8e}");
            }
            let _ = writeln!(
                out,
                ",g_{0}{0},{1:.8e},{2:.8e},{3:.8e}",
                e.coord, e.numeric, e.oracle, e.rel_err
            );
        }
        out
    }
}

/// Compare [`config_metric`] in analytic-square mode with [`oracle_metric`].
pub fn compare(
    id: FamilyId,
    params: &HydrogenParams,
    points: &[ParamPoint],
    s: &Stencil,
) -> Result<CompareReport> {
    let family = hydrogen_family(id, params)?;
    let mut entries = Vec::new();
    let mut max_rel_err = 0.0f64;
    let mut max_offdiag = 0.0f64;
    for (k, p) in points.iter().enumerate() {
        let oracle = oracle_metric(id, params, p)?;
        let numeric = config_metric(&family, p, s, ConfigMode::AnalyticSquare)?;
        let full = config_tensor(&family, p, s, ConfigMode::AnalyticSquare)?;
        let scale = oracle.max_abs();
        if !(scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "oracle metric vanishes at {p}"
            )));
        }
        for (mu, c) in p.chart().coords().iter().enumerate() {
            let rel_err = (numeric.get(mu, mu) - oracle.get(mu, mu)).abs() / scale;
            max_rel_err = max_rel_err.max(rel_err);
            entries.push(CompareEntry {
                point: k,
                coord: c.name.clone(),
                numeric: numeric.get(mu, mu),
                oracle: oracle.get(mu, mu),
                rel_err,
            });
            for nu in 0..mu {
                max_offdiag = max_offdiag.max(full.get(mu, nu).abs() / scale);
            }
        }
    }
    Ok(CompareReport {
        family: id,
        points: points.iter().map(|p| p.values().to_vec()).collect(),
        max_rel_err,
        entries,
        max_offdiag,
    })
}

/// Distance of the Dirac-family metric from its `Zα → 0` limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracConvergence {
    pub zalphas: Vec<f64>,
    /// Largest entry difference relative to the largest limit entry per point.
    pub errors: Vec<f64>,
    /// `errors[k] / errors[k + 1]`.
    pub ratios: Vec<f64>,
}

/// Finite-difference metrics of DiracGroundR at each `Zα` against
/// DiracLimitR over `points`.
pub fn dirac_convergence(
    params: &HydrogenParams,
    zalphas: &[f64],
    points: &[ParamPoint],
    s: &Stencil,
) -> Result<DiracConvergence> {
    let limit = hydrogen_family(FamilyId::DiracLimitR, params)?;
    let reference = points
        .iter()
        .map(|p| config_metric(&limit, p, s, ConfigMode::AnalyticSquare))
        .collect::<Result<Vec<_>>>()?;
    let errors = zalphas
        .iter()
        .map(|&za| {
            let fam = hydrogen_family(
                FamilyId::DiracGroundR,
                &HydrogenParams {
                    zalpha: za,
                    ..*params
                },
            )?;
            points
                .iter()
                .zip(&reference)
                .try_fold(0.0f64, |worst, (p, g0)| {
                    let g = config_metric(&fam, p, s, ConfigMode::AnalyticSquare)?;
                    Ok(worst.max(g.max_abs_diff(g0)? / g0.max_abs()))
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(DiracConvergence {
        zalphas: zalphas.to_vec(),
        errors,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::signature;
    use std::f64::consts::E;

    fn point(id: FamilyId, x: &[f64]) -> ParamPoint {
        ParamPoint::new(&hydrogen_chart(id).unwrap(), x.to_vec()).unwrap()
    }

    #[test]
    fn psi100_closed_form_at_bohr_radius() {
        let g = oracle_metric(
            FamilyId::Psi100,
            &HydrogenParams::default(),
            &point(FamilyId::Psi100, &[1.0, 0.0]),
        )
        .unwrap();
        assert!((g.get(0, 0) - E.powi(-2)).abs() < 1e-15);
        assert!((g.get(1, 1) + E.powi(-2)).abs() < 1e-15);
    }

    #[test]
    fn psi211_closed_form_on_equator() {
        let p = point(FamilyId::Psi211R, &[1.0, PI / 2.0, 0.0, 0.0]);
        let g = oracle_metric(FamilyId::Psi211R, &HydrogenParams::default(), &p).unwrap();
        // the family carries e^{−r/2a0}, so the squares carry e^{−r/a0}
        assert!((g.get(0, 0) - 0.25 / E).abs() < 1e-15);
        assert!(g.get(1, 1).abs() < 1e-30);
        assert!(g.get(2, 2).abs() < 1e-30);
        assert!((g.get(3, 3) + 1.0 / E).abs() < 1e-15);
    }

    #[test]
    fn psi100_compare_on_three_by_three_grid() {
        let params = HydrogenParams::default();
        let pts: Vec<ParamPoint> = [0.5, 1.0, 2.0]
            .iter()
            .flat_map(|&r| [0.0, 0.1, 0.2].map(|t| point(FamilyId::Psi100, &[r, t])))
            .collect();
        let s = standard_stencil(FamilyId::Psi100, &params).unwrap();
        let rep = compare(FamilyId::Psi100, &params, &pts, &s).unwrap();
        assert!(rep.max_rel_err < 1e-6, "{}", rep.max_rel_err);
        assert_eq!(rep.entries.len(), 18);
    }

    #[test]
    fn every_hydrogen_family_matches_on_its_standard_grid() {
        let base = HydrogenParams {
            c0: 1.0,
            a0: 1.7,
            omega: 0.6,
            zalpha: 0.3,
        };
        for id in FamilyId::ALL.into_iter().filter(|id| id.is_hydrogen()) {
            let pts = standard_grid(id, &base).unwrap();
            let s = standard_stencil(id, &base).unwrap();
            let rep = compare(id, &base, &pts, &s).unwrap();
            assert!(rep.max_rel_err < 1e-6, "{id}: {}", rep.max_rel_err);
        }
    }

    #[test]
    fn standard_grid_sizes() {
        let p = HydrogenParams::default();
        assert_eq!(standard_grid(FamilyId::Psi100, &p).unwrap().len(), 6);
        assert_eq!(standard_grid(FamilyId::Psi200, &p).unwrap().len(), 4);
        assert_eq!(standard_grid(FamilyId::Psi210R, &p).unwrap().len(), 12);
        assert_eq!(standard_grid(FamilyId::Psi211R, &p).unwrap().len(), 24);
    }

    #[test]
    fn dirac_entries_share_the_radial_factor() {
        let p = HydrogenParams {
            zalpha: 0.3,
            ..Default::default()
        };
        let g = p.gamma();
        let (th, ph) = (0.9, 1.2);
        let g1 = oracle_metric(
            FamilyId::DiracGroundR,
            &p,
            &point(FamilyId::DiracGroundR, &[1.0, th, ph, 0.0]),
        )
        .unwrap();
        let g2 = oracle_metric(
            FamilyId::DiracGroundR,
            &p,
            &point(FamilyId::DiracGroundR, &[2.0, th, ph, 0.0]),
        )
        .unwrap();
        let predicted = 2f64.powf(-2.0 * (g - 1.0)) * (2.0f64).exp();
        // angular and temporal entries carry only r^{2(γ−1)} e^{−2r/a0}
        for mu in 1..4 {
            assert!((g1.get(mu, mu) / g2.get(mu, mu) - predicted).abs() < 1e-10 * predicted);
        }
        // the radial entry also carries ((γ−1)/r − 1/a0)²
        let radial = |r: f64| ((g - 1.0) / r - 1.0).powi(2);
        let ratio = g1.get(0, 0) / g2.get(0, 0);
        assert!((ratio - predicted * radial(1.0) / radial(2.0)).abs() < 1e-10 * ratio);
    }

    #[test]
    fn psi211_and_dirac_are_lorentzian_at_generic_points() {
        for (id, za) in [(FamilyId::Psi211R, 0.0), (FamilyId::DiracGroundR, 0.3)] {
            let p = HydrogenParams {
                zalpha: za,
                ..Default::default()
            };
            let fam = hydrogen_family(id, &p).unwrap();
            let s = standard_stencil(id, &p).unwrap();
            let q = point(
                id,
                &[
                    1.0,
                    std::f64::consts::FRAC_PI_3,
                    std::f64::consts::FRAC_PI_6,
                    0.0,
                ],
            );
            let g = config_metric(&fam, &q, &s, ConfigMode::AnalyticSquare).unwrap();
            assert_eq!(signature(&g, 1e-9).counts(), (3, 1, 0));
        }
    }

    #[test]
    fn coefficients_are_even_in_time() {
        let p = HydrogenParams {
            omega: 1.3,
            ..Default::default()
        };
        let a = oracle_metric(
            FamilyId::Psi210R,
            &p,
            &point(FamilyId::Psi210R, &[0.8, 0.7, 0.4]),
        )
        .unwrap();
        let b = oracle_metric(
            FamilyId::Psi210R,
            &p,
            &point(FamilyId::Psi210R, &[0.8, 0.7, -0.4]),
        )
        .unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-16);
    }

    #[test]
    fn psi210_is_a0_independent_in_scaled_coordinates() {
        // with ρ = r/a0 and fixed ωt, g_ρρ = a0² g_rr and g_θθ do not depend on a0
        let at = |a0: f64| {
            let p = HydrogenParams {
                a0,
                ..Default::default()
            };
            let g = oracle_metric(
                FamilyId::Psi210R,
                &p,
                &point(FamilyId::Psi210R, &[0.7 * a0, 0.5, 0.1]),
            )
            .unwrap();
            (g.get(0, 0) * a0 * a0, g.get(1, 1))
        };
        let (r1, t1) = at(1.0);
        let (r2, t2) = at(3.7);
        assert!((r1 - r2).abs() < 1e-15 && (t1 - t2).abs() < 1e-15);
    }

    #[test]
    fn oracle_rejects_points_outside_the_domain() {
        let p = HydrogenParams::default();
        let bad = point(FamilyId::Psi211R, &[1.0, 0.5, 7.0, 0.0]);
        assert!(oracle_metric(FamilyId::Psi211R, &p, &bad)
            .unwrap_err()
            .is_domain());
        let pole = point(FamilyId::Psi211R, &[1.0, 0.0, 1.0, 0.0]);
        assert!(oracle_metric(FamilyId::Psi211R, &p, &pole)
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn dirac_limit_converges_quadratically() {
        let p = HydrogenParams::default();
        let pts = standard_grid(FamilyId::DiracGroundR, &p).unwrap();
        let s = standard_stencil(FamilyId::DiracGroundR, &p).unwrap();
        let conv = dirac_convergence(&p, &[0.3, 0.15, 0.075], &pts, &s).unwrap();
        for r in &conv.ratios {
            assert!((r - 4.0).abs() < 0.8, "{:?}", conv.ratios);
        }
    }

    #[test]
    fn report_serializations() {
        let p = HydrogenParams::default();
        let pts = standard_grid(FamilyId::Psi100, &p).unwrap();
        let rep = compare(
            FamilyId::Psi100,
            &p,
            &pts,
            &standard_stencil(FamilyId::Psi100, &p).unwrap(),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        assert_eq!(v["family"], "Psi100");
        assert_eq!(v["points"].as_array().unwrap().len(), 6);
        assert!(v["max_rel_err"].is_number());
        let csv = rep.to_csv();
        assert_eq!(
            csv.lines().next().unwrap(),
            "point,r,t,entry,numeric,oracle,rel_err"
        );
        assert_eq!(csv.lines().count(), 13);
    }
}
