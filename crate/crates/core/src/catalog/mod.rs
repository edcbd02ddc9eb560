//! Worked-example wavefunction families with closed-form metric coefficients.
//!
//! The hydrogen-like families are the reduced, un-normalized forms
//! `Ψ = C₀ f(r, θ, φ) e^{−iωt}`; the Gaussian coherent family is a ray
//! family over the center of a wave packet sampled on a grid.

mod gaussian;
mod oracle;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::{Chart, DomainBox, FieldFamily, Interval, RayFamily, Unit};
use crate::hilbert::GridState;

pub use gaussian::{
    gaussian_family, gaussian_grid, gaussian_limit_check, gaussian_limit_check_on,
    gaussian_metric_constant, GaussianParams, GaussianReport,
};
pub use oracle::{
    compare, dirac_convergence, oracle_metric, standard_grid, standard_stencil, CompareEntry,
    CompareReport, DiracConvergence,
};

/// Catalog member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Psi100,
    Psi200,
    Psi210R,
    Psi211R,
    DiracGroundR,
    DiracLimitR,
    GaussianCoherent,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::Psi100,
        FamilyId::Psi200,
        FamilyId::Psi210R,
        FamilyId::Psi211R,
        FamilyId::DiracGroundR,
        FamilyId::DiracLimitR,
        FamilyId::GaussianCoherent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Psi100 => "Psi100",
            FamilyId::Psi200 => "Psi200",
            FamilyId::Psi210R => "Psi210R",
            FamilyId::Psi211R => "Psi211R",
            FamilyId::DiracGroundR => "DiracGroundR",
            FamilyId::DiracLimitR => "DiracLimitR",
            FamilyId::GaussianCoherent => "GaussianCoherent",
        }
    }

    pub fn is_hydrogen(self) -> bool {
        self != FamilyId::GaussianCoherent
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Case-insensitive; accepts the short forms `psi210`, `psi211`,
    /// `dirac`, `dirac-limit` and `gaussian` as well.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_'))
            .collect::<String>()
            .to_lowercase();
        Ok(match key.as_str() {
            "psi100" => FamilyId::Psi100,
            "psi200" => FamilyId::Psi200,
            "psi210" | "psi210r" => FamilyId::Psi210R,
            "psi211" | "psi211r" => FamilyId::Psi211R,
            "dirac" | "diracground" | "diracgroundr" => FamilyId::DiracGroundR,
            "diraclimit" | "diraclimitr" => FamilyId::DiracLimitR,
            "gaussian" | "gaussiancoherent" => FamilyId::GaussianCoherent,
            _ => return Err(Error::InvalidParameter(format!("unknown family `{s}`"))),
        })
    }
}

/// Parameters of the hydrogen-like families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenParams {
    /// Overall amplitude.
    pub c0: f64,
    /// Bohr radius.
    pub a0: f64,
    /// Level frequency.
    pub omega: f64,
    /// Coupling `Zα`, used by the Dirac family only.
    pub zalpha: f64,
}

impl Default for HydrogenParams {
    fn default() -> Self {
        Self {
            c0: 1.0,
            a0: 1.0,
            omega: 1.0,
            zalpha: 0.0,
        }
    }
}

impl HydrogenParams {
    /// `γ = √(1 − (Zα)²)`.
    pub fn gamma(&self) -> f64 {
        (1.0 - self.zalpha * self.zalpha).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0 > 0.0) || !self.a0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a0 must be positive, got {}",
                self.a0
            )));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if !(0.0..1.0).contains(&self.zalpha) {
            return Err(Error::InvalidParameter(format!(
                "Zalpha must lie in [0, 1), got {}",
                self.zalpha
            )));
        }
        if !self.c0.is_finite() {
            return Err(Error::InvalidParameter("C0 must be finite".into()));
        }
        Ok(())
    }
}

/// Parameters of any catalog family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    Hydrogen(HydrogenParams),
    Gaussian(GaussianParams),
}

/// A catalog family: a spacetime amplitude or a ray family.
#[derive(Clone)]
pub enum CatalogFamily {
    Field(FieldFamily),
    Ray(RayFamily<GridState>),
}

impl CatalogFamily {
    pub fn as_field(&self) -> Option<&FieldFamily> {
        match self {
            CatalogFamily::Field(f) => Some(f),
            CatalogFamily::Ray(_) => None,
        }
    }

    pub fn as_ray(&self) -> Option<&RayFamily<GridState>> {
        match self {
            CatalogFamily::Ray(r) => Some(r),
            CatalogFamily::Field(_) => None,
        }
    }
}

/// Build any catalog family.
pub fn make_family(id: FamilyId, params: &FamilyParams) -> Result<CatalogFamily> {
    match (id, params) {
        (FamilyId::GaussianCoherent, FamilyParams::Gaussian(g)) => {
            Ok(CatalogFamily::Ray(gaussian_family(g, None)?))
        }
        (FamilyId::GaussianCoherent, _) => Err(Error::InvalidParameter(
            "GaussianCoherent needs Gaussian parameters".into(),
        )),
        (id, FamilyParams::Hydrogen(h)) => Ok(CatalogFamily::Field(hydrogen_family(id, h)?)),
        (id, _) => Err(Error::InvalidParameter(format!(
            "{id} needs hydrogen parameters"
        ))),
    }
}

/// Smallest admissible `r/a0` for the Dirac families, whose `r^{γ−1}`
/// factor is singular at the origin.
pub const DIRAC_R_FLOOR: f64 = 0.05;

/// Largest admissible `r/a0`.
pub const R_MAX: f64 = 10.0;

/// Chart of a hydrogen-like family: `(r, t)`, `(r, theta, t)` or
/// `(r, theta, phi, t)`.
pub fn hydrogen_chart(id: FamilyId) -> Result<Arc<Chart>> {
    let (r, th, ph, t) = (
        ("r", Unit::Length),
        ("theta", Unit::Angle),
        ("phi", Unit::Angle),
        ("t", Unit::Time),
    );
    match id {
        FamilyId::Psi100 | FamilyId::Psi200 => Chart::new(vec![r, t]),
        FamilyId::Psi210R => Chart::new(vec![r, th, t]),
        FamilyId::Psi211R | FamilyId::DiracGroundR | FamilyId::DiracLimitR => {
            Chart::new(vec![r, th, ph, t])
        }
        FamilyId::GaussianCoherent => Err(Error::InvalidParameter(
            "GaussianCoherent is not a hydrogen family".into(),
        )),
    }
}

/// Domain of a hydrogen-like family. `φ` is periodic and left unbounded so
/// stencils can straddle `φ = 0`.
fn hydrogen_domain(id: FamilyId, p: &HydrogenParams) -> DomainBox {
    let r = match id {
        FamilyId::DiracGroundR | FamilyId::DiracLimitR => {
            Interval::closed(DIRAC_R_FLOOR * p.a0, R_MAX * p.a0)
        }
        _ => Interval::closed(0.0, R_MAX * p.a0),
    };
    let theta = Interval::open(0.0, PI);
    let mut iv = vec![r];
    match id {
        FamilyId::Psi100 | FamilyId::Psi200 => {}
        FamilyId::Psi210R => iv.push(theta),
        _ => iv.extend([theta, Interval::unbounded()]),
    }
    iv.push(Interval::unbounded());
    DomainBox::new(iv)
}

/// Effective `γ` of a Dirac family (`1` for the limit family).
fn dirac_gamma(id: FamilyId, p: &HydrogenParams) -> f64 {
    if id == FamilyId::DiracLimitR {
        1.0
    } else {
        p.gamma()
    }
}

/// Real spatial profile `f` with `Ψ = f e^{−iωt}`; `x` excludes `t`.
pub(crate) fn profile(id: FamilyId, p: &HydrogenParams, x: &[f64]) -> f64 {
    let (c0, a0) = (p.c0, p.a0);
    let r = x[0];
    match id {
        FamilyId::Psi100 => c0 * (-r / a0).exp(),
        FamilyId::Psi200 => c0 * (1.0 - r / (2.0 * a0)) * (-r / (2.0 * a0)).exp(),
        FamilyId::Psi210R => c0 * (r / a0) * x[1].cos() * (-r / (2.0 * a0)).exp(),
        FamilyId::Psi211R => c0 * (r / a0) * x[1].sin() * x[2].cos() * (-r / (2.0 * a0)).exp(),
        FamilyId::DiracGroundR | FamilyId::DiracLimitR => {
            let g = dirac_gamma(id, p);
            c0 * (r / a0).powf(g - 1.0) * (-r / a0).exp() * x[1].sin() * x[2].sin()
        }
        FamilyId::GaussianCoherent => unreachable!("not a hydrogen family"),
    }
}

/// Hydrogen-like amplitude `Ψ(r, …, t)`.
pub fn hydrogen_family(id: FamilyId, params: &HydrogenParams) -> Result<FieldFamily> {
    params.validate()?;
    let chart = hydrogen_chart(id)?;
    let domain = hydrogen_domain(id, params);
    let p = *params;
    FieldFamily::new(chart, domain, move |x: &[f64]| {
        let (space, t) = x.split_at(x.len() - 1);
        Complex64::from_polar(1.0, -p.omega * t[0]) * profile(id, &p, space)
    })
}

/// Bohr-radius scale `ħ/(2 m c Zα)`.
pub fn bohr_radius(mass: f64, zalpha: f64, hbar: f64, c: f64) -> Result<f64> {
    if zalpha == 0.0 {
        return Err(Error::OutOfDomain {
            coord: "Zalpha".into(),
            value: zalpha,
        });
    }
    if !(mass > 0.0) || !(zalpha > 0.0) || !(hbar > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter(
            "bohr_radius needs positive inputs".into(),
        ));
    }
    Ok(hbar / (2.0 * mass * c * zalpha))
}
