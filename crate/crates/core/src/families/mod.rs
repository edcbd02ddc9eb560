//! Parametrized families of states and their chart derivatives.
//!
//! A [`RayFamily`] maps chart coordinates to a whole state (parameters of a
//! ray in state space); a [`FieldFamily`] maps spacetime points to a single
//! amplitude. Both are immutable closures over shared data and can be gauge
//! transformed or pulled back through a change of chart.

mod stencil;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{normalize, ComplexScalar, QuantumState};

pub use stencil::Stencil;

/// Physical kind of a chart coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Length,
    Time,
    Angle,
    Dimensionless,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coord {
    pub name: String,
    pub unit: Unit,
}

/// Ordered, uniquely named chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<Coord>,
}

impl Chart {
    pub fn new(coords: Vec<(&str, Unit)>) -> Result<Arc<Self>> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "a chart needs at least one coordinate".into(),
            ));
        }
        for (i, (name, _)) in coords.iter().enumerate() {
            if coords[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate coordinate `{name}`"
                )));
            }
        }
        Ok(Arc::new(Self {
            coords: coords
                .into_iter()
                .map(|(name, unit)| Coord {
                    name: name.to_string(),
                    unit,
                })
                .collect(),
        }))
    }

    /// `dim` dimensionless coordinates named `x0, x1, ...`.
    pub fn numbered(dim: usize) -> Result<Arc<Self>> {
        let names: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        Self::new(
            names
                .iter()
                .map(|n| (n.as_str(), Unit::Dimensionless))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn names(&self) -> Vec<&str> {
        self.coords.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }
}

/// A point of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    chart: Arc<Chart>,
    values: Vec<f64>,
}

impl ParamPoint {
    pub fn new(chart: &Arc<Chart>, values: Vec<f64>) -> Result<Self> {
        if values.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coordinate `{}` is not finite",
                chart.coords[i].name
            )));
        }
        Ok(Self {
            chart: Arc::clone(chart),
            values,
        })
    }

    /// Build from `(name, value)` pairs covering every coordinate.
    pub fn named(chart: &Arc<Chart>, pairs: &[(&str, f64)]) -> Result<Self> {
        for (name, _) in pairs {
            if chart.index_of(name).is_none() {
                return Err(Error::InvalidParameter(format!(
                    "unknown coordinate `{name}`"
                )));
            }
        }
        let values = chart
            .coords
            .iter()
            .map(|c| {
                pairs
                    .iter()
                    .find(|(n, _)| *n == c.name)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("missing coordinate `{}`", c.name))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, values)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.chart.index_of(name).map(|i| self.values[i])
    }
}

impl fmt::Display for ParamPoint {
    /// Angles are shown reduced to `[0, 2π)`; stored values are untouched.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chart
            .coords
            .iter()
            .zip(&self.values)
            .map(|(c, v)| {
                let shown = if c.unit == Unit::Angle {
                    v.rem_euclid(TAU)
                } else {
                    *v
                };
                format!("{}={}", c.name, shown)
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One coordinate range; endpoints may be open or closed, infinite for none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn unbounded() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        }
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        };
        let below = if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        };
        above && below
    }
}

/// Product of per-coordinate intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    intervals: Vec<Interval>,
}

impl DomainBox {
    pub fn new(intervals: Vec<Interval>) -> Self {
        Self { intervals }
    }

    pub fn unbounded(dim: usize) -> Self {
        Self {
            intervals: vec![Interval::unbounded(); dim],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    /// First coordinate outside its interval, if any.
    pub fn violation(&self, x: &[f64]) -> Option<usize> {
        self.intervals
            .iter()
            .zip(x)
            .position(|(iv, v)| !iv.contains(*v))
    }

    pub(crate) fn check(&self, chart: &Chart, x: &[f64]) -> Result<()> {
        match self.violation(x) {
            Some(i) => Err(Error::OutOfDomain {
                coord: chart.coords[i].name.clone(),
                value: x[i],
            }),
            None => Ok(()),
        }
    }

    pub(crate) fn check_stencil(&self, chart: &Chart, x: &[f64]) -> Result<()> {
        match self.violation(x) {
            Some(i) => Err(Error::StencilExitsDomain {
                coord: chart.coords[i].name.clone(),
                value: x[i],
            }),
            None => Ok(()),
        }
    }
}

/// Phase function `α(p)` used by gauge transformations.
pub type PhaseFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

type RayEval<S> = Arc<dyn Fn(&[f64]) -> Result<S> + Send + Sync>;
type AmpEval = Arc<dyn Fn(&[f64]) -> Result<ComplexScalar> + Send + Sync>;

/// Chart coordinates → state.
pub struct RayFamily<S> {
    chart: Arc<Chart>,
    domain: DomainBox,
    eval: RayEval<S>,
}

impl<S> Clone for RayFamily<S> {
    fn clone(&self) -> Self {
        Self {
            chart: Arc::clone(&self.chart),
            domain: self.domain.clone(),
            eval: Arc::clone(&self.eval),
        }
    }
}

impl<S: QuantumState + 'static> RayFamily<S> {
    pub fn new(
        chart: Arc<Chart>,
        domain: DomainBox,
        eval: impl Fn(&[f64]) -> Result<S> + Send + Sync + 'static,
    ) -> Result<Self> {
        if domain.dim() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: domain.dim(),
            });
        }
        Ok(Self {
            chart,
            domain,
            eval: Arc::new(eval),
        })
    }

    pub fn eval(&self, p: &ParamPoint) -> Result<S> {
        check_chart(&self.chart, p)?;
        self.domain.check(&self.chart, p.values())?;
        (self.eval)(p.values())
    }

    pub(crate) fn eval_raw(&self, x: &[f64]) -> Result<S> {
        self.domain.check_stencil(&self.chart, x)?;
        (self.eval)(x)
    }

    /// Family of unit-norm representatives.
    pub fn normalized(&self) -> Self {
        let inner = Arc::clone(&self.eval);
        Self {
            chart: Arc::clone(&self.chart),
            domain: self.domain.clone(),
            eval: Arc::new(move |x: &[f64]| normalize(&inner(x)?)),
        }
    }
}

/// Spacetime point → amplitude.
#[derive(Clone)]
pub struct FieldFamily {
    chart: Arc<Chart>,
    domain: DomainBox,
    amp: AmpEval,
}

impl FieldFamily {
    pub fn new(
        chart: Arc<Chart>,
        domain: DomainBox,
        amp: impl Fn(&[f64]) -> ComplexScalar + Send + Sync + 'static,
    ) -> Result<Self> {
        if domain.dim() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: domain.dim(),
            });
        }
        Ok(Self {
            chart,
            domain,
            amp: Arc::new(move |x: &[f64]| Ok(amp(x))),
        })
    }

    pub fn eval(&self, p: &ParamPoint) -> Result<ComplexScalar> {
        check_chart(&self.chart, p)?;
        self.domain.check(&self.chart, p.values())?;
        self.finite((self.amp)(p.values())?)
    }

    pub(crate) fn eval_raw(&self, x: &[f64]) -> Result<ComplexScalar> {
        self.domain.check_stencil(&self.chart, x)?;
        self.finite((self.amp)(x)?)
    }

    fn finite(&self, z: ComplexScalar) -> Result<ComplexScalar> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(Error::InvalidState("family amplitude is not finite".into()))
        }
    }
}

fn check_chart(chart: &Arc<Chart>, p: &ParamPoint) -> Result<()> {
    if Arc::ptr_eq(chart, p.chart()) || **chart == **p.chart() {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!(
            "point on ({}) given to a family on ({})",
            p.chart().names().join(", "),
            chart.names().join(", ")
        )))
    }
}

/// Operations common to both family kinds.
pub trait Family: Sized {
    fn chart(&self) -> &Arc<Chart>;
    fn domain(&self) -> &DomainBox;

    /// Multiply every amplitude by `e^{iα(p)}`.
    fn gauge_transform(&self, alpha: PhaseFn) -> Self;

    /// Compose with a change of chart.
    fn reparametrize(&self, change: &Reparametrization) -> Result<Self>;
}

impl<S: QuantumState + 'static> Family for RayFamily<S> {
    fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn gauge_transform(&self, alpha: PhaseFn) -> Self {
        let inner = Arc::clone(&self.eval);
        Self {
            chart: Arc::clone(&self.chart),
            domain: self.domain.clone(),
            eval: Arc::new(move |x: &[f64]| {
                Ok(inner(x)?.scale(Complex64::from_polar(1.0, alpha(x))))
            }),
        }
    }

    fn reparametrize(&self, change: &Reparametrization) -> Result<Self> {
        let old_chart = Arc::clone(&self.chart);
        let old_domain = self.domain.clone();
        let inner = Arc::clone(&self.eval);
        let map = Arc::clone(&change.map);
        Ok(Self {
            chart: Arc::clone(&change.chart),
            domain: change.domain.clone(),
            eval: Arc::new(move |x: &[f64]| {
                let old = map(x);
                old_domain.check(&old_chart, &old)?;
                inner(&old)
            }),
        })
    }
}

impl Family for FieldFamily {
    fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn gauge_transform(&self, alpha: PhaseFn) -> Self {
        let inner = Arc::clone(&self.amp);
        Self {
            chart: Arc::clone(&self.chart),
            domain: self.domain.clone(),
            amp: Arc::new(move |x: &[f64]| Ok(inner(x)? * Complex64::from_polar(1.0, alpha(x)))),
        }
    }

    fn reparametrize(&self, change: &Reparametrization) -> Result<Self> {
        let old_chart = Arc::clone(&self.chart);
        let old_domain = self.domain.clone();
        let inner = Arc::clone(&self.amp);
        let map = Arc::clone(&change.map);
        Ok(Self {
            chart: Arc::clone(&change.chart),
            domain: change.domain.clone(),
            amp: Arc::new(move |x: &[f64]| {
                let old = map(x);
                old_domain.check(&old_chart, &old)?;
                inner(&old)
            }),
        })
    }
}

/// `gauge_transform(fam, α)`.
pub fn gauge_transform<F: Family>(family: &F, alpha: PhaseFn) -> F {
    family.gauge_transform(alpha)
}

/// `reparametrize(fam, φ, J)`.
pub fn reparametrize<F: Family>(family: &F, change: &Reparametrization) -> Result<F> {
    family.reparametrize(change)
}

type CoordMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type JacobianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// New chart `x′ ↦ x` together with its Jacobian `∂x^α/∂x′^μ`.
#[derive(Clone)]
pub struct Reparametrization {
    chart: Arc<Chart>,
    domain: DomainBox,
    map: CoordMap,
    jacobian: JacobianFn,
}

impl Reparametrization {
    /// `jacobian(x′)` returns a matrix with rows indexed by old coordinates and
    /// columns by new ones.
    pub fn new(
        chart: Arc<Chart>,
        domain: DomainBox,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        jacobian: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart,
            domain,
            map: Arc::new(map),
            jacobian: Arc::new(jacobian),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// Image of a new-chart point on the old chart.
    pub fn old_point(&self, old_chart: &Arc<Chart>, p: &ParamPoint) -> Result<ParamPoint> {
        check_chart(&self.chart, p)?;
        ParamPoint::new(old_chart, (self.map)(p.values()))
    }

    pub fn jacobian(&self, p: &ParamPoint) -> Result<DMatrix<f64>> {
        check_chart(&self.chart, p)?;
        Ok((self.jacobian)(p.values()))
    }
}

fn shifted(x: &[f64], mu: usize, delta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[mu] += delta;
    y
}

fn check_index(chart: &Chart, mu: usize) -> Result<()> {
    if mu < chart.dim() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "coordinate index {mu} out of range for dim {}",
            chart.dim()
        )))
    }
}

/// `∂Ψ/∂x^μ` of a field family by central differences.
pub fn partial_field(
    f: &FieldFamily,
    p: &ParamPoint,
    mu: usize,
    s: &Stencil,
) -> Result<ComplexScalar> {
    check_chart(&f.chart, p)?;
    check_index(&f.chart, mu)?;
    let h = s.step(mu);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(k, w) in s.central_pairs() {
        let plus = f.eval_raw(&shifted(p.values(), mu, k as f64 * h))?;
        let minus = f.eval_raw(&shifted(p.values(), mu, -k as f64 * h))?;
        acc += (plus - minus) * w;
    }
    Ok(acc / h)
}

/// `∂²Ψ/∂x^μ∂x^ν` of a field family.
pub fn second_partial_field(
    f: &FieldFamily,
    p: &ParamPoint,
    mu: usize,
    nu: usize,
    s: &Stencil,
) -> Result<ComplexScalar> {
    check_chart(&f.chart, p)?;
    check_index(&f.chart, mu)?;
    check_index(&f.chart, nu)?;
    let x = p.values();
    if mu == nu {
        let h = s.step(mu);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, w) in s.second_weights() {
            acc += f.eval_raw(&shifted(x, mu, k as f64 * h))? * w;
        }
        return Ok(acc / (h * h));
    }
    let (hm, hn) = (s.step(mu), s.step(nu));
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, wi) in s.first_weights() {
        let xi = shifted(x, mu, i as f64 * hm);
        for &(j, wj) in s.first_weights() {
            acc += f.eval_raw(&shifted(&xi, nu, j as f64 * hn))? * (wi * wj);
        }
    }
    Ok(acc / (hm * hn))
}

/// `|∂_μΨ⟩` of a ray family, componentwise central differences.
pub fn partial_ray<S: QuantumState + 'static>(
    r: &RayFamily<S>,
    p: &ParamPoint,
    mu: usize,
    s: &Stencil,
) -> Result<S> {
    check_chart(&r.chart, p)?;
    check_index(&r.chart, mu)?;
    let h = s.step(mu);
    let mut acc: Option<S> = None;
    for &(k, w) in s.central_pairs() {
        let plus = r.eval_raw(&shifted(p.values(), mu, k as f64 * h))?;
        let minus = r.eval_raw(&shifted(p.values(), mu, -k as f64 * h))?;
        let diff = plus.axpy(Complex64::new(-1.0, 0.0), &minus)?;
        let c = Complex64::new(w / h, 0.0);
        acc = Some(match acc {
            None => diff.scale(c),
            Some(sum) => sum.axpy(c, &diff)?,
        });
    }
    Ok(acc.expect("stencils have at least one node pair"))
}

/// `∇_μ|Ψ⟩ = |∂_μΨ⟩ − |Ψ⟩⟨Ψ|∂_μΨ⟩` for unit-norm representatives.
pub fn covariant_partial_ray<S: QuantumState + 'static>(
    r: &RayFamily<S>,
    p: &ParamPoint,
    mu: usize,
    s: &Stencil,
) -> Result<S> {
    let unit = r.normalized();
    let psi = unit.eval(p)?;
    let d = partial_ray(&unit, p, mu, s)?;
    let overlap = psi.inner(&d)?;
    d.axpy(-overlap, &psi)
}
