//! Curvature and geodesics of metric fields.
//!
//! A [`MetricField`] assigns a [`MetricMatrix`] to every point of a chart
//! domain. Christoffel symbols come from central differences of the metric,
//! curvature from nested differences of the Christoffel symbols (outer step
//! ten times the inner one).

mod curvature;
pub mod fields;
mod geodesic;

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::families::{Chart, DomainBox, ParamPoint, RayFamily, Stencil};
use crate::hilbert::QuantumState;
use crate::metrics::{fs_pullback, MetricMatrix};

pub use curvature::{
    best_fit_lambda, christoffel, curvature, Christoffel, CurvatureReport, LambdaFit,
};
pub use geodesic::{
    geodesic_integrate, geodesic_residual, unit_tangent, GeodesicPath, GeodesicSample,
    IntegrationError,
};

/// Largest admissible condition number of a metric being inverted.
pub const MAX_CONDITION: f64 = 1e12;

/// Field of metric matrices over a chart domain.
pub trait MetricField: Send + Sync {
    fn chart(&self) -> &Arc<Chart>;

    fn domain(&self) -> &DomainBox;

    /// Raw metric entries at chart coordinates `x` (domain already checked).
    fn entries_at(&self, x: &[f64]) -> Result<DMatrix<f64>>;

    /// Metric at a point, with the domain checked.
    fn metric(&self, p: &ParamPoint) -> Result<MetricMatrix> {
        self.domain().check(self.chart(), p.values())?;
        MetricMatrix::new(Arc::clone(self.chart()), self.entries_at(p.values())?)
    }

    /// Metric at coordinates reached by a stencil; leaving the domain is an
    /// error rather than an extrapolation.
    fn metric_in_stencil(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain().check_stencil(self.chart(), x)?;
        let g = self.entries_at(x)?;
        Ok((&g + g.transpose()) * 0.5)
    }
}

type EntriesFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// Metric field given by a closure.
#[derive(Clone)]
pub struct FnMetricField {
    chart: Arc<Chart>,
    domain: DomainBox,
    f: EntriesFn,
}

impl FnMetricField {
    pub fn new(
        chart: Arc<Chart>,
        domain: DomainBox,
        f: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
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
            f: Arc::new(f),
        })
    }
}

impl MetricField for FnMetricField {
    fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn entries_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = (self.f)(x);
        let n = self.chart.dim();
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.nrows(),
            });
        }
        Ok(g)
    }
}

/// `scale ×` Fubini–Study pullback of a ray family.
pub struct PullbackField<S> {
    family: RayFamily<S>,
    stencil: Stencil,
    scale: f64,
    domain: DomainBox,
}

impl<S: QuantumState + 'static> PullbackField<S> {
    /// Field on the family's chart; `domain` restricts where it is sampled
    /// (the pullback stencil must still fit inside the family's own domain).
    pub fn new(
        family: RayFamily<S>,
        stencil: Stencil,
        scale: f64,
        domain: DomainBox,
    ) -> Result<Self> {
        use crate::families::Family;
        if domain.dim() != family.chart().dim() {
            return Err(Error::DimensionMismatch {
                expected: family.chart().dim(),
                found: domain.dim(),
            });
        }
        Ok(Self {
            family,
            stencil,
            scale,
            domain,
        })
    }

    pub fn family(&self) -> &RayFamily<S> {
        &self.family
    }
}

impl<S: QuantumState + 'static> MetricField for PullbackField<S> {
    fn chart(&self) -> &Arc<Chart> {
        use crate::families::Family;
        self.family.chart()
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn entries_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let p = ParamPoint::new(self.chart(), x.to_vec())?;
        Ok(fs_pullback(&self.family, &p, &self.stencil)?.entries() * self.scale)
    }
}

/// Inverse of a symmetric matrix through its eigendecomposition, together
/// with the condition number. Fails when the condition number exceeds
/// [`MAX_CONDITION`].
pub fn inverse_symmetric(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let eig = SymmetricEigen::new(g.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v.abs()), hi.max(v.abs()))
        });
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularMetric { condition });
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v));
    let inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
    Ok(((&inv + inv.transpose()) * 0.5, condition))
}

/// Condition number of the metric at `p`.
pub fn condition_number(field: &dyn MetricField, p: &ParamPoint) -> Result<f64> {
    let g = field.metric(p)?;
    match inverse_symmetric(g.entries()) {
        Ok((_, c)) => Ok(c),
        Err(Error::SingularMetric { condition }) => Ok(condition),
        Err(e) => Err(e),
    }
}
