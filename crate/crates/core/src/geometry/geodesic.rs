use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::curvature::christoffel;
use super::MetricField;
use crate::error::{Error, Result};
use crate::families::{Chart, ParamPoint, Stencil};
use crate::metrics::line_element;

/// One sample of a parametrized curve.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSample {
    pub s: f64,
    pub x: ParamPoint,
    /// `dx/ds`
    pub u: Vec<f64>,
}

/// Curve sampled at (ideally uniform) parameter steps.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub chart: Arc<Chart>,
    pub samples: Vec<GeodesicSample>,
    pub ds: f64,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&GeodesicSample> {
        self.samples.last()
    }

    /// Largest `|g(u, u) − 1|` over the samples.
    pub fn speed_drift(&self, field: &dyn MetricField) -> Result<f64> {
        self.samples.iter().try_fold(0.0f64, |worst, smp| {
            let g = field.metric(&smp.x)?;
            Ok(worst.max((line_element(&g, &smp.u)? - 1.0).abs()))
        })
    }

    /// CSV with columns `s, x_0.., u_0.., residual`; `residuals` holds one
    /// value per interior sample and the endpoint cells stay empty.
    pub fn to_csv(&self, residuals: Option<&[f64]>) -> String {
        let d = self.chart.dim();
        let mut out = String::from("s");
        for i in 0..d {
            let _ = write!(out, ",x_{i}");
        }
        for i in 0..d {
            let _ = write!(out, ",u_{i}");
        }
        out.push_str(",residual\n");
        let n = self.samples.len();
        for (k, smp) in self.samples.iter().enumerate() {
            let _ = write!(out, "{:.8e}", smp.s);
            for v in smp.x.values().iter().chain(&smp.u) {
                let _ = write!(out, ",{v:.8e}");
            }
            out.push(',');
            if let Some(r) = residuals {
                if k >= 1 && k + 1 < n {
                    if let Some(v) = r.get(k - 1) {
                        let _ = write!(out, "{v:.8e}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Integration stopped early; `partial` holds every sample computed so far.
#[derive(Debug, Error)]
#[error("geodesic integration stopped after {} samples: {source}", partial.len())]
pub struct IntegrationError {
    pub partial: GeodesicPath,
    #[source]
    pub source: Error,
}

/// Rescale `direction` to unit speed under `g(p)`.
pub fn unit_tangent(
    field: &dyn MetricField,
    p: &ParamPoint,
    direction: &[f64],
) -> Result<Vec<f64>> {
    let g = field.metric(p)?;
    let q = line_element(&g, direction)?;
    if !(q > 0.0) {
        return Err(Error::InvalidParameter(
            "direction is not spacelike under the metric".into(),
        ));
    }
    Ok(direction.iter().map(|v| v / q.sqrt()).collect())
}

fn acceleration(
    field: &dyn MetricField,
    chart: &Arc<Chart>,
    x: &[f64],
    u: &[f64],
    s: &Stencil,
) -> Result<Vec<f64>> {
    let p = ParamPoint::new(chart, x.to_vec())?;
    Ok(christoffel(field, &p, s)?
        .contract(u)
        .into_iter()
        .map(|v| -v)
        .collect())
}

fn axpy(a: &[f64], c: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

/// Classical fourth-order Runge–Kutta for `du^a/ds + Γ^a_{bc} u^b u^c = 0`.
///
/// `u0` must have unit speed under `g(x0)`; see [`unit_tangent`].
pub fn geodesic_integrate(
    field: &dyn MetricField,
    x0: &ParamPoint,
    u0: &[f64],
    ds: f64,
    steps: usize,
    s: &Stencil,
) -> std::result::Result<GeodesicPath, IntegrationError> {
    let chart = Arc::clone(field.chart());
    let mut path = GeodesicPath {
        chart: Arc::clone(&chart),
        samples: Vec::with_capacity(steps + 1),
        ds,
    };
    let fail = |path: GeodesicPath, source: Error| IntegrationError {
        partial: path,
        source,
    };

    if !(ds > 0.0) || !ds.is_finite() {
        return Err(fail(
            path,
            Error::InvalidParameter(format!("arc step must be positive, got {ds}")),
        ));
    }
    if u0.len() != chart.dim() {
        return Err(fail(
            path,
            Error::DimensionMismatch {
                expected: chart.dim(),
                found: u0.len(),
            },
        ));
    }
    let speed = match field.metric(x0).and_then(|g| line_element(&g, u0)) {
        Ok(v) => v,
        Err(e) => return Err(fail(path, e)),
    };
    if (speed - 1.0).abs() > 1e-6 {
        return Err(fail(
            path,
            Error::InvalidParameter(format!("initial velocity has g(u,u) = {speed}, expected 1")),
        ));
    }

    let mut x = x0.values().to_vec();
    let mut u = u0.to_vec();
    path.samples.push(GeodesicSample {
        s: 0.0,
        x: x0.clone(),
        u: u.clone(),
    });
    for step in 1..=steps {
        let stage = || -> Result<(Vec<f64>, Vec<f64>)> {
            let a1 = acceleration(field, &chart, &x, &u, s)?;
            let (x2, u2) = (axpy(&x, 0.5 * ds, &u), axpy(&u, 0.5 * ds, &a1));
            let a2 = acceleration(field, &chart, &x2, &u2, s)?;
            let (x3, u3) = (axpy(&x, 0.5 * ds, &u2), axpy(&u, 0.5 * ds, &a2));
            let a3 = acceleration(field, &chart, &x3, &u3, s)?;
            let (x4, u4) = (axpy(&x, ds, &u3), axpy(&u, ds, &a3));
            let a4 = acceleration(field, &chart, &x4, &u4, s)?;
            let nx = (0..x.len())
                .map(|i| x[i] + ds / 6.0 * (u[i] + 2.0 * u2[i] + 2.0 * u3[i] + u4[i]))
                .collect();
            let nu = (0..u.len())
                .map(|i| u[i] + ds / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]))
                .collect();
            Ok((nx, nu))
        };
        let (nx, nu) = match stage() {
            Ok(v) => v,
            Err(e) => return Err(fail(path, e)),
        };
        let point = match ParamPoint::new(&chart, nx.clone()) {
            Ok(p) => p,
            Err(e) => return Err(fail(path, e)),
        };
        if let Err(e) = field.domain().check(&chart, &nx) {
            return Err(fail(path, e));
        }
        x = nx;
        u = nu;
        path.samples.push(GeodesicSample {
            s: step as f64 * ds,
            x: point,
            u: u.clone(),
        });
    }
    Ok(path)
}

fn is_uniform(path: &GeodesicPath) -> bool {
    let s: Vec<f64> = path.samples.iter().map(|p| p.s).collect();
    let h = s[1] - s[0];
    h > 0.0
        && s.windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
}

/// `‖du/ds + Γ^a_{bc} u^b u^c‖` at every interior sample.
///
/// `du/ds` comes from fourth-order differences of the stored velocities on
/// uniformly spaced paths with at least five samples, second-order
/// differences otherwise.
pub fn geodesic_residual(
    path: &GeodesicPath,
    field: &dyn MetricField,
    s: &Stencil,
) -> Result<Vec<f64>> {
    let n = path.samples.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "geodesic_residual needs >= 3 samples, got {n}"
        )));
    }
    let dim = path.chart.dim();
    let fourth = n >= 5 && is_uniform(path);
    let u = |k: usize, i: usize| path.samples[k].u[i];
    (1..n - 1)
        .map(|k| {
            let du: Vec<f64> = (0..dim)
                .map(|i| {
                    if fourth {
                        let h = path.samples[1].s - path.samples[0].s;
                        if k == 1 {
                            (-3.0 * u(0, i) - 10.0 * u(1, i) + 18.0 * u(2, i) - 6.0 * u(3, i)
                                + u(4, i))
                                / (12.0 * h)
                        } else if k == n - 2 {
                            (3.0 * u(k + 1, i) + 10.0 * u(k, i) - 18.0 * u(k - 1, i)
                                + 6.0 * u(k - 2, i)
                                - u(k - 3, i))
                                / (12.0 * h)
                        } else {
                            (u(k - 2, i) - 8.0 * u(k - 1, i) + 8.0 * u(k + 1, i) - u(k + 2, i))
                                / (12.0 * h)
                        }
                    } else {
                        let (s0, s1, s2) = (
                            path.samples[k - 1].s,
                            path.samples[k].s,
                            path.samples[k + 1].s,
                        );
                        let (h0, h1) = (s1 - s0, s2 - s1);
                        // three-point derivative on a possibly nonuniform mesh
                        -h1 / (h0 * (h0 + h1)) * u(k - 1, i)
                            + (h1 - h0) / (h0 * h1) * u(k, i)
                            + h0 / (h1 * (h0 + h1)) * u(k + 1, i)
                    }
                })
                .collect();
            let gamma = christoffel(field, &path.samples[k].x, s)?;
            let guu = gamma.contract(&path.samples[k].u);
            Ok(du
                .iter()
                .zip(&guu)
                .map(|(a, b)| (a + b).powi(2))
                .sum::<f64>()
                .sqrt())
        })
        .collect()
}
