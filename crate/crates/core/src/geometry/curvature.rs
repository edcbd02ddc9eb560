use nalgebra::DMatrix;

use super::{inverse_symmetric, MetricField};
use crate::error::{Error, Result};
use crate::families::{ParamPoint, Stencil};

/// Christoffel symbols of the second kind `Γ^a_{bc}` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^a_{bc}`
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let n = self.dim;
        self.data[(a * n + b) * n + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|Γ^a_{bc} − Γ^a_{cb}|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    worst = worst.max((self.get(a, b, c) - self.get(a, c, b)).abs());
                }
            }
        }
        worst
    }

    /// `Γ^a_{bc} u^b u^c` for every `a`.
    pub fn contract(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|a| {
                let mut s = 0.0;
                for b in 0..n {
                    for c in 0..n {
                        s += self.get(a, b, c) * u[b] * u[c];
                    }
                }
                s
            })
            .collect()
    }
}

fn shifted(x: &[f64], mu: usize, delta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[mu] += delta;
    y
}

/// Central-difference derivative of a matrix-valued function along every
/// coordinate: `out[c] = ∂_c F`.
fn matrix_gradient<T>(
    x: &[f64],
    s: &Stencil,
    eval: impl Fn(&[f64]) -> Result<T>,
    sub: impl Fn(&T, &T) -> T,
    axpy: impl Fn(&mut T, f64, &T),
    zero: impl Fn() -> T,
) -> Result<Vec<T>> {
    (0..x.len())
        .map(|c| {
            let h = s.step(c);
            let mut acc = zero();
            for &(k, w) in s.central_pairs() {
                let plus = eval(&shifted(x, c, k as f64 * h))?;
                let minus = eval(&shifted(x, c, -k as f64 * h))?;
                axpy(&mut acc, w / h, &sub(&plus, &minus));
            }
            Ok(acc)
        })
        .collect()
}

fn christoffel_raw(field: &dyn MetricField, x: &[f64], s: &Stencil) -> Result<Christoffel> {
    let n = field.chart().dim();
    let g = field.metric_in_stencil(x)?;
    let (ginv, _) = inverse_symmetric(&g)?;
    let dg = matrix_gradient(
        x,
        s,
        |y| field.metric_in_stencil(y),
        |a, b| a - b,
        |acc, w, d| *acc += d * w,
        || DMatrix::zeros(n, n),
    )?;
    let mut gamma = Christoffel::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut v = 0.0;
                for d in 0..n {
                    v += ginv[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]);
                }
                gamma.set(a, b, c, 0.5 * v);
                gamma.set(a, c, b, 0.5 * v);
            }
        }
    }
    Ok(gamma)
}

/// `Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} − ∂_d g_{bc})`.
pub fn christoffel(field: &dyn MetricField, p: &ParamPoint, s: &Stencil) -> Result<Christoffel> {
    field.domain().check(field.chart(), p.values())?;
    christoffel_raw(field, p.values(), s)
}

/// Curvature at one point and the Einstein-space residual.
///
/// The residual uses `G_ab + Λ g_ab` with `G_ab = R_ab − ½ R g_ab`, under
/// which CP(N) carries a positive Λ.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub metric: DMatrix<f64>,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub einstein_tensor: DMatrix<f64>,
    /// Λ the residual was evaluated at (caller supplied or pointwise fit).
    pub lambda: f64,
    pub einstein_residual: DMatrix<f64>,
    /// Pointwise least-squares Λ (zero in two dimensions).
    pub lambda_fit: f64,
    /// Eigenvalues of `g⁻¹R` (all equal on an Einstein space).
    pub ricci_ratios: Vec<f64>,
}

impl CurvatureReport {
    /// Largest `|R_ab − R_ba|` relative to the largest Ricci entry.
    pub fn ricci_asymmetry(&self) -> f64 {
        let scale = self.ricci.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = (&self.ricci - self.ricci.transpose())
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// Einstein constant `k` of `R_ab = k g_ab`, as `R / dim`.
    pub fn einstein_constant(&self) -> f64 {
        self.scalar / self.metric.nrows() as f64
    }

    /// Frobenius norm of the residual relative to that of the metric.
    pub fn relative_residual(&self) -> f64 {
        self.einstein_residual.norm() / self.metric.norm()
    }
}

fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn fit_lambda(pairs: &[(DMatrix<f64>, DMatrix<f64>)]) -> f64 {
    // minimize Σ‖G + Λ g‖²
    let num: f64 = pairs
        .iter()
        .map(|(einstein, g)| frobenius_dot(einstein, g))
        .sum();
    let den: f64 = pairs.iter().map(|(_, g)| frobenius_dot(g, g)).sum();
    if den > 0.0 {
        -num / den
    } else {
        0.0
    }
}

/// Ricci, scalar and Einstein-residual at `p`.
///
/// Christoffel symbols use `s`; their derivatives use `s` with every step
/// multiplied by ten. `lambda = None` evaluates the residual at the
/// pointwise fit.
pub fn curvature(
    field: &dyn MetricField,
    p: &ParamPoint,
    s: &Stencil,
    lambda: Option<f64>,
) -> Result<CurvatureReport> {
    field.domain().check(field.chart(), p.values())?;
    let n = field.chart().dim();
    let x = p.values();
    let outer = s.scaled(10.0);
    let g = field.metric_in_stencil(x)?;
    let (ginv, _) = inverse_symmetric(&g)?;
    let gamma = christoffel_raw(field, x, s)?;
    let dgamma = matrix_gradient(
        x,
        &outer,
        |y| christoffel_raw(field, y, s),
        |a, b| Christoffel {
            dim: a.dim,
            data: a.data.iter().zip(&b.data).map(|(u, v)| u - v).collect(),
        },
        |acc, w, d| {
            acc.data
                .iter_mut()
                .zip(&d.data)
                .for_each(|(u, v)| *u += w * v)
        },
        || Christoffel::zeros(n),
    )?;

    // R_bd = ∂_a Γ^a_{db} − ∂_d Γ^a_{ab} + Γ^a_{ae} Γ^e_{db} − Γ^a_{de} Γ^e_{ab}
    let mut ricci = DMatrix::zeros(n, n);
    for b in 0..n {
        for d in 0..n {
            let mut v = 0.0;
            for a in 0..n {
                v += dgamma[a].get(a, d, b) - dgamma[d].get(a, a, b);
                for e in 0..n {
                    v += gamma.get(a, a, e) * gamma.get(e, d, b)
                        - gamma.get(a, d, e) * gamma.get(e, a, b);
                }
            }
            ricci[(b, d)] = v;
        }
    }
    let scalar = frobenius_dot(&ginv, &ricci);
    let einstein_tensor = &ricci - &g * (0.5 * scalar);
    let lambda_fit = if n == 2 {
        0.0
    } else {
        fit_lambda(&[(einstein_tensor.clone(), g.clone())])
    };
    let lambda = lambda.unwrap_or(lambda_fit);
    let einstein_residual = &einstein_tensor + &g * lambda;
    let ricci_ratios = ricci_ratios(&g, &ricci);
    Ok(CurvatureReport {
        metric: g,
        ricci,
        scalar,
        einstein_tensor,
        lambda,
        einstein_residual,
        lambda_fit,
        ricci_ratios,
    })
}

/// Eigenvalues of `g⁻¹R` through the Cholesky factor of `g`; empty when `g`
/// is not positive definite.
fn ricci_ratios(g: &DMatrix<f64>, ricci: &DMatrix<f64>) -> Vec<f64> {
    let Some(chol) = g.clone().cholesky() else {
        return Vec::new();
    };
    let l = chol.l();
    let Some(linv) = l.clone().try_inverse() else {
        return Vec::new();
    };
    let sym = &linv * ((ricci + ricci.transpose()) * 0.5) * linv.transpose();
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Least-squares cosmological constant over a set of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFit {
    pub lambda: f64,
    /// Set in two dimensions, where the Einstein tensor vanishes identically
    /// and Λ is reported as 0.
    pub two_dimensional: bool,
    /// Largest per-point `‖G + Λg‖ / ‖g‖` at the fitted Λ.
    pub max_relative_residual: f64,
    pub samples: usize,
}

/// Λ minimizing `Σ‖R_ab − ½R g_ab + Λ g_ab‖²` over the samples.
pub fn best_fit_lambda(
    field: &dyn MetricField,
    samples: &[ParamPoint],
    s: &Stencil,
) -> Result<LambdaFit> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "best_fit_lambda needs at least one sample".into(),
        ));
    }
    let n = field.chart().dim();
    let reports = samples
        .iter()
        .map(|p| curvature(field, p, s, Some(0.0)))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<_> = reports
        .iter()
        .map(|r| (r.einstein_tensor.clone(), r.metric.clone()))
        .collect();
    let two_dimensional = n == 2;
    let lambda = if two_dimensional {
        0.0
    } else {
        fit_lambda(&pairs)
    };
    let max_relative_residual = pairs
        .iter()
        .map(|(einstein, g)| (einstein + g * lambda).norm() / g.norm())
        .fold(0.0, f64::max);
    Ok(LambdaFit {
        lambda,
        two_dimensional,
        max_relative_residual,
        samples: samples.len(),
    })
}
