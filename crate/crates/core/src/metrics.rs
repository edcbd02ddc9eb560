//! Metric constructors: Fubini–Study distance and pullback, the pointwise
//! configuration-space metric, the Klein–Gordon invariant, line elements and
//! signatures.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    partial_field, partial_ray, second_partial_field, Chart, FieldFamily, ParamPoint, RayFamily,
    Reparametrization, Stencil, Unit,
};
use crate::hilbert::QuantumState;

/// Default relative threshold for zero eigenvalues.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Symmetric real metric coefficients `g_μν` at one chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    chart: Arc<Chart>,
    entries: DMatrix<f64>,
}

impl MetricMatrix {
    /// Symmetrizes `entries`; rejects non-finite or mis-shaped input.
    pub fn new(chart: Arc<Chart>, entries: DMatrix<f64>) -> Result<Self> {
        let n = chart.dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "metric entries must be finite".into(),
            ));
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self { chart, entries })
    }

    pub fn diagonal(chart: Arc<Chart>, diag: &[f64]) -> Result<Self> {
        let n = chart.dim();
        if diag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        Self::new(
            chart,
            DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 }),
        )
    }

    pub fn identity(chart: Arc<Chart>) -> Self {
        let n = chart.dim();
        Self {
            chart,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.entries[(mu, nu)]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            chart: Arc::clone(&self.chart),
            entries: &self.entries * factor,
        }
    }

    /// Diagonal coefficients only: the line element in coordinates assumed
    /// orthogonal.
    pub fn orthogonal_part(&self) -> Self {
        let n = self.dim();
        Self {
            chart: Arc::clone(&self.chart),
            entries: DMatrix::from_fn(n, n, |i, j| if i == j { self.entries[(i, i)] } else { 0.0 }),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &MetricMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((&self.entries - &other.entries)
            .iter()
            .fold(0.0, |m, v| m.max(v.abs())))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(MetricFile {
            chart: self.chart.names().iter().map(|s| s.to_string()).collect(),
            entries: (0..self.dim())
                .map(|i| self.entries.row(i).iter().copied().collect())
                .collect(),
        })
        .expect("metric file is always serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parse the `{"chart": [...], "entries": [[...]]}` form; coordinate units
    /// are not stored and come back as dimensionless.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MetricFile = serde_json::from_str(text)?;
        let chart = Chart::new(
            file.chart
                .iter()
                .map(|n| (n.as_str(), Unit::Dimensionless))
                .collect(),
        )?;
        let n = chart.dim();
        if file.entries.len() != n || file.entries.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: file.entries.len(),
            });
        }
        Self::new(chart, DMatrix::from_fn(n, n, |i, j| file.entries[i][j]))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MetricFile {
    chart: Vec<String>,
    entries: Vec<Vec<f64>>,
}

/// Eigenvalue sign counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub tol: f64,
}

impl Signature {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_minus, self.n_zero)
    }
}

impl fmt::Display for Signature {
    /// `+` entries first, then `-`, then `0`, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: Vec<&str> = std::iter::repeat_n("+", self.n_plus)
            .chain(std::iter::repeat_n("-", self.n_minus))
            .chain(std::iter::repeat_n("0", self.n_zero))
            .collect();
        f.write_str(&signs.join(","))
    }
}

/// Sign counts of the eigenvalues of `m`; `|λ| < tol·max|λ|` counts as zero.
pub fn signature(m: &MetricMatrix, tol: f64) -> Signature {
    let ev = m.eigenvalues();
    let scale = ev.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let (mut n_plus, mut n_minus, mut n_zero) = (0, 0, 0);
    for v in ev {
        if scale == 0.0 || v.abs() < tol * scale {
            n_zero += 1;
        } else if v > 0.0 {
            n_plus += 1;
        } else {
            n_minus += 1;
        }
    }
    Signature {
        n_plus,
        n_minus,
        n_zero,
        tol,
    }
}

/// `ds² = g_μν dx^μ dx^ν`.
pub fn line_element(m: &MetricMatrix, dx: &[f64]) -> Result<f64> {
    let n = m.dim();
    if dx.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: dx.len(),
        });
    }
    let mut sum = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            sum += m.entries[(mu, nu)] * dx[mu] * dx[nu];
        }
    }
    Ok(sum)
}

/// Squared Fubini–Study distance `4(1 − |⟨â|b̂⟩|²)` between two rays.
///
/// Evaluated as `4‖b⊥‖²/‖b‖²` with `b⊥` the part of `b` orthogonal to `a`,
/// which stays accurate when the rays are close.
pub fn fs_distance_sq<S: QuantumState>(a: &S, b: &S) -> Result<f64> {
    let na = a.norm_sq();
    let nb = b.norm_sq();
    if !(na > 0.0) || !(nb > 0.0) {
        return Err(Error::ZeroState);
    }
    let overlap = a.inner(b)?;
    let perp = b.axpy(-overlap / na, a)?;
    Ok((4.0 * perp.norm_sq() / nb).clamp(0.0, 4.0))
}

/// Quantum geometric tensor split into its symmetric and antisymmetric parts.
#[derive(Debug, Clone)]
pub struct GeometricTensor {
    /// `Re[⟨∂_μΨ|∂_νΨ⟩ − ⟨∂_μΨ|Ψ⟩⟨Ψ|∂_νΨ⟩]`
    pub metric: MetricMatrix,
    /// Imaginary part of the same expression (antisymmetric).
    pub symplectic: DMatrix<f64>,
}

/// Ray-space tensor of a family at `p`, built from unit-norm representatives.
pub fn fs_tensor<S: QuantumState + 'static>(
    r: &RayFamily<S>,
    p: &ParamPoint,
    s: &Stencil,
) -> Result<GeometricTensor> {
    let unit = r.normalized();
    let psi = unit.eval(p)?;
    let n = p.chart().dim();
    let derivs = (0..n)
        .map(|mu| partial_ray(&unit, p, mu, s))
        .collect::<Result<Vec<_>>>()?;
    let proj = derivs
        .iter()
        .map(|d| psi.inner(d))
        .collect::<Result<Vec<_>>>()?;
    let mut q = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for mu in 0..n {
        for nu in mu..n {
            let v = derivs[mu].inner(&derivs[nu])? - proj[mu].conj() * proj[nu];
            q[(mu, nu)] = v;
            q[(nu, mu)] = v.conj();
        }
    }
    Ok(GeometricTensor {
        metric: MetricMatrix::new(Arc::clone(p.chart()), q.map(|z| z.re))?,
        symplectic: q.map(|z| z.im),
    })
}

/// Fubini–Study pullback `g_μν` (no factor 4).
pub fn fs_pullback<S: QuantumState + 'static>(
    r: &RayFamily<S>,
    p: &ParamPoint,
    s: &Stencil,
) -> Result<MetricMatrix> {
    fs_tensor(r, p, s).map(|t| t.metric)
}

/// How the two derivative factors of the configuration metric are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigMode {
    /// `Re[(∂_μΨ)(∂_νΨ)]`, no conjugation; may be indefinite.
    AnalyticSquare,
    /// `Re[(∂_μΨ)*(∂_νΨ)]`; positive semidefinite.
    Hermitian,
}

/// Full pointwise bilinear form of the chosen mode.
///
/// Both modes have rank at most 2: the gradient of one complex amplitude
/// spans at most two real directions.
pub fn config_tensor(
    f: &FieldFamily,
    p: &ParamPoint,
    s: &Stencil,
    mode: ConfigMode,
) -> Result<MetricMatrix> {
    let n = p.chart().dim();
    let grad = (0..n)
        .map(|mu| partial_field(f, p, mu, s))
        .collect::<Result<Vec<_>>>()?;
    let entries = DMatrix::from_fn(n, n, |mu, nu| match mode {
        ConfigMode::AnalyticSquare => (grad[mu] * grad[nu]).re,
        ConfigMode::Hermitian => (grad[mu].conj() * grad[nu]).re,
    });
    MetricMatrix::new(Arc::clone(p.chart()), entries)
}

/// Configuration-space metric `g_μμ` of the line element written in
/// orthogonal coordinates: the diagonal of [`config_tensor`], off-diagonal
/// entries dropped.
pub fn config_metric(
    f: &FieldFamily,
    p: &ParamPoint,
    s: &Stencil,
    mode: ConfigMode,
) -> Result<MetricMatrix> {
    let n = p.chart().dim();
    let diag = (0..n)
        .map(|mu| {
            let d = partial_field(f, p, mu, s)?;
            Ok(match mode {
                ConfigMode::AnalyticSquare => (d * d).re,
                ConfigMode::Hermitian => d.norm_sqr(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MetricMatrix::diagonal(Arc::clone(p.chart()), &diag)
}

/// Physical constants entering the Klein–Gordon invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinGordon {
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
}

/// `|−Ψ*□Ψ − (m₀c/ħ)²|Ψ|²|` with `□ = c⁻²∂_t² − ∇²` on a `(t, x, y, z)` chart.
pub fn kg_invariant_residual(
    f: &FieldFamily,
    p: &ParamPoint,
    kg: KleinGordon,
    s: &Stencil,
) -> Result<f64> {
    if p.chart().dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: p.chart().dim(),
        });
    }
    if !(kg.c > 0.0) || !(kg.hbar > 0.0) || !(kg.mass >= 0.0) {
        return Err(Error::InvalidParameter(
            "need c > 0, hbar > 0 and mass >= 0".into(),
        ));
    }
    let psi = f.eval(p)?;
    let mut boxed = second_partial_field(f, p, 0, 0, s)? / (kg.c * kg.c);
    for i in 1..4 {
        boxed -= second_partial_field(f, p, i, i, s)?;
    }
    let lhs = -(psi.conj() * boxed);
    let k0 = kg.mass * kg.c / kg.hbar;
    Ok((lhs - k0 * k0 * psi.norm_sqr()).norm())
}

/// Rank-2 transformation law `g′_μν = (∂x^α/∂x′^μ)(∂x^β/∂x′^ν) g_αβ`.
pub fn pull_back_metric(
    change: &Reparametrization,
    old: &MetricMatrix,
    p_new: &ParamPoint,
) -> Result<MetricMatrix> {
    let j = change.jacobian(p_new)?;
    if j.nrows() != old.dim() || j.ncols() != change.chart().dim() {
        return Err(Error::DimensionMismatch {
            expected: old.dim(),
            found: j.nrows(),
        });
    }
    MetricMatrix::new(
        Arc::clone(change.chart()),
        j.transpose() * old.entries() * &j,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{DomainBox, Family, Interval};
    use crate::hilbert::StateVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rt_chart() -> Arc<Chart> {
        Chart::new(vec![("r", Unit::Length), ("t", Unit::Time)]).unwrap()
    }

    fn psi100() -> FieldFamily {
        FieldFamily::new(
            rt_chart(),
            DomainBox::new(vec![
                Interval::open_closed(0.0, 10.0),
                Interval::unbounded(),
            ]),
            |x| Complex64::from_polar((-x[0]).exp(), -x[1]),
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert_eq!(fs_distance_sq(&e0, &e0).unwrap(), 0.0);
        assert_eq!(fs_distance_sq(&e0, &e1).unwrap(), 4.0);
        let half = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        assert!((fs_distance_sq(&e0, &half).unwrap() - 2.0).abs() < 1e-15);
        let zero = StateVector::new(vec![c(0.0, 0.0); 2]).unwrap();
        assert!(matches!(fs_distance_sq(&zero, &e0), Err(Error::ZeroState)));
    }

    #[test]
    fn distance_ignores_scale_and_phase() {
        let a = StateVector::new(vec![c(0.3, 0.1), c(-0.2, 0.9), c(0.5, 0.5)]).unwrap();
        let b = StateVector::new(vec![c(1.0, 0.0), c(0.2, -0.4), c(0.0, 0.7)]).unwrap();
        let d = fs_distance_sq(&a, &b).unwrap();
        let b2 = b.scale(Complex64::from_polar(3.7, 1.1));
        assert!((fs_distance_sq(&a, &b2).unwrap() - d).abs() < 1e-14);
        assert!((fs_distance_sq(&b, &a).unwrap() - d).abs() < 1e-14);
    }

    #[test]
    fn line_element_examples() {
        let chart = Chart::numbered(3).unwrap();
        let id = MetricMatrix::identity(chart);
        assert_eq!(line_element(&id, &[0.0; 3]).unwrap(), 0.0);
        assert_eq!(line_element(&id, &[0.0, 1.0, 0.0]).unwrap(), 1.0);
        assert!(line_element(&id, &[1.0]).is_err());

        let e2 = (-2.0f64).exp();
        let m = MetricMatrix::diagonal(rt_chart(), &[e2, -e2]).unwrap();
        assert!((line_element(&m, &[0.1, 0.2]).unwrap() + 0.03 * e2).abs() < 1e-15);
    }

    #[test]
    fn signature_examples() {
        let id = MetricMatrix::identity(Chart::numbered(4).unwrap());
        assert_eq!(signature(&id, DEFAULT_ZERO_TOL).counts(), (4, 0, 0));
        let lorentz =
            MetricMatrix::diagonal(Chart::numbered(4).unwrap(), &[1.0, 2.0, 3.0, -1.0]).unwrap();
        let sig = signature(&lorentz, DEFAULT_ZERO_TOL);
        assert_eq!(sig.counts(), (3, 1, 0));
        assert_eq!(sig.to_string(), "+,+,+,-");
        let degenerate =
            MetricMatrix::diagonal(Chart::numbered(3).unwrap(), &[1.0, 1e-12, -2.0]).unwrap();
        assert_eq!(signature(&degenerate, DEFAULT_ZERO_TOL).counts(), (1, 1, 1));
    }

    #[test]
    fn metric_is_symmetrized_and_validated() {
        let chart = Chart::numbered(2).unwrap();
        let m = MetricMatrix::new(
            Arc::clone(&chart),
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
        assert!(
            MetricMatrix::new(Arc::clone(&chart), DMatrix::from_element(2, 2, f64::NAN)).is_err()
        );
        assert!(MetricMatrix::new(chart, DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn metric_json_round_trip() {
        let chart = Chart::new(vec![("r", Unit::Length), ("t", Unit::Time)]).unwrap();
        let m = MetricMatrix::new(
            chart,
            DMatrix::from_row_slice(2, 2, &[0.1, 0.3, 0.3, -1.0 / 3.0]),
        )
        .unwrap();
        let back = MetricMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back.entries(), m.entries());
        assert_eq!(back.chart().names(), vec!["r", "t"]);
    }

    #[test]
    fn pure_phase_family_has_zero_pullback() {
        let chart = Chart::numbered(1).unwrap();
        let base = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let fam = RayFamily::new(
            Arc::clone(&chart),
            DomainBox::unbounded(1),
            move |x: &[f64]| Ok(base.scale(Complex64::from_polar(1.0, 2.0 * x[0]))),
        )
        .unwrap();
        let p = ParamPoint::new(&chart, vec![0.3]).unwrap();
        assert!(
            fs_pullback(&fam, &p, &Stencil::default())
                .unwrap()
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn bloch_pullback_is_quarter_round_sphere() {
        let chart = Chart::new(vec![("theta", Unit::Angle), ("phi", Unit::Angle)]).unwrap();
        let fam = RayFamily::new(
            Arc::clone(&chart),
            DomainBox::unbounded(2),
            |x: &[f64]| {
                StateVector::new(vec![
                    c((x[0] / 2.0).cos(), 0.0),
                    Complex64::from_polar((x[0] / 2.0).sin(), x[1]),
                ])
            },
        )
        .unwrap();
        for &(theta, phi) in &[(0.4, 0.0), (PI / 2.0, 1.0), (2.5, -2.0)] {
            let p = ParamPoint::new(&chart, vec![theta, phi]).unwrap();
            let g = fs_pullback(&fam, &p, &Stencil::default()).unwrap();
            assert!((g.get(0, 0) - 0.25).abs() < 1e-7);
            assert!((g.get(1, 1) - 0.25 * theta.sin().powi(2)).abs() < 1e-7);
            assert!(g.get(0, 1).abs() < 1e-7);
        }
    }

    #[test]
    fn psi100_configuration_metric() {
        let f = psi100();
        let s = Stencil::new(4, 1e-4).unwrap();
        let p = ParamPoint::new(f.chart(), vec![1.0, 0.0]).unwrap();
        let g = config_metric(&f, &p, &s, ConfigMode::AnalyticSquare).unwrap();
        let e2 = (-2.0f64).exp();
        assert!((g.get(0, 0) - e2).abs() < 1e-10);
        assert!((g.get(1, 1) + e2).abs() < 1e-10);

        for t in [0.0, 0.4, 1.3] {
            let p = ParamPoint::new(f.chart(), vec![1.5, t]).unwrap();
            let h = config_metric(&f, &p, &s, ConfigMode::Hermitian).unwrap();
            assert!((h.get(0, 0) - (-3.0f64).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn real_family_modes_agree() {
        let chart = Chart::numbered(2).unwrap();
        let f = FieldFamily::new(Arc::clone(&chart), DomainBox::unbounded(2), |x| {
            c((x[0] * x[1]).sin() + x[0], 0.0)
        })
        .unwrap();
        let p = ParamPoint::new(&chart, vec![0.3, 0.8]).unwrap();
        let s = Stencil::default();
        let a = config_tensor(&f, &p, &s, ConfigMode::AnalyticSquare).unwrap();
        let b = config_tensor(&f, &p, &s, ConfigMode::Hermitian).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn full_configuration_tensor_has_rank_at_most_two() {
        let chart = Chart::numbered(4).unwrap();
        let f = FieldFamily::new(Arc::clone(&chart), DomainBox::unbounded(4), |x| {
            Complex64::from_polar(x[0] * x[1] + x[2].cos(), x[3] - x[1] * 0.5) * (1.0 + x[2])
        })
        .unwrap();
        let p = ParamPoint::new(&chart, vec![0.3, 0.8, -0.2, 0.5]).unwrap();
        for mode in [ConfigMode::AnalyticSquare, ConfigMode::Hermitian] {
            let g = config_tensor(&f, &p, &Stencil::default(), mode).unwrap();
            assert!(signature(&g, 1e-7).n_zero >= 2);
        }
    }

    #[test]
    fn klein_gordon_plane_waves() {
        let chart = Chart::new(vec![
            ("t", Unit::Time),
            ("x", Unit::Length),
            ("y", Unit::Length),
            ("z", Unit::Length),
        ])
        .unwrap();
        let kg = KleinGordon {
            mass: 0.7,
            c: 1.5,
            hbar: 0.9,
        };
        let k = 1.2;
        let plane = |omega: f64| {
            FieldFamily::new(Arc::clone(&chart), DomainBox::unbounded(4), move |x| {
                Complex64::from_polar(1.0, k * x[1] - omega * x[0])
            })
            .unwrap()
        };
        let p = ParamPoint::new(&chart, vec![0.3, -0.4, 0.1, 2.0]).unwrap();
        let s = Stencil::default();
        let m2 = (kg.mass * kg.c / kg.hbar).powi(2);
        let on_shell = (kg.c * kg.c * k * k + m2 * kg.c * kg.c).sqrt();
        assert!(kg_invariant_residual(&plane(on_shell), &p, kg, &s).unwrap() < 1e-6);
        let off = kg_invariant_residual(&plane(kg.c * k), &p, kg, &s).unwrap();
        assert!((off - m2).abs() < 1e-6);
        let massless = KleinGordon { mass: 0.0, ..kg };
        assert!(kg_invariant_residual(&plane(kg.c * k), &p, massless, &s).unwrap() < 1e-6);
    }
}
