//! Complex state representations and inner products.
//!
//! Two kinds of state share the [`QuantumState`] interface: finite-dimensional
//! [`StateVector`]s and [`GridState`]s sampled on a tensor-product quadrature
//! [`Grid`]. Inner products are conjugate-linear in the first argument and
//! linear in the second.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex amplitude.
pub type ComplexScalar = Complex64;

/// Operations shared by all state kinds.
pub trait QuantumState: Clone + Send + Sync {
    /// `⟨self|other⟩`, conjugate-linear in `self`.
    fn inner(&self, other: &Self) -> Result<ComplexScalar>;

    /// Multiply every amplitude by `c`.
    fn scale(&self, c: ComplexScalar) -> Self;

    /// `self + c·other`.
    fn axpy(&self, c: ComplexScalar, other: &Self) -> Result<Self>;

    /// Zero state of the same shape.
    fn zeros_like(&self) -> Self;

    /// Squared norm `⟨self|self⟩` (always real for a valid state).
    fn norm_sq(&self) -> f64 {
        self.inner(self).map(|z| z.re).unwrap_or(0.0)
    }
}

/// `⟨a|b⟩`.
pub fn inner<S: QuantumState>(a: &S, b: &S) -> Result<ComplexScalar> {
    a.inner(b)
}

/// Rescale to unit norm.
pub fn normalize<S: QuantumState>(s: &S) -> Result<S> {
    let n2 = s.norm_sq();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::ZeroState);
    }
    Ok(s.scale(Complex64::new(1.0 / n2.sqrt(), 0.0)))
}

/// Multiply every amplitude by `e^{iα}`.
pub fn apply_phase<S: QuantumState>(s: &S, alpha: f64) -> S {
    s.scale(Complex64::from_polar(1.0, alpha))
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidState("non-finite amplitude".into()))
    }
}

/// State in an `N+1` dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidState(format!(
                "state vectors need at least 2 amplitudes, got {}",
                amps.len()
            )));
        }
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Build from real and imaginary parts.
    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        )
    }

    /// Computational basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} >= dim {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn to_json(&self) -> Result<String> {
        let file = StateFile {
            dim: self.dim(),
            re: self.amps.iter().map(|z| z.re).collect(),
            im: self.amps.iter().map(|z| z.im).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        if file.re.len() != file.dim {
            return Err(Error::DimensionMismatch {
                expected: file.dim,
                found: file.re.len(),
            });
        }
        Self::from_parts(&file.re, &file.im)
    }
}

impl QuantumState for StateVector {
    fn inner(&self, other: &Self) -> Result<ComplexScalar> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn scale(&self, c: ComplexScalar) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    fn axpy(&self, c: ComplexScalar, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    fn zeros_like(&self) -> Self {
        Self {
            amps: vec![Complex64::new(0.0, 0.0); self.dim()],
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// One-dimensional quadrature rule for a grid axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisRule {
    /// Uniform nodes including both endpoints, trapezoidal weights.
    Trapezoid,
    /// Gauss–Legendre nodes mapped onto `[lo, hi]`.
    GaussLegendre,
}

/// Extra measure factor folded into the weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Cartesian,
    /// Axes are `(r, θ, φ)`; weights carry `r² sinθ`.
    Spherical,
}

/// Tensor-product quadrature grid; weights are row-major over the axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Axis specification for [`Grid::build`].
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub rule: AxisRule,
}

impl AxisSpec {
    pub fn trapezoid(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            rule: AxisRule::Trapezoid,
        }
    }

    pub fn gauss_legendre(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            rule: AxisRule::GaussLegendre,
        }
    }

    fn nodes_and_weights(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(self.hi > self.lo) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "axis bounds [{}, {}] are not an interval",
                self.lo, self.hi
            )));
        }
        match self.rule {
            AxisRule::Trapezoid => {
                if self.points < 2 {
                    return Err(Error::InvalidParameter(
                        "trapezoid axis needs >= 2 points".into(),
                    ));
                }
                let n = self.points;
                let dx = (self.hi - self.lo) / (n - 1) as f64;
                let nodes = (0..n).map(|i| self.lo + dx * i as f64).collect();
                let weights = (0..n)
                    .map(|i| if i == 0 || i == n - 1 { 0.5 * dx } else { dx })
                    .collect();
                Ok((nodes, weights))
            }
            AxisRule::GaussLegendre => {
                if self.points < 1 {
                    return Err(Error::InvalidParameter(
                        "Gauss-Legendre axis needs >= 1 point".into(),
                    ));
                }
                let (x, w) = gauss_legendre(self.points);
                let half = 0.5 * (self.hi - self.lo);
                let mid = 0.5 * (self.hi + self.lo);
                Ok((
                    x.iter().map(|t| mid + half * t).collect(),
                    w.iter().map(|t| half * t).collect(),
                ))
            }
        }
    }
}

impl Grid {
    /// Tensor-product grid from per-axis rules.
    pub fn build(specs: &[AxisSpec], measure: Measure) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidParameter(
                "grid needs at least one axis".into(),
            ));
        }
        if measure == Measure::Spherical && specs.len() != 3 {
            return Err(Error::InvalidParameter(
                "spherical measure needs (r, θ, φ) axes".into(),
            ));
        }
        let mut axes = Vec::with_capacity(specs.len());
        let mut axis_weights = Vec::with_capacity(specs.len());
        for spec in specs {
            let (mut nodes, mut w) = spec.nodes_and_weights()?;
            if measure == Measure::Spherical {
                match axes.len() {
                    0 => w.iter_mut().zip(&nodes).for_each(|(w, r)| *w *= r * r),
                    1 => w
                        .iter_mut()
                        .zip(&nodes)
                        .for_each(|(w, t)| *w *= f64::sin(*t)),
                    _ => {}
                }
            }
            nodes.shrink_to_fit();
            axes.push(nodes);
            axis_weights.push(w);
        }
        let mut weights = vec![1.0];
        for w in &axis_weights {
            weights = weights
                .iter()
                .flat_map(|outer| w.iter().map(move |inner| outer * inner))
                .collect();
        }
        Self::from_parts(axes, weights)
    }

    /// Grid from explicit axes and weights.
    pub fn from_parts(axes: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let n: usize = axes.iter().map(Vec::len).product();
        if axes.is_empty() || n != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "quadrature weights must be finite and positive".into(),
            ));
        }
        if axes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite axis node".into()));
        }
        Ok(Self { axes, weights })
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Visit every node in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let shape: Vec<usize> = self.axes.iter().map(Vec::len).collect();
        (0..self.len()).map(move |mut flat| {
            let mut coords = vec![0.0; shape.len()];
            for (axis, &len) in shape.iter().enumerate().rev() {
                coords[axis] = self.axes[axis][flat % len];
                flat /= len;
            }
            coords
        })
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Wavefunction sampled on a shared quadrature grid.
#[derive(Debug, Clone)]
pub struct GridState {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl GridState {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    /// Sample `f` at every grid node.
    pub fn sample(grid: Arc<Grid>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(|x| f(&x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = GridFile {
            axes: self.grid.axes.clone(),
            weights: self.grid.weights.clone(),
            re: self.values.iter().map(|z| z.re).collect(),
            im: self.values.iter().map(|z| z.im).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFile = serde_json::from_str(text)?;
        if file.re.len() != file.im.len() {
            return Err(Error::DimensionMismatch {
                expected: file.re.len(),
                found: file.im.len(),
            });
        }
        let grid = Arc::new(Grid::from_parts(file.axes, file.weights)?);
        let values = file
            .re
            .iter()
            .zip(&file.im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        Self::new(grid, values)
    }
}

impl QuantumState for GridState {
    fn inner(&self, other: &Self) -> Result<ComplexScalar> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.grid.weights)
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum())
    }

    fn scale(&self, c: ComplexScalar) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    fn axpy(&self, c: ComplexScalar, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    fn zeros_like(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: vec![Complex64::new(0.0, 0.0); self.values.len()],
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GridFile {
    axes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// A state file holding either kind of state.
#[derive(Debug, Clone)]
pub enum AnyState {
    Vector(StateVector),
    Grid(GridState),
}

impl AnyState {
    /// Parse a state file, choosing the kind from the keys present.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("axes").is_some() {
            GridState::from_json(text).map(AnyState::Grid)
        } else {
            StateVector::from_json(text).map(AnyState::Vector)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_vectors_are_orthonormal() {
        let e0 = StateVector::basis(3, 0).unwrap();
        let e1 = StateVector::basis(3, 1).unwrap();
        assert_eq!(inner(&e0, &e1).unwrap(), c(0.0, 0.0));
        assert_eq!(inner(&e1, &e1).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let a = StateVector::new(vec![c(1.0, 2.0), c(0.5, -1.0)]).unwrap();
        let b = StateVector::new(vec![c(-0.3, 0.1), c(2.0, 0.7)]).unwrap();
        let z = c(0.2, 1.3);
        let lhs = inner(&a.scale(z), &b).unwrap();
        let rhs = z.conj() * inner(&a, &b).unwrap();
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-14);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-14);
        let lhs = inner(&a, &b.scale(z)).unwrap();
        let rhs = z * inner(&a, &b).unwrap();
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-14);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(3, 0).unwrap();
        assert!(matches!(
            inner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(StateVector::new(vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let s = StateVector::new(vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(
            normalize(&s).unwrap().amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );

        let u = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let again = normalize(&u).unwrap();
        for (a, b) in again.amplitudes().iter().zip(u.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }

        let zero = StateVector::new(vec![c(0.0, 0.0); 2]).unwrap();
        assert!(matches!(normalize(&zero), Err(Error::ZeroState)));
    }

    #[test]
    fn phase_examples() {
        let s = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(apply_phase(&s, 0.0), s);
        let flipped = apply_phase(&s, PI);
        assert!((flipped.amplitudes()[0] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        // degree 9 is the highest exact degree for 5 nodes
        let exact = 2.0 / 9.0 + 2.0 / 3.0;
        let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * (x.powi(8) + x * x)).sum();
        assert_abs_diff_eq!(approx, exact, epsilon = 1e-14);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn spherical_weights_give_ball_volume() {
        let grid = Grid::build(
            &[
                AxisSpec::gauss_legendre(0.0, 1.0, 8),
                AxisSpec::gauss_legendre(0.0, PI, 16),
                AxisSpec::gauss_legendre(0.0, 2.0 * PI, 4),
            ],
            Measure::Spherical,
        )
        .unwrap();
        let one = GridState::sample(Arc::new(grid), |_| c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(one.norm_sq(), 4.0 * PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_mismatch_is_structural() {
        let g1 =
            Arc::new(Grid::build(&[AxisSpec::trapezoid(0.0, 1.0, 5)], Measure::Cartesian).unwrap());
        let g2 =
            Arc::new(Grid::build(&[AxisSpec::trapezoid(0.0, 1.0, 6)], Measure::Cartesian).unwrap());
        let a = GridState::sample(g1, |_| c(1.0, 0.0)).unwrap();
        let b = GridState::sample(g2, |_| c(1.0, 0.0)).unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn nodes_are_row_major() {
        let g = Grid::build(
            &[
                AxisSpec::trapezoid(0.0, 1.0, 2),
                AxisSpec::trapezoid(10.0, 12.0, 3),
            ],
            Measure::Cartesian,
        )
        .unwrap();
        let nodes: Vec<_> = g.nodes().collect();
        assert_eq!(nodes[0], vec![0.0, 10.0]);
        assert_eq!(nodes[1], vec![0.0, 11.0]);
        assert_eq!(nodes[3], vec![1.0, 10.0]);
    }

    #[test]
    fn state_file_kind_detection() {
        let s = StateVector::basis(2, 1).unwrap();
        assert!(matches!(
            AnyState::from_json(&s.to_json().unwrap()).unwrap(),
            AnyState::Vector(_)
        ));
        let g =
            Arc::new(Grid::build(&[AxisSpec::trapezoid(0.0, 1.0, 3)], Measure::Cartesian).unwrap());
        let gs = GridState::sample(g, |x| c(x[0], 1.0)).unwrap();
        assert!(matches!(
            AnyState::from_json(&gs.to_json().unwrap()).unwrap(),
            AnyState::Grid(_)
        ));
    }
}
