//! Schrödinger evolution in finite dimensions and its Fubini–Study speed.
//!
//! Propagation goes through the full eigendecomposition of `H`, so a state at
//! time `t` carries no step-integrator error: `ψ(t) = V e^{−iEt/ħ} V† ψ₀`.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::ParamPoint;
use crate::geometry::fields::polar_chart;
use crate::geometry::{GeodesicPath, GeodesicSample};
use crate::hilbert::{QuantumState, StateVector};
use crate::metrics::fs_distance_sq;

const HERMITIAN_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// Hermitian generator of the evolution together with its spectrum.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: DMatrix<Complex64>,
    hbar: f64,
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianFile {
    hbar: f64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Hamiltonian {
    /// Rejects matrices that are not square or deviate from Hermiticity by
    /// more than `1e-12` of their largest entry.
    pub fn new(matrix: DMatrix<Complex64>, hbar: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() < 2 {
            return Err(Error::InvalidParameter(
                "Hamiltonian needs dimension >= 2".into(),
            ));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "non-finite Hamiltonian entry".into(),
            ));
        }
        let scale = matrix.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let deviation = (&matrix - matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        Ok(Self {
            matrix,
            hbar,
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    /// Real diagonal Hamiltonian.
    pub fn diagonal(energies: &[f64], hbar: f64) -> Result<Self> {
        let d = DVector::from_iterator(
            energies.len(),
            energies.iter().map(|&e| Complex64::new(e, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&d), hbar)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in the order returned by the decomposition.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let v = self.column(psi)?;
        StateVector::new((&self.matrix * v).iter().copied().collect())
    }

    fn column(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(DVector::from_column_slice(psi.amplitudes()))
    }

    /// `e^{−iHt/ħ} ψ`.
    pub fn propagate(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        let v = self.column(psi)?;
        let mut coeffs = self.vectors.adjoint() * v;
        for (c, e) in coeffs.iter_mut().zip(&self.energies) {
            *c *= Complex64::from_polar(1.0, -e * t / self.hbar);
        }
        StateVector::new((&self.vectors * coeffs).iter().copied().collect())
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..self.dim())
                .map(|i| (0..self.dim()).map(|j| f(&self.matrix[(i, j)])).collect())
                .collect()
        };
        Ok(serde_json::to_string(&HamiltonianFile {
            hbar: self.hbar,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        })?)
    }

    /// Reads `{"hbar": ħ, "re": [[..]], "im": [[..]]}` (row-major).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(text)?;
        let n = file.re.len();
        if file.im.len() != n || file.re.iter().chain(&file.im).any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(
                "Hamiltonian re/im must be square and of equal size".into(),
            ));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(file.re[i][j], file.im[i][j]));
        Self::new(m, file.hbar)
    }
}

/// Sampled Schrödinger trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// CSV with columns `t, re_0, im_0, re_1, im_1, …`.
    pub fn to_csv(&self) -> String {
        let dim = self.states.first().map_or(0, |s| s.dim());
        let mut out = String::from("t");
        for k in 0..dim {
            let _ = write!(out, ",re_{k},im_{k}");
        }
        out.push('\n');
        for (t, psi) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t:.8e}");
            for z in psi.amplitudes() {
                let _ = write!(out, ",{:.8e},{:.8e}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }

    /// Largest `|‖ψ‖ − 1|` along the trace.
    pub fn norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sq().sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let n = psi.norm_sq().sqrt();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!(
            "state must be normalized, has norm {n}"
        )));
    }
    Ok(())
}

/// States at `t_k = k·dt` for `k = 0..=steps`, each propagated from `ψ₀`
/// directly.
pub fn evolve(
    h: &Hamiltonian,
    psi0: &StateVector,
    dt: f64,
    steps: usize,
) -> Result<EvolutionTrace> {
    check_normalized(psi0)?;
    if !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time step must be finite, got {dt}"
        )));
    }
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let states = times
        .iter()
        .map(|&t| h.propagate(psi0, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvolutionTrace { times, states })
}

/// `⟨ψ|H|ψ⟩`.
pub fn expectation(h: &Hamiltonian, psi: &StateVector) -> Result<f64> {
    Ok(psi.inner(&h.apply(psi)?)?.re)
}

/// `ΔE = ‖(H − ⟨H⟩)ψ‖`, the square root of `⟨H²⟩ − ⟨H⟩²` computed without
/// cancellation.
pub fn energy_dispersion(h: &Hamiltonian, psi: &StateVector) -> Result<f64> {
    let hpsi = h.apply(psi)?;
    let mean = psi.inner(&hpsi)? / psi.norm_sq();
    Ok((hpsi.axpy(-mean, psi)?.norm_sq() / psi.norm_sq()).sqrt())
}

/// `|√(ds²(ψ, ψ(dt)))/dt − 2ΔE/ħ|`, which is `O(dt²)`.
pub fn aa_speed_residual(h: &Hamiltonian, psi: &StateVector, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let later = h.propagate(psi, dt)?;
    let speed = fs_distance_sq(psi, &later)?.sqrt() / dt;
    Ok((speed - 2.0 * energy_dispersion(h, psi)? / h.hbar()).abs())
}

/// `dτ = 2ΔE·dt/ħ`.
pub fn proper_time(dt: f64, delta_e: f64, hbar: f64) -> f64 {
    2.0 * delta_e * dt / hbar
}

/// Sum of the Fubini–Study distances between consecutive samples.
pub fn fs_path_length(trace: &EvolutionTrace) -> Result<f64> {
    trace
        .states
        .windows(2)
        .map(|w| Ok(fs_distance_sq(&w[0], &w[1])?.sqrt()))
        .sum()
}

/// Image of a two-level trace on the Bloch chart `(θ, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectedTrajectory {
    /// The ray never moves (an eigenstate); no tangent exists.
    Stationary(ParamPoint),
    /// Samples parametrized by round-sphere arclength, with `φ` unwrapped.
    Path(GeodesicPath),
}

fn bloch_angles(psi: &StateVector) -> (f64, f64) {
    let [a, b] = [psi.amplitudes()[0], psi.amplitudes()[1]];
    (2.0 * b.norm().atan2(a.norm()), b.arg() - a.arg())
}

/// Project a two-level trace onto the Bloch chart.
///
/// The arclength is that of `dθ² + sin²θ dφ²`, which is four times the
/// Fubini–Study pullback; tangents come from fourth-order differences of
/// the sampled coordinates. A trace whose total ray displacement stays
/// below `1e-12` is reported as stationary.
pub fn projected_trajectory(trace: &EvolutionTrace) -> Result<ProjectedTrajectory> {
    let Some(first) = trace.states.first() else {
        return Err(Error::InvalidParameter("empty trace".into()));
    };
    if let Some(bad) = trace.states.iter().find(|s| s.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: bad.dim(),
        });
    }
    let chart = polar_chart()?;
    let moved = trace
        .states
        .iter()
        .map(|s| fs_distance_sq(first, s))
        .collect::<Result<Vec<_>>>()?;
    if moved.iter().all(|d| *d < 1e-12) {
        let (theta, phi) = bloch_angles(first);
        return Ok(ProjectedTrajectory::Stationary(ParamPoint::new(
            &chart,
            vec![theta, phi],
        )?));
    }
    let n = trace.len();
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "projection needs >= 5 samples, got {n}"
        )));
    }

    let mut coords: Vec<[f64; 2]> = trace
        .states
        .iter()
        .map(|s| {
            let (t, p) = bloch_angles(s);
            [t, p]
        })
        .collect();
    for k in 1..n {
        let prev = coords[k - 1][1];
        let mut phi = coords[k][1];
        phi += (2.0 * std::f64::consts::PI) * ((prev - phi) / (2.0 * std::f64::consts::PI)).round();
        coords[k][1] = phi;
    }

    let dt = trace.times[1] - trace.times[0];
    let deriv = |k: usize, i: usize| -> f64 {
        let x = |j: usize| coords[j][i];
        // one-sided fourth-order formulas within two samples of either end
        if k == 0 {
            (-25.0 * x(0) + 48.0 * x(1) - 36.0 * x(2) + 16.0 * x(3) - 3.0 * x(4)) / (12.0 * dt)
        } else if k == 1 {
            (-3.0 * x(0) - 10.0 * x(1) + 18.0 * x(2) - 6.0 * x(3) + x(4)) / (12.0 * dt)
        } else if k + 2 >= n {
            let m = n - 1;
            if k == m {
                (25.0 * x(m) - 48.0 * x(m - 1) + 36.0 * x(m - 2) - 16.0 * x(m - 3) + 3.0 * x(m - 4))
                    / (12.0 * dt)
            } else {
                (3.0 * x(m) + 10.0 * x(m - 1) - 18.0 * x(m - 2) + 6.0 * x(m - 3) - x(m - 4))
                    / (12.0 * dt)
            }
        } else {
            (x(k - 2) - 8.0 * x(k - 1) + 8.0 * x(k + 1) - x(k + 2)) / (12.0 * dt)
        }
    };
    let velocity: Vec<[f64; 2]> = (0..n).map(|k| [deriv(k, 0), deriv(k, 1)]).collect();
    let speed = |k: usize| {
        let [th, ph] = velocity[k];
        (th * th + coords[k][0].sin().powi(2) * ph * ph).sqrt()
    };
    // trapezoid arclength, then tangents rescaled to unit speed
    let mut s = vec![0.0; n];
    for k in 1..n {
        s[k] = s[k - 1] + 0.5 * (speed(k - 1) + speed(k)) * (trace.times[k] - trace.times[k - 1]);
    }
    let samples = (0..n)
        .map(|k| {
            let v = speed(k);
            Ok(GeodesicSample {
                s: s[k],
                x: ParamPoint::new(&chart, coords[k].to_vec())?,
                u: velocity[k].iter().map(|c| c / v).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ds = s[n - 1] / (n - 1) as f64;
    Ok(ProjectedTrajectory::Path(GeodesicPath {
        chart: Arc::clone(&chart),
        samples,
        ds,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Stencil;
    use crate::geometry::fields::round_sphere;
    use crate::geometry::geodesic_residual;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            Hamiltonian::new(m, 1.0),
            Err(Error::NotHermitian { .. })
        ));
        let bad_hbar = Hamiltonian::diagonal(&[0.0, 1.0], 0.0);
        assert!(bad_hbar.is_err());
    }

    #[test]
    fn zero_hamiltonian_gives_constant_trace() {
        let h = Hamiltonian::diagonal(&[0.0, 0.0], 1.0).unwrap();
        let tr = evolve(&h, &plus(), 0.3, 10).unwrap();
        assert!(tr
            .states
            .iter()
            .all(|s| s == &tr.states[0] || fs_distance_sq(s, &tr.states[0]).unwrap() == 0.0));
    }

    #[test]
    fn eigenstate_ray_is_stationary() {
        let h = Hamiltonian::diagonal(&[0.3, 1.7, -2.0], 1.0).unwrap();
        let e1 = StateVector::basis(3, 1).unwrap();
        let tr = evolve(&h, &e1, 0.25, 40).unwrap();
        for s in &tr.states {
            assert!(fs_distance_sq(&e1, s).unwrap() < 1e-12);
        }
        assert_eq!(energy_dispersion(&h, &e1).unwrap(), 0.0);
        assert!(aa_speed_residual(&h, &e1, 1e-3).unwrap() < 1e-10);
    }

    #[test]
    fn two_level_ray_period_scales_with_hbar() {
        for hbar in [1.0, 0.37] {
            let h = Hamiltonian::diagonal(&[0.0, 1.0], hbar).unwrap();
            let period = 2.0 * PI * hbar;
            let back = h.propagate(&plus(), period).unwrap();
            assert!(fs_distance_sq(&plus(), &back).unwrap() < 1e-8);
            let half = h.propagate(&plus(), 0.5 * period).unwrap();
            assert!((fs_distance_sq(&plus(), &half).unwrap() - 4.0).abs() < 1e-8);
        }
    }

    #[test]
    fn dispersion_of_equal_superposition() {
        let h = Hamiltonian::diagonal(&[-0.4, 2.6], 1.0).unwrap();
        assert!((energy_dispersion(&h, &plus()).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn two_level_speed_residual() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0).unwrap();
        let r = aa_speed_residual(&h, &plus(), 1e-4).unwrap();
        assert!(r < 1e-6);
        // closed form: 1 − 2 sin(dt/2)/dt ≈ dt²/24
        assert!((r - 1e-8 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn proper_time_arithmetic() {
        assert_eq!(proper_time(1.0, 0.0, 1.0), 0.0);
        assert_eq!(proper_time(1.0, 0.5, 1.0), 1.0);
        assert_eq!(proper_time(0.5, 0.5, 0.5), 1.0);
    }

    #[test]
    fn proper_time_sums_to_path_length() {
        let h = Hamiltonian::diagonal(&[0.0, 0.8, 2.1], 1.3).unwrap();
        let psi = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)]).unwrap();
        let psi = crate::hilbert::normalize(&psi).unwrap();
        let dt = 1e-3;
        let tr = evolve(&h, &psi, dt, 2000).unwrap();
        let de = energy_dispersion(&h, &psi).unwrap();
        let tau: f64 = (0..tr.len() - 1)
            .map(|_| proper_time(dt, de, h.hbar()))
            .sum();
        assert!((tau - fs_path_length(&tr).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn unitarity_and_moments_over_long_runs() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.2, -0.5),
                c(0.0, 0.3),
                c(0.2, 0.5),
                c(-0.7, 0.0),
                c(0.4, 0.0),
                c(0.0, -0.3),
                c(0.4, 0.0),
                c(0.1, 0.0),
            ],
        );
        let h = Hamiltonian::new(m, 1.0).unwrap();
        let psi = crate::hilbert::normalize(
            &StateVector::new(vec![c(1.0, 0.0), c(0.5, 0.5), c(-0.2, 0.1)]).unwrap(),
        )
        .unwrap();
        let tr = evolve(&h, &psi, 0.01, 10_000).unwrap();
        assert!(tr.norm_drift() < 1e-12);
        let e0 = expectation(&h, &psi).unwrap();
        let d0 = energy_dispersion(&h, &psi).unwrap();
        for s in tr.states.iter().step_by(997) {
            assert!((expectation(&h, s).unwrap() - e0).abs() < 1e-10);
            assert!((energy_dispersion(&h, s).unwrap() - d0).abs() < 1e-10);
        }
    }

    #[test]
    fn equatorial_evolution_is_a_great_circle() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0).unwrap();
        let tr = evolve(&h, &plus(), 0.01, 300).unwrap();
        let ProjectedTrajectory::Path(path) = projected_trajectory(&tr).unwrap() else {
            panic!("expected a moving path");
        };
        assert!((path.samples[0].x.values()[0] - PI / 2.0).abs() < 1e-12);
        let res = geodesic_residual(&path, &round_sphere().unwrap(), &Stencil::default()).unwrap();
        assert!(res.iter().cloned().fold(0.0, f64::max) < 1e-4);
    }

    #[test]
    fn tilted_evolution_traces_a_latitude_circle() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0).unwrap();
        let psi = StateVector::new(vec![c(FRAC_PI_8.cos(), 0.0), c(FRAC_PI_8.sin(), 0.0)]).unwrap();
        let tr = evolve(&h, &psi, 0.01, 300).unwrap();
        let ProjectedTrajectory::Path(path) = projected_trajectory(&tr).unwrap() else {
            panic!("expected a moving path");
        };
        let res = geodesic_residual(&path, &round_sphere().unwrap(), &Stencil::default()).unwrap();
        // the latitude circle at θ = π/4 has geodesic curvature cot θ = 1
        assert!(res.iter().all(|r| (r - 1.0 / FRAC_PI_4.tan()).abs() < 1e-4));
    }

    #[test]
    fn eigenstate_projects_to_a_point() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0).unwrap();
        let tr = evolve(&h, &StateVector::basis(2, 0).unwrap(), 0.1, 10).unwrap();
        assert!(matches!(
            projected_trajectory(&tr).unwrap(),
            ProjectedTrajectory::Stationary(_)
        ));
        let three = Hamiltonian::diagonal(&[0.0, 1.0, 2.0], 1.0).unwrap();
        let tr3 = evolve(&three, &StateVector::basis(3, 0).unwrap(), 0.1, 10).unwrap();
        assert!(projected_trajectory(&tr3).is_err());
    }

    #[test]
    fn trace_csv_and_hamiltonian_json() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0], 1.0).unwrap();
        let tr = evolve(&h, &plus(), 0.5, 2).unwrap();
        let csv = tr.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "t,re_0,im_0,re_1,im_1");
        assert_eq!(csv.lines().count(), 4);
        let back = Hamiltonian::from_json(&h.to_json().unwrap()).unwrap();
        assert_eq!(back.matrix(), h.matrix());
        assert!(evolve(
            &h,
            &StateVector::basis(2, 0).unwrap().scale(c(2.0, 0.0)),
            0.1,
            1
        )
        .is_err());
    }
}
