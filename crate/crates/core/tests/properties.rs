use std::sync::Arc;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use qsgeom::families::Chart;
use qsgeom::hilbert::{
    apply_phase, inner, AnyState, AxisSpec, Grid, GridState, Measure, QuantumState, StateVector,
};
use qsgeom::metrics::{fs_distance_sq, MetricMatrix};

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect())
}

fn nonzero(n: usize) -> impl Strategy<Value = StateVector> {
    amplitudes(n)
        .prop_filter("nonzero", |a| {
            a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
        .prop_map(|a| StateVector::new(a).unwrap())
}

fn pair() -> impl Strategy<Value = (StateVector, StateVector)> {
    (2usize..7).prop_flat_map(|n| (nonzero(n), nonzero(n)))
}

proptest! {
    #[test]
    fn conjugate_symmetry((a, b) in pair()) {
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn cauchy_schwarz((a, b) in pair()) {
        let ab = inner(&a, &b).unwrap().norm_sqr();
        prop_assert!(ab <= a.norm_sq() * b.norm_sq() * (1.0 + 1e-12));
    }

    #[test]
    fn distance_is_bounded_and_ray_invariant((a, b) in pair(), alpha in -10.0f64..10.0, scale in 0.1f64..10.0) {
        let d = fs_distance_sq(&a, &b).unwrap();
        prop_assert!((0.0..=4.0).contains(&d));
        let b2 = apply_phase(&b, alpha).scale(Complex64::new(scale, 0.0));
        prop_assert!((fs_distance_sq(&a, &b2).unwrap() - d).abs() < 1e-10);
        prop_assert!((fs_distance_sq(&b, &a).unwrap() - d).abs() < 1e-12);
        prop_assert!(fs_distance_sq(&a, &a).unwrap() < 1e-12);
    }

    #[test]
    fn state_json_round_trip_is_bit_exact(a in (2usize..9).prop_flat_map(nonzero)) {
        let back = StateVector::from_json(&a.to_json().unwrap()).unwrap();
        for (x, y) in a.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn metric_json_round_trip_is_bit_exact(v in prop::collection::vec(-1e3f64..1e3, 3)) {
        let chart = Chart::numbered(2).unwrap();
        let m = MetricMatrix::new(chart, nalgebra::DMatrix::from_row_slice(2, 2, &[v[0], v[1], v[1], v[2]])).unwrap();
        let back = MetricMatrix::from_json(&m.to_json()).unwrap();
        for (x, y) in m.entries().iter().zip(back.entries().iter()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn grid_states_share_the_contract() {
    let grid = Arc::new(
        Grid::build(
            &[AxisSpec::gauss_legendre(-6.0, 6.0, 64)],
            Measure::Cartesian,
        )
        .unwrap(),
    );
    let a = GridState::sample(Arc::clone(&grid), |x| {
        Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0)
    })
    .unwrap();
    let b = GridState::sample(Arc::clone(&grid), |x| {
        Complex64::from_polar((-(x[0] - 1.0).powi(2) / 2.0).exp(), 0.3 * x[0])
    })
    .unwrap();
    let ab = inner(&a, &b).unwrap();
    assert_relative_eq!(ab.re, inner(&b, &a).unwrap().conj().re, epsilon = 1e-13);
    assert_relative_eq!(a.norm_sq(), std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    let d = fs_distance_sq(&a, &b).unwrap();
    assert!(d > 0.0 && d < 4.0);
    match AnyState::from_json(&a.to_json().unwrap()).unwrap() {
        AnyState::Grid(g) => assert_eq!(g.values(), a.values()),
        AnyState::Vector(_) => panic!("grid state read back as a vector"),
    }
}
