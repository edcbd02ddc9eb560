//! Geodesics of the unit sphere and the Fubini–Study sphere, with the
//! geodesic-equation residual along each path.

use qsgeom::families::{ParamPoint, Stencil};
use qsgeom::geometry::fields::{cp1_field, round_sphere};
use qsgeom::geometry::{geodesic_integrate, geodesic_residual, unit_tangent, MetricField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = Stencil::default();
    let sphere = round_sphere()?;
    let x0 = ParamPoint::new(sphere.chart(), vec![std::f64::consts::FRAC_PI_2, 0.0])?;
    let u0 = unit_tangent(&sphere, &x0, &[1.0, 1.0])?;
    let path = geodesic_integrate(&sphere, &x0, &u0, 0.01, 200, &s)?;
    let res = geodesic_residual(&path, &sphere, &s)?;
    println!(
        "unit sphere: {} samples, speed drift {:.2e}",
        path.len(),
        path.speed_drift(&sphere)?
    );
    println!(
        "max residual {:.2e}",
        res.iter().fold(0.0f64, |m, r| m.max(*r))
    );
    let end = path.last().ok_or("empty path")?;
    // a great circle through the equator stays on z = ±sin(s)/√2
    let z = end.x.values()[0].cos();
    println!(
        "z at s = {:.2}: {z:.8} (great circle {:.8})",
        end.s,
        -(end.s.sin()) / 2f64.sqrt()
    );

    let fs = cp1_field(4.0, s.clone())?;
    let p = ParamPoint::new(fs.chart(), vec![1.0, 0.5])?;
    let u = unit_tangent(&fs, &p, &[0.3, -1.0])?;
    let path = geodesic_integrate(&fs, &p, &u, 0.02, 50, &s)?;
    let res = geodesic_residual(&path, &fs, &s)?;
    println!(
        "Fubini–Study sphere: max residual {:.2e}",
        res.iter().fold(0.0f64, |m, r| m.max(*r))
    );
    print!(
        "{}",
        path.to_csv(Some(&res))
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();

    // leaving the chart keeps what was computed
    let near_pole = ParamPoint::new(sphere.chart(), vec![0.2, 0.0])?;
    match geodesic_integrate(&sphere, &near_pole, &[-1.0, 0.0], 0.05, 100, &s) {
        Ok(_) => println!("unexpectedly stayed inside"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
