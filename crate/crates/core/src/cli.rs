//! `qsgeom` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or a domain
//! error, 2 on a usage error. Data goes to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog::{
    make_family, CatalogFamily, FamilyId, FamilyParams, GaussianParams, HydrogenParams,
};
use crate::dynamics::{evolve, Hamiltonian};
use crate::error::Error;
use crate::families::{Family, ParamPoint, Stencil};
use crate::geometry::fields::{
    cp1_field, cpn_affine_family, cpn_field, euclidean, polar_chart, round_sphere,
};
use crate::geometry::{
    best_fit_lambda, curvature, geodesic_integrate, geodesic_residual, unit_tangent, GeodesicPath,
    MetricField,
};
use crate::hilbert::{normalize, AnyState, QuantumState, StateVector};
use crate::metrics::{
    config_metric, config_tensor, fs_distance_sq, fs_pullback, signature, ConfigMode, MetricMatrix,
};
use crate::tolerance::{Tolerances, TOL_SCALE_ENV};
use crate::verify::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "qsgeom", version, about = "Geometry of quantum state spaces")]
struct Cli {
    /// Output format (defaults to csv for geodesic and evolve, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed of the randomized checks and sample points.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Analytic,
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    /// Line element in orthogonal coordinates.
    Diagonal,
    /// Full bilinear form including cross terms.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Flat,
    Sphere,
    Cp1,
    Cp2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["fs", "gauge", "hydrogen", "curvature", "dynamics", "all"])]
        suite: String,
    },
    /// Metric of a catalog family at one point.
    Metric {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 1.0)]
        a0: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        zalpha: f64,
        /// Gaussian width.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Gaussian spatial dimension (1 or 3).
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Point as `name=value` pairs, e.g. `r=1,t=0`.
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value_t = Mode::Analytic)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Form::Diagonal)]
        form: Form,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Ricci and Einstein data of a standard space at random points.
    Curvature {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Integrate a geodesic from a point and direction.
    Geodesic {
        #[arg(long, value_enum)]
        space: Space,
        /// Start point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Initial direction; rescaled to unit speed.
        #[arg(long, allow_hyphen_values = true)]
        u0: String,
        #[arg(long, default_value_t = 0.01)]
        ds: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schrödinger evolution of a state.
    Evolve {
        /// Hamiltonian file `{"hbar", "re", "im"}`.
        #[arg(long, conflicts_with = "energies")]
        hamiltonian: Option<PathBuf>,
        /// Diagonal Hamiltonian, comma-separated energies.
        #[arg(long, allow_hyphen_values = true)]
        energies: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// State file `{"dim", "re", "im"}`; normalized before evolving.
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fubini–Study distance between two state files.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Round to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.8e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .map(|x| json!(sig9(x)))
            .unwrap_or(Value::Number(n)),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

fn line(v: Value) -> String {
    round_value(v).to_string()
}

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

/// Parse arguments, run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = dispatch(&cli, out, err);
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let io = |e: std::io::Error| Failure::Domain(e.to_string());
    match &cli.command {
        Command::Verify { suite } => cmd_verify(
            suite,
            cli.seed,
            cli.format.unwrap_or(Format::Json),
            out,
            err,
        )
        .map_err(Into::into),
        Command::Metric {
            family,
            c0,
            a0,
            omega,
            zalpha,
            lambda,
            hbar,
            dim,
            at,
            mode,
            form,
            h,
        } => {
            let hyd = HydrogenParams {
                c0: *c0,
                a0: *a0,
                omega: *omega,
                zalpha: *zalpha,
            };
            let gauss = GaussianParams {
                lambda: *lambda,
                hbar: *hbar,
                dim: *dim,
            };
            cmd_metric(
                family,
                hyd,
                gauss,
                at,
                *mode,
                *form,
                *h,
                cli.format.unwrap_or(Format::Json),
                out,
            )
        }
        Command::Curvature { space, samples, h } => cmd_curvature(
            *space,
            *samples,
            *h,
            cli.seed,
            cli.format.unwrap_or(Format::Json),
            out,
            err,
        ),
        Command::Geodesic {
            space,
            x0,
            u0,
            ds,
            steps,
            out: path,
        } => {
            let mut buf = Vec::new();
            let result = cmd_geodesic(
                *space,
                x0,
                u0,
                *ds,
                *steps,
                cli.format.unwrap_or(Format::Csv),
                &mut buf,
                err,
            );
            // a partial path is still written when integration stops early
            emit(path.as_ref(), &buf, out).map_err(io)?;
            result
        }
        Command::Evolve {
            hamiltonian,
            energies,
            hbar,
            state,
            dt,
            steps,
            out: path,
        } => {
            let mut buf = Vec::new();
            let code = cmd_evolve(
                hamiltonian.as_ref(),
                energies.as_deref(),
                *hbar,
                state,
                *dt,
                *steps,
                cli.format.unwrap_or(Format::Csv),
                &mut buf,
                err,
            )?;
            emit(path.as_ref(), &buf, out).map_err(io)?;
            Ok(code)
        }
        Command::Distance { a, b } => cmd_distance(a, b, cli.format.unwrap_or(Format::Json), out),
    }
}

fn emit(path: Option<&PathBuf>, data: &[u8], out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, data),
        None => out.write_all(data),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Domain(e.to_string()))
}

fn cmd_verify(
    suite: &str,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Error> {
    let suite: Suite = suite.parse()?;
    let tol = Tolerances::from_env();
    let scale = std::env::var(TOL_SCALE_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .unwrap_or(1.0);
    let records = run_suite(suite, seed, &tol);
    let mut text = String::new();
    match format {
        Format::Json => {
            text.push_str(&line(
                json!({"suite": suite.name(), "seed": seed, "tol_scale": scale}),
            ));
            text.push('\n');
            for r in &records {
                text.push_str(&line(serde_json::to_value(r)?));
                text.push('\n');
            }
        }
        Format::Csv => {
            text.push_str(&format!(
                "# suite={} seed={seed} tol_scale={}\n",
                suite.name(),
                num(scale)
            ));
            text.push_str("name,status,measured,tolerance\n");
            for r in &records {
                let status = if r.passed() { "pass" } else { "fail" };
                let m = r.measured.map(num).unwrap_or_default();
                text.push_str(&format!("{},{status},{m},{}\n", r.name, num(r.tolerance)));
            }
        }
    }
    out.write_all(text.as_bytes())?;
    let failed: Vec<_> = records.iter().filter(|r| !r.passed()).collect();
    for r in &failed {
        let detail = r
            .error
            .clone()
            .unwrap_or_else(|| format!("measured {:?}, tolerance {}", r.measured, r.tolerance));
        writeln!(err, "FAIL {}: {detail}", r.name)?;
    }
    writeln!(
        err,
        "{}/{} checks passed",
        records.len() - failed.len(),
        records.len()
    )?;
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn parse_point(at: &str) -> std::result::Result<Vec<(String, f64)>, Failure> {
    at.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("expected name=value, got `{pair}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad number in `{pair}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("bad number `{v}` in `{s}`")))
        })
        .collect()
}

fn metric_lines(g: &MetricMatrix, format: Format, tol: f64) -> String {
    let sig = signature(g, tol);
    match format {
        Format::Json => {
            let (p, m, z) = sig.counts();
            format!(
                "{}\n{}\n",
                line(g.to_json_value()),
                line(json!({"signature": sig.to_string(), "n_plus": p, "n_minus": m, "n_zero": z}))
            )
        }
        Format::Csv => {
            let names = g.chart().names();
            let mut s = format!("coord,{}\n", names.join(","));
            for (i, n) in names.iter().enumerate() {
                let row: Vec<String> = (0..g.dim()).map(|j| num(g.get(i, j))).collect();
                s.push_str(&format!("{n},{}\n", row.join(",")));
            }
            s.push_str(&format!("signature,\"{sig}\"\n"));
            s
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_metric(
    family: &str,
    hyd: HydrogenParams,
    gauss: GaussianParams,
    at: &str,
    mode: Mode,
    form: Form,
    h: f64,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let id: FamilyId = family.parse()?;
    let params = if id.is_hydrogen() {
        FamilyParams::Hydrogen(hyd)
    } else {
        FamilyParams::Gaussian(gauss)
    };
    let fam = make_family(id, &params)?;
    let pairs = parse_point(at)?;
    let pairs_ref: Vec<(&str, f64)> = pairs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let tol = Tolerances::from_env().signature_zero;
    let g = match &fam {
        CatalogFamily::Field(f) => {
            let p = ParamPoint::named(f.chart(), &pairs_ref)?;
            let steps = f
                .chart()
                .coords()
                .iter()
                .map(|c| match c.unit {
                    crate::families::Unit::Length => h * hyd.a0,
                    crate::families::Unit::Time => h / hyd.omega,
                    _ => h,
                })
                .collect();
            let s = Stencil::with_steps(4, steps)?;
            let m = if mode == Mode::Analytic {
                ConfigMode::AnalyticSquare
            } else {
                ConfigMode::Hermitian
            };
            match form {
                Form::Diagonal => config_metric(f, &p, &s, m)?,
                Form::Full => config_tensor(f, &p, &s, m)?,
            }
        }
        CatalogFamily::Ray(r) => {
            let p = ParamPoint::named(r.chart(), &pairs_ref)?;
            fs_pullback(r, &p, &Stencil::new(4, h.max(1e-3) * gauss.lambda)?)?
        }
    };
    write_out(out, &metric_lines(&g, format, tol))?;
    Ok(0)
}

fn sample_points(space: Space, n: usize, rng: &mut ChaCha8Rng) -> crate::Result<Vec<ParamPoint>> {
    match space {
        Space::Flat => {
            let chart = euclidean(2)?.chart().clone();
            (0..n)
                .map(|_| {
                    ParamPoint::new(
                        &chart,
                        vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                    )
                })
                .collect()
        }
        Space::Sphere | Space::Cp1 => {
            let chart = polar_chart()?;
            (0..n)
                .map(|_| {
                    let th = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
                    let ph = rng.gen_range(0.0..std::f64::consts::TAU);
                    ParamPoint::new(&chart, vec![th, ph])
                })
                .collect()
        }
        Space::Cp2 => {
            let chart = cpn_affine_family(2)?.chart().clone();
            (0..n)
                .map(|_| {
                    ParamPoint::new(&chart, (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
                })
                .collect()
        }
    }
}

fn space_field(space: Space, s: &Stencil) -> crate::Result<Box<dyn MetricField>> {
    Ok(match space {
        Space::Flat => Box::new(euclidean(2)?),
        Space::Sphere => Box::new(round_sphere()?),
        Space::Cp1 => Box::new(cp1_field(1.0, s.clone())?),
        Space::Cp2 => Box::new(cpn_field(2, 1.0, s.clone())?),
    })
}

fn cmd_curvature(
    space: Space,
    samples: usize,
    h: f64,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let s = Stencil::new(4, h)?;
    let field = space_field(space, &s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(space, samples, &mut rng)?;
    let reports = pts
        .iter()
        .map(|p| curvature(field.as_ref(), p, &s, None))
        .collect::<crate::Result<Vec<_>>>()?;
    let fit = best_fit_lambda(field.as_ref(), &pts, &s)?;
    let tol = Tolerances::from_env();
    let ok = match space {
        Space::Sphere => reports
            .iter()
            .all(|r| (r.scalar - 2.0).abs() <= tol.sphere_scalar_curvature),
        Space::Flat => reports
            .iter()
            .all(|r| r.scalar.abs() <= tol.sphere_scalar_curvature),
        Space::Cp1 => fit.two_dimensional,
        Space::Cp2 => fit.max_relative_residual <= tol.einstein_constancy,
    };
    let mut text = String::new();
    match format {
        Format::Json => {
            for (p, r) in pts.iter().zip(&reports) {
                text.push_str(&line(json!({
                    "point": p.values(),
                    "scalar": r.scalar,
                    "einstein_constant": r.einstein_constant(),
                    "ricci_ratios": r.ricci_ratios,
                    "lambda_pointwise": r.lambda_fit,
                    "ricci_asymmetry": r.ricci_asymmetry(),
                })));
                text.push('\n');
            }
            text.push_str(&line(json!({
                "lambda": fit.lambda,
                "two_dimensional": fit.two_dimensional,
                "max_relative_residual": fit.max_relative_residual,
                "samples": fit.samples,
                "status": if ok { "pass" } else { "fail" },
            })));
            text.push('\n');
        }
        Format::Csv => {
            let d = field.chart().dim();
            let coords: Vec<String> = (0..d).map(|i| format!("x_{i}")).collect();
            text.push_str(&format!(
                "{},scalar,einstein_constant,lambda_pointwise,ricci_asymmetry\n",
                coords.join(",")
            ));
            for (p, r) in pts.iter().zip(&reports) {
                let xs: Vec<String> = p.values().iter().map(|v| num(*v)).collect();
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    xs.join(","),
                    num(r.scalar),
                    num(r.einstein_constant()),
                    num(r.lambda_fit),
                    num(r.ricci_asymmetry())
                ));
            }
            text.push_str(&format!(
                "# lambda={} two_dimensional={} max_relative_residual={}\n",
                num(fit.lambda),
                fit.two_dimensional,
                num(fit.max_relative_residual)
            ));
        }
    }
    write_out(out, &text)?;
    if fit.two_dimensional {
        let _ = writeln!(
            err,
            "two-dimensional space: Einstein tensor vanishes identically, lambda reported as 0"
        );
    }
    Ok(if ok { 0 } else { 1 })
}

fn path_text(
    path: &GeodesicPath,
    residuals: Option<&[f64]>,
    format: Format,
) -> crate::Result<String> {
    Ok(match format {
        Format::Csv => path.to_csv(residuals),
        Format::Json => {
            let n = path.samples.len();
            let mut s = String::new();
            for (k, smp) in path.samples.iter().enumerate() {
                let r = residuals
                    .filter(|_| k >= 1 && k + 1 < n)
                    .and_then(|r| r.get(k - 1))
                    .copied();
                s.push_str(&line(
                    json!({"s": smp.s, "x": smp.x.values(), "u": smp.u, "residual": r}),
                ));
                s.push('\n');
            }
            s
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_geodesic(
    space: Space,
    x0: &str,
    u0: &str,
    ds: f64,
    steps: usize,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let s = Stencil::default();
    let field = match space {
        Space::Cp1 => Box::new(cp1_field(4.0, s.clone())?) as Box<dyn MetricField>,
        other => space_field(other, &s)?,
    };
    let x: Vec<f64> = parse_list(x0)?;
    let u: Vec<f64> = parse_list(u0)?;
    let p = ParamPoint::new(field.chart(), x)?;
    let u = unit_tangent(field.as_ref(), &p, &u)?;
    match geodesic_integrate(field.as_ref(), &p, &u, ds, steps, &s) {
        Ok(path) => {
            let res = if path.len() >= 3 {
                Some(geodesic_residual(&path, field.as_ref(), &s)?)
            } else {
                None
            };
            write_out(out, &path_text(&path, res.as_deref(), format)?)?;
            let _ = writeln!(
                err,
                "speed drift {}",
                num(path.speed_drift(field.as_ref())?)
            );
            Ok(0)
        }
        Err(e) => {
            write_out(out, &path_text(&e.partial, None, format)?)?;
            Err(e.source.into())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    hamiltonian: Option<&PathBuf>,
    energies: Option<&str>,
    hbar: f64,
    state: &PathBuf,
    dt: f64,
    steps: usize,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let read = |p: &PathBuf| {
        fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
    };
    let h = match (hamiltonian, energies) {
        (Some(path), _) => Hamiltonian::from_json(&read(path)?)?,
        (None, Some(list)) => Hamiltonian::diagonal(&parse_list(list)?, hbar)?,
        (None, None) => return Err(Failure::Usage("give --hamiltonian or --energies".into())),
    };
    let psi = StateVector::from_json(&read(state)?)?;
    let norm = psi.norm_sq().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        let _ = writeln!(err, "normalizing input state (norm {})", num(norm));
    }
    let trace = evolve(&h, &normalize(&psi)?, dt, steps)?;
    let text = match format {
        Format::Csv => trace.to_csv(),
        Format::Json => {
            let mut s = String::new();
            for (t, st) in trace.times.iter().zip(&trace.states) {
                let re: Vec<f64> = st.amplitudes().iter().map(|z| z.re).collect();
                let im: Vec<f64> = st.amplitudes().iter().map(|z| z.im).collect();
                s.push_str(&line(json!({"t": t, "re": re, "im": im})));
                s.push('\n');
            }
            s
        }
    };
    write_out(out, &text)?;
    Ok(0)
}

fn cmd_distance(a: &PathBuf, b: &PathBuf, format: Format, out: &mut dyn Write) -> CmdResult {
    let read = |p: &PathBuf| {
        fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
    };
    let d2 = match (
        AnyState::from_json(&read(a)?)?,
        AnyState::from_json(&read(b)?)?,
    ) {
        (AnyState::Vector(x), AnyState::Vector(y)) => fs_distance_sq(&x, &y)?,
        (AnyState::Grid(x), AnyState::Grid(y)) => fs_distance_sq(&x, &y)?,
        _ => {
            return Err(Failure::Usage(
                "both states must be of the same kind".into(),
            ))
        }
    };
    let text = match format {
        Format::Json => format!(
            "{}\n",
            line(json!({"fs_distance_sq": d2, "fs_distance": d2.sqrt()}))
        ),
        Format::Csv => format!(
            "fs_distance_sq,fs_distance\n{},{}\n",
            num(d2),
            num(d2.sqrt())
        ),
    };
    write_out(out, &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qsgeom").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(2.0 / 3.0), 0.666666667);
        assert_eq!(sig9(-0.1353352832366127), -0.135335283);
        assert_eq!(
            line(json!({"x": 1.0f64 / 3.0, "n": 3})),
            r#"{"n":3,"x":0.333333333}"#
        );
    }

    #[test]
    fn psi100_metric_at_bohr_radius() {
        let (code, out, _) = call(&[
            "metric", "--family", "psi100", "--a0", "1", "--omega", "1", "--at", "r=1,t=0",
        ]);
        assert_eq!(code, 0);
        let g: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        let rr = g["entries"][0][0].as_f64().unwrap();
        let tt = g["entries"][1][1].as_f64().unwrap();
        assert!((rr - 0.1353353).abs() < 1e-7, "{rr}");
        assert!((tt + 0.1353353).abs() < 1e-7, "{tt}");
    }

    #[test]
    fn psi211_signature_line() {
        let (code, out, _) = call(&[
            "metric",
            "--family",
            "psi211",
            "--at",
            "r=1,theta=1.0472,phi=0.5236,t=0",
        ]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().contains("\"+,+,+,-\""));
        let (_, csv, _) = call(&[
            "metric",
            "--family",
            "psi211",
            "--at",
            "r=1,theta=1.0472,phi=0.5236,t=0",
            "--format",
            "csv",
        ]);
        assert!(csv.lines().last().unwrap().contains("+,+,+,-"));
    }

    #[test]
    fn missing_coordinate_is_a_usage_error() {
        let (code, _, err) = call(&["metric", "--family", "psi100", "--at", "r=1"]);
        assert_eq!(code, 2);
        assert!(err.contains("`t`"));
    }

    #[test]
    fn domain_errors_exit_one() {
        let (code, _, _) = call(&[
            "metric",
            "--family",
            "dirac",
            "--zalpha",
            "0.3",
            "--at",
            "r=0.01,theta=1,phi=1,t=0",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["verify", "--suite", "nosuch"]).0, 2);
        assert_eq!(
            call(&["metric", "--family", "psi999", "--at", "r=1,t=0"]).0,
            2
        );
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "--bogus-flag"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn sphere_curvature_command() {
        let (code, out, _) = call(&["curvature", "--space", "sphere", "--samples", "3"]);
        assert_eq!(code, 0);
        let last: Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
        assert_eq!(last["two_dimensional"], true);
        let first: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert!((first["scalar"].as_f64().unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn flat_geodesic_csv() {
        let (code, out, _) = call(&[
            "geodesic", "--space", "flat", "--x0", "0,0", "--u0", "3,4", "--ds", "0.5", "--steps",
            "4",
        ]);
        assert_eq!(code, 0);
        let last = out.lines().last().unwrap();
        assert!(
            last.starts_with("2.00000000e0,1.20000000e0,1.60000000e0"),
            "{last}"
        );
    }

    #[test]
    fn geodesic_leaving_the_chart_exits_one() {
        let (code, out, _) = call(&[
            "geodesic", "--space", "sphere", "--x0", "0.2,0", "--u0", "-1,0", "--ds", "0.05",
            "--steps", "100",
        ]);
        assert_eq!(code, 1);
        assert!(out.lines().count() > 2);
    }

    #[test]
    fn evolve_and_distance_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        let plus = StateVector::from_parts(&[1.0, 1.0], &[0.0, 0.0]).unwrap();
        fs::write(&a, plus.to_json().unwrap()).unwrap();
        fs::write(&b, StateVector::basis(2, 0).unwrap().to_json().unwrap()).unwrap();
        let (code, out, _) = call(&[
            "distance",
            "--a",
            a.to_str().unwrap(),
            "--b",
            b.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["fs_distance_sq"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        let (code, _, _) = call(&[
            "distance",
            "--a",
            a.to_str().unwrap(),
            "--b",
            a.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);

        let trace = dir.path().join("trace.csv");
        let (code, _, err) = call(&[
            "evolve",
            "--energies",
            "0,1",
            "--state",
            a.to_str().unwrap(),
            "--dt",
            "0.5",
            "--steps",
            "4",
            "--out",
            trace.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("normalizing"));
        let csv = fs::read_to_string(&trace).unwrap();
        assert_eq!(csv.lines().count(), 6);
        assert_eq!(csv.lines().next().unwrap(), "t,re_0,im_0,re_1,im_1");
    }
}
