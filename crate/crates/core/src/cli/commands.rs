use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{AdjointConfig, ClassifyConfig, GridSpec, SampleConfig, TransformConfig, VerifyConfig};
use super::output::to_json;
use super::{Outcome, RunArgs};
use crate::classify::{adjoint_closed, adjoint_ode_oracle, adjoint_series, normalize_1d};
use crate::error::{Error, Result};
use crate::field::SharedField;
use crate::generators::{flow, Generator, GeneratorRecord};
use crate::jet::Jet;
use crate::simulate::{self, SimConfig};
use crate::solutions::{residual_from_jet, DerivativeSource, Equation};
use crate::timefn::sample_times;
use crate::verify::{
    plane_field, residual_plane_convergence, residual_sphere_convergence, sphere_field, write_csv, DerivativeMode,
    FieldSample, GridMeta, ResidualReport,
};

const FD_TOLERANCE: f64 = 1e-2;

fn apply_resolution(grid: &mut GridSpec, args: &RunArgs) {
    if let Some(n) = args.resolution {
        grid.n = Some(n);
    }
}

fn coordinate_names(equation: &Equation) -> [&'static str; 2] {
    match equation {
        Equation::Plane { .. } => ["x", "y"],
        Equation::Sphere { .. } => ["lambda", "mu"],
    }
}

/// Samples and residual report of `field` on the grid for `equation`.
fn evaluate(
    field: &SharedField,
    equation: &Equation,
    grid: &GridSpec,
    mode: DerivativeMode,
) -> Result<(Vec<FieldSample>, ResidualReport)> {
    let refine = mode == DerivativeMode::FiniteDifference;
    match *equation {
        Equation::Plane { beta } => {
            let grid = grid.plane()?;
            let samples = plane_field(field, &grid, beta, mode)?;
            let report = if refine {
                residual_plane_convergence(field, &grid, beta, mode)?
            } else {
                ResidualReport::from_samples(&samples, GridMeta::Plane(grid), mode)?
            };
            Ok((samples, report))
        }
        Equation::Sphere { omega } => {
            let grid = grid.sphere(omega)?;
            let samples = sphere_field(field, &grid, mode)?;
            let report = if refine {
                residual_sphere_convergence(field, &grid, mode)?
            } else {
                ResidualReport::from_samples(&samples, GridMeta::Sphere(grid), mode)?
            };
            Ok((samples, report))
        }
    }
}

fn csv(names: [&str; 2], samples: &[FieldSample]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, names, samples)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

#[derive(Serialize)]
struct RandomProbe {
    count: usize,
    seed: u64,
    max_norm: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<&'static str>,
    equation: Equation,
    tolerance: f64,
    passed: bool,
    residual: ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    random: Option<RandomProbe>,
}

/// Analytic residuals at `count` uniform points of the grid box.
fn random_probe(field: &SharedField, equation: &Equation, grid: &GridSpec, count: usize, seed: u64) -> Result<RandomProbe> {
    let (t_lo, t_hi, a, b) = match equation {
        Equation::Plane { .. } => {
            let g = grid.plane()?;
            (min(&g.times), max(&g.times), [g.x0, g.x1], [g.y0, g.y1])
        }
        Equation::Sphere { omega } => {
            let g = grid.sphere(*omega)?;
            let lam = g.lambda_range.unwrap_or([0.0, std::f64::consts::TAU]);
            (min(&g.times), max(&g.times), lam, [g.mu(0), g.mu(g.nmu - 1)])
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_norm = 0.0f64;
    for _ in 0..count {
        let point = [
            t_lo + (t_hi - t_lo) * rng.gen::<f64>(),
            a[0] + (a[1] - a[0]) * rng.gen::<f64>(),
            b[0] + (b[1] - b[0]) * rng.gen::<f64>(),
        ];
        let jet = field.eval_jet(&Jet::point(point))?;
        max_norm = max_norm.max(residual_from_jet(equation, point, &jet).abs());
    }
    Ok(RandomProbe { count, seed, max_norm })
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn default_tolerance(mode: DerivativeMode, source: Option<DerivativeSource>) -> f64 {
    match (mode, source) {
        (DerivativeMode::FiniteDifference, _) => FD_TOLERANCE,
        (_, Some(DerivativeSource::Quadrature | DerivativeSource::Ode)) => 1e-7,
        _ => 1e-9,
    }
}

pub fn verify(args: &RunArgs) -> Result<Outcome> {
    let mut cfg: VerifyConfig = args.parse()?;
    apply_resolution(&mut cfg.grid, args);
    let resolved = cfg.field_spec().resolve()?;
    let source = resolved.family.as_ref().map(|f| f.source());
    let tolerance = args.tol.or(cfg.tol).unwrap_or_else(|| default_tolerance(cfg.mode, source));
    let (samples, residual) = evaluate(&resolved.field, &resolved.equation, &cfg.grid, cfg.mode)?;
    let random = match cfg.random_points {
        0 => None,
        count => {
            let seed = args.seed.or(cfg.seed).unwrap_or(0);
            Some(random_probe(&resolved.field, &resolved.equation, &cfg.grid, count, seed)?)
        }
    };
    let passed = residual.max_norm <= tolerance && random.as_ref().is_none_or(|r| r.max_norm <= tolerance);
    let report = VerifyReport {
        family: resolved.family.as_ref().map(|f| f.id()),
        equation: resolved.equation,
        tolerance,
        passed,
        residual,
        random,
    };
    Ok(Outcome {
        passed,
        report: Some(to_json(&report)?),
        csv: vec![("field.csv".into(), csv(coordinate_names(&resolved.equation), &samples)?)],
        warnings: Vec::new(),
    })
}

pub fn classify(args: &RunArgs) -> Result<Outcome> {
    let cfg: ClassifyConfig = args.parse()?;
    let generator = cfg.generator.to_generator()?;
    let report = normalize_1d(&generator, cfg.domain)?;
    let tolerance = args.tol.unwrap_or(1e-9);
    Ok(Outcome {
        passed: report.residual <= tolerance,
        report: Some(to_json(&report)?),
        csv: Vec::new(),
        warnings: Vec::new(),
    })
}

#[derive(Serialize)]
struct AdjointReport {
    eps: f64,
    closed: GeneratorRecord,
    series_fallback: bool,
    series: GeneratorRecord,
    series_order: usize,
    oracle: GeneratorRecord,
    oracle_steps: usize,
    max_pairwise_difference: f64,
    tolerance: f64,
    passed: bool,
}

fn domain_times(generators: &[&Generator]) -> Result<Vec<f64>> {
    let mut domain = None;
    for g in generators {
        for f in g.parts().1 {
            if let Some(d) = f.domain()? {
                if domain.is_some_and(|prev| prev != d) {
                    return Err(Error::Domain("generators live on opposite half-lines".into()));
                }
                domain = Some(d);
            }
        }
    }
    Ok(sample_times(domain))
}

pub fn adjoint(args: &RunArgs) -> Result<Outcome> {
    let cfg: AdjointConfig = args.parse()?;
    let (v, w) = (cfg.v.to_generator()?, cfg.w.to_generator()?);
    let closed = adjoint_closed(&v, cfg.eps, &w)?;
    let series = adjoint_series(&v, cfg.eps, &w, cfg.series_order)?;
    let oracle = adjoint_ode_oracle(&v, cfg.eps, &w, cfg.oracle_steps)?;
    let times = domain_times(&[&v, &w])?;
    let mut diff = 0.0f64;
    for (a, b) in [(&closed.image, &series), (&closed.image, &oracle), (&series, &oracle)] {
        let (ds, df) = a.distance(b, &times)?;
        diff = diff.max(ds).max(df);
    }
    let tolerance = args.tol.or(cfg.tol).unwrap_or(1e-6);
    let report = AdjointReport {
        eps: cfg.eps,
        closed: GeneratorRecord::from_generator(&closed.image),
        series_fallback: closed.series_fallback,
        series: GeneratorRecord::from_generator(&series),
        series_order: cfg.series_order,
        oracle: GeneratorRecord::from_generator(&oracle),
        oracle_steps: cfg.oracle_steps,
        max_pairwise_difference: diff,
        tolerance,
        passed: diff <= tolerance,
    };
    Ok(Outcome { passed: report.passed, report: Some(to_json(&report)?), csv: Vec::new(), warnings: Vec::new() })
}

#[derive(Serialize)]
struct TransformReport {
    transformation: String,
    equation: Equation,
    tolerance: f64,
    passed: bool,
    residual: ResidualReport,
}

pub fn transform(args: &RunArgs) -> Result<Outcome> {
    let mut cfg: TransformConfig = args.parse()?;
    apply_resolution(&mut cfg.grid, args);
    let resolved = cfg.field_spec().resolve()?;
    let map = flow(&cfg.generator.to_generator()?, cfg.eps)?;
    let image: SharedField = Arc::new(map.pushforward(resolved.field.clone()));
    let source = resolved.family.as_ref().map(|f| f.source());
    let tolerance = args.tol.or(cfg.tol).unwrap_or_else(|| default_tolerance(cfg.mode, source));
    let (samples, residual) = evaluate(&image, &resolved.equation, &cfg.grid, cfg.mode)?;
    let passed = residual.max_norm <= tolerance;
    let report = TransformReport { transformation: map.to_string(), equation: resolved.equation, tolerance, passed, residual };
    Ok(Outcome {
        passed,
        report: Some(to_json(&report)?),
        csv: vec![("transformed.csv".into(), csv(coordinate_names(&resolved.equation), &samples)?)],
        warnings: Vec::new(),
    })
}

pub fn sample(args: &RunArgs) -> Result<Outcome> {
    let mut cfg: SampleConfig = args.parse()?;
    apply_resolution(&mut cfg.grid, args);
    if cfg.grid.times.is_none() {
        cfg.grid.times = Some(vec![1.0]);
    }
    let resolved = cfg.field_spec().resolve()?;
    let samples = match resolved.equation {
        Equation::Plane { beta } => plane_field(&resolved.field, &cfg.grid.plane()?, beta, DerivativeMode::Analytic)?,
        Equation::Sphere { omega } => sphere_field(&resolved.field, &cfg.grid.sphere(omega)?, DerivativeMode::Analytic)?,
    };
    Ok(Outcome {
        passed: true,
        report: None,
        csv: vec![("field.csv".into(), csv(coordinate_names(&resolved.equation), &samples)?)],
        warnings: Vec::new(),
    })
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    config: &'a SimConfig,
    run: &'a simulate::SimRun,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_phase_error: Option<f64>,
    energy_drift: f64,
    enstrophy_drift: f64,
    tolerance: f64,
    passed: bool,
}

fn relative_drift(first: f64, last: f64) -> f64 {
    if first == 0.0 {
        (last - first).abs()
    } else {
        ((last - first) / first).abs()
    }
}

pub fn simulate(args: &RunArgs) -> Result<Outcome> {
    let mut cfg: SimConfig = args.parse()?;
    if let Some([nx, ny]) = args.resolution {
        cfg.nx = nx;
        cfg.ny = ny;
    }
    let run = simulate::run(&cfg)?;
    let tolerance = args.tol.unwrap_or(0.02);
    let relative_phase_error = match (run.phase_speed, run.expected_phase_speed) {
        (Some(measured), Some(expected)) if expected != 0.0 => Some(((measured - expected) / expected).abs()),
        _ => None,
    };
    let (first, last) = (run.diagnostics[0], *run.diagnostics.last().expect("initial diagnostics"));
    let report = SimulateReport {
        config: &cfg,
        run: &run,
        relative_phase_error,
        energy_drift: relative_drift(first.energy, last.energy),
        enstrophy_drift: relative_drift(first.enstrophy, last.enstrophy),
        tolerance,
        passed: relative_phase_error.is_none_or(|e| e <= tolerance),
    };
    let mut diagnostics = String::from("t,energy,enstrophy,mean_zeta,max_abs_zeta,cfl\n");
    for d in &run.diagnostics {
        diagnostics.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            d.t, d.energy, d.enstrophy, d.mean_zeta, d.max_abs_zeta, d.cfl
        ));
    }
    let mut csv = vec![("diagnostics.csv".to_string(), diagnostics)];
    if cfg.write_snapshots {
        let grid = simulate::PeriodicGrid::new(cfg.lx, cfg.ly, cfg.nx, cfg.ny)?;
        let mut body = String::from("t,x,y,zeta\n");
        for snap in &run.snapshots {
            for (n, z) in snap.zeta.iter().enumerate() {
                body.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", snap.t, grid.x(n % cfg.nx), grid.y(n / cfg.nx), z));
            }
        }
        csv.push(("snapshots.csv".into(), body));
    }
    let mut warnings = Vec::new();
    if run.cfl_warnings > 0 {
        warnings.push(format!("CFL number exceeded {} on {} steps (max {:.3})", simulate::CFL_LIMIT, run.cfl_warnings, run.max_cfl));
    }
    Ok(Outcome { passed: report.passed, report: Some(to_json(&report)?), csv, warnings })
}
