use rayon::prelude::*;

use super::grid::{DerivativeMode, FieldSample, GridMeta, PlaneGrid, ResidualReport, SphereGrid};
use crate::error::{Error, Result};
use crate::field::{Geometry, StreamFunction};
use crate::jet::Jet;
use crate::solutions::{plane_residual, sphere_residual};

fn check_geometry(psi: &dyn StreamFunction, want: Geometry) -> Result<()> {
    if psi.geometry() != want {
        return Err(Error::InvalidParameter(format!("expected a {want} field, got {}", psi.geometry())));
    }
    Ok(())
}

fn collect_rows<T: Send>(rows: Vec<Result<Vec<T>>>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

/// `ψ(t_k, x_i, y_j)` on the whole grid, indexed `[k][j][i]`.
fn sample_values(
    psi: &dyn StreamFunction,
    times: &[f64],
    n1: usize,
    n2: usize,
    s1: impl Fn(usize) -> f64 + Sync,
    s2: impl Fn(usize) -> f64 + Sync,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let rows: Vec<Result<Vec<f64>>> = (0..times.len() * n2)
        .into_par_iter()
        .map(|r| {
            let (k, j) = (r / n2, r % n2);
            (0..n1).map(|i| psi.eval([times[k], s1(i), s2(j)])).collect()
        })
        .collect();
    let mut flat = rows.into_iter();
    let mut out = Vec::with_capacity(times.len());
    for _ in times {
        let mut slab = Vec::with_capacity(n2);
        for _ in 0..n2 {
            slab.push(flat.next().expect("row count")?);
        }
        out.push(slab);
    }
    Ok(out)
}

fn interior_times(times: &[f64]) -> Result<()> {
    if times.len() < 3 {
        return Err(Error::Grid("finite-difference mode needs at least 3 time samples".into()));
    }
    Ok(())
}

/// Pointwise samples of the β-plane residual.
pub fn plane_field(psi: &dyn StreamFunction, grid: &PlaneGrid, beta: f64, mode: DerivativeMode) -> Result<Vec<FieldSample>> {
    check_geometry(psi, Geometry::Plane)?;
    grid.validate()?;
    match mode {
        DerivativeMode::Analytic => {
            let rows: Vec<Result<Vec<FieldSample>>> = (0..grid.times.len() * grid.ny)
                .into_par_iter()
                .map(|r| {
                    let (t, y) = (grid.times[r / grid.ny], grid.y(r % grid.ny));
                    (0..grid.nx)
                        .map(|i| {
                            let p = [t, grid.x(i), y];
                            let jet = psi.eval_jet(&Jet::point(p))?;
                            Ok(FieldSample {
                                t,
                                s1: p[1],
                                s2: y,
                                psi: jet.value(),
                                zeta: jet.derivative([0, 2, 0]) + jet.derivative([0, 0, 2]),
                                residual: plane_residual(&jet, beta),
                            })
                        })
                        .collect()
                })
                .collect();
            collect_rows(rows)
        }
        DerivativeMode::FiniteDifference => plane_fd(psi, grid, beta),
    }
}

fn plane_fd(psi: &dyn StreamFunction, grid: &PlaneGrid, beta: f64) -> Result<Vec<FieldSample>> {
    interior_times(&grid.times)?;
    let (nx, ny, hx, hy) = (grid.nx, grid.ny, grid.hx(), grid.hy());
    let v = sample_values(psi, &grid.times, nx, ny, |i| grid.x(i), |j| grid.y(j))?;
    let zeta: Vec<Vec<Vec<f64>>> = v
        .iter()
        .map(|s| {
            let mut z = vec![vec![0.0; nx]; ny];
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    z[j][i] = (s[j][i + 1] - 2.0 * s[j][i] + s[j][i - 1]) / (hx * hx)
                        + (s[j + 1][i] - 2.0 * s[j][i] + s[j - 1][i]) / (hy * hy);
                }
            }
            z
        })
        .collect();
    let mut out = Vec::new();
    for k in 1..grid.times.len() - 1 {
        let dt = grid.times[k + 1] - grid.times[k - 1];
        let (s, z) = (&v[k], &zeta[k]);
        for j in 2..ny - 2 {
            for i in 2..nx - 2 {
                let zt = (zeta[k + 1][j][i] - zeta[k - 1][j][i]) / dt;
                let px = (s[j][i + 1] - s[j][i - 1]) / (2.0 * hx);
                let py = (s[j + 1][i] - s[j - 1][i]) / (2.0 * hy);
                let zx = (z[j][i + 1] - z[j][i - 1]) / (2.0 * hx);
                let zy = (z[j + 1][i] - z[j - 1][i]) / (2.0 * hy);
                out.push(FieldSample {
                    t: grid.times[k],
                    s1: grid.x(i),
                    s2: grid.y(j),
                    psi: s[j][i],
                    zeta: z[j][i],
                    residual: zt + px * zy - py * zx + beta * px,
                });
            }
        }
    }
    Ok(out)
}

/// Residual norms of the β-plane equation over the grid (interior points
/// in finite-difference mode).
pub fn residual_plane(psi: &dyn StreamFunction, grid: &PlaneGrid, beta: f64, mode: DerivativeMode) -> Result<ResidualReport> {
    let samples = plane_field(psi, grid, beta, mode)?;
    ResidualReport::from_samples(&samples, GridMeta::Plane(grid.clone()), mode)
}

/// As [`residual_plane`], with the ratio against a once-refined grid.
pub fn residual_plane_convergence(
    psi: &dyn StreamFunction,
    grid: &PlaneGrid,
    beta: f64,
    mode: DerivativeMode,
) -> Result<ResidualReport> {
    let coarse = plane_field(psi, grid, beta, mode)?;
    let fine = plane_field(psi, &grid.refined(), beta, mode)?;
    converge(&coarse, &fine, GridMeta::Plane(grid.clone()), mode)
}

/// Pointwise samples of the spherical residual; `ψ` in the frame rotating
/// with `grid.omega`.
pub fn sphere_field(psi: &dyn StreamFunction, grid: &SphereGrid, mode: DerivativeMode) -> Result<Vec<FieldSample>> {
    check_geometry(psi, Geometry::Sphere)?;
    grid.validate()?;
    let r2 = grid.radius * grid.radius;
    match mode {
        DerivativeMode::Analytic => {
            let rows: Vec<Result<Vec<FieldSample>>> = (0..grid.times.len() * grid.nmu)
                .into_par_iter()
                .map(|r| {
                    let (t, mu) = (grid.times[r / grid.nmu], grid.mu(r % grid.nmu));
                    (0..grid.nlambda)
                        .map(|i| {
                            let p = [t, grid.lambda(i), mu];
                            let jet = psi.eval_jet(&Jet::point(p))?;
                            let w = 1.0 - mu * mu;
                            let lap = jet.derivative([0, 2, 0]) / w + w * jet.derivative([0, 0, 2])
                                - 2.0 * mu * jet.derivative([0, 0, 1]);
                            Ok(FieldSample {
                                t,
                                s1: p[1],
                                s2: mu,
                                psi: jet.value(),
                                zeta: lap / r2,
                                residual: sphere_residual(&jet, mu, grid.omega, grid.radius),
                            })
                        })
                        .collect()
                })
                .collect();
            collect_rows(rows)
        }
        DerivativeMode::FiniteDifference => sphere_fd(psi, grid),
    }
}

fn sphere_fd(psi: &dyn StreamFunction, grid: &SphereGrid) -> Result<Vec<FieldSample>> {
    interior_times(&grid.times)?;
    let (nl, nm, hl, hm) = (grid.nlambda, grid.nmu, grid.hlambda(), grid.hmu());
    let r2 = grid.radius * grid.radius;
    let periodic = grid.lambda_range.is_none();
    let left = |i: usize| if i == 0 { nl - 1 } else { i - 1 };
    let right = |i: usize| if i + 1 == nl { 0 } else { i + 1 };
    let v = sample_values(psi, &grid.times, nl, nm, |i| grid.lambda(i), |j| grid.mu(j))?;
    let lam_range = |margin: usize| if periodic { 0..nl } else { margin..nl - margin };
    let zeta: Vec<Vec<Vec<f64>>> = v
        .iter()
        .map(|s| {
            let mut z = vec![vec![0.0; nl]; nm];
            for j in 1..nm - 1 {
                let mu = grid.mu(j);
                let w = 1.0 - mu * mu;
                let (wp, wm) = (1.0 - (mu + 0.5 * hm).powi(2), 1.0 - (mu - 0.5 * hm).powi(2));
                for i in lam_range(1) {
                    let pll = (s[j][right(i)] - 2.0 * s[j][i] + s[j][left(i)]) / (hl * hl);
                    let pmm = (wp * (s[j + 1][i] - s[j][i]) - wm * (s[j][i] - s[j - 1][i])) / (hm * hm);
                    z[j][i] = (pll / w + pmm) / r2;
                }
            }
            z
        })
        .collect();
    let mut out = Vec::new();
    for k in 1..grid.times.len() - 1 {
        let dt = grid.times[k + 1] - grid.times[k - 1];
        let (s, z) = (&v[k], &zeta[k]);
        for j in 2..nm - 2 {
            for i in lam_range(2) {
                let zt = (zeta[k + 1][j][i] - zeta[k - 1][j][i]) / dt;
                let pl = (s[j][right(i)] - s[j][left(i)]) / (2.0 * hl);
                let pm = (s[j + 1][i] - s[j - 1][i]) / (2.0 * hm);
                let zl = (z[j][right(i)] - z[j][left(i)]) / (2.0 * hl);
                let zm = (z[j + 1][i] - z[j - 1][i]) / (2.0 * hm);
                out.push(FieldSample {
                    t: grid.times[k],
                    s1: grid.lambda(i),
                    s2: grid.mu(j),
                    psi: s[j][i],
                    zeta: z[j][i],
                    residual: zt + (pl * zm - pm * zl + 2.0 * grid.omega * pl) / r2,
                });
            }
        }
    }
    Ok(out)
}

pub fn residual_sphere(psi: &dyn StreamFunction, grid: &SphereGrid, mode: DerivativeMode) -> Result<ResidualReport> {
    let samples = sphere_field(psi, grid, mode)?;
    ResidualReport::from_samples(&samples, GridMeta::Sphere(grid.clone()), mode)
}

pub fn residual_sphere_convergence(psi: &dyn StreamFunction, grid: &SphereGrid, mode: DerivativeMode) -> Result<ResidualReport> {
    let coarse = sphere_field(psi, grid, mode)?;
    let fine = sphere_field(psi, &grid.refined(), mode)?;
    converge(&coarse, &fine, GridMeta::Sphere(grid.clone()), mode)
}

/// Report on the coarse samples with the max-norm ratio taken over the
/// points both resolutions share.
fn converge(coarse: &[FieldSample], fine: &[FieldSample], grid: GridMeta, mode: DerivativeMode) -> Result<ResidualReport> {
    let key = |s: &FieldSample| [s.t, s.s1, s.s2].map(|v| (v * 1e9).round() as i64);
    let shared: std::collections::HashSet<[i64; 3]> = coarse.iter().map(key).collect();
    let fine_shared: Vec<f64> = fine.iter().filter(|s| shared.contains(&key(s))).map(|s| s.residual).collect();
    let report = ResidualReport::from_samples(coarse, grid.clone(), mode)?;
    let fine_report = ResidualReport::from_residuals(&fine_shared, grid, mode)?;
    Ok(report.with_refinement(&fine_report))
}
