//! Doubly periodic β-plane integrator: RK4 in time, Arakawa Jacobian and
//! an FFT inversion of the five-point Laplacian.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Geometry, StreamFunction};
use crate::jet::Jet;
use crate::solutions::{FamilySpec, SolutionFamily};
use crate::verify::kahan_sum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicGrid {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
}

impl PeriodicGrid {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        let grid = Self { lx, ly, nx, ny };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 4 || self.ny < 4 || !(self.lx > 0.0 && self.ly > 0.0) {
            return Err(Error::Grid(format!("invalid periodic grid {self:?}")));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    fn len(&self) -> usize {
        self.nx * self.ny
    }

    /// Samples `f(x, y)` row by row (`index = j·nx + i`).
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|n| f(self.x(n % self.nx), self.y(n / self.nx))).collect()
    }
}

/// Spectral inverse of the five-point Laplacian on the periodic grid.
struct Poisson {
    grid: PeriodicGrid,
    fx: Arc<dyn Fft<f64>>,
    fy: Arc<dyn Fft<f64>>,
    ix: Arc<dyn Fft<f64>>,
    iy: Arc<dyn Fft<f64>>,
    /// Eigenvalues of the discrete Laplacian, `index = j·nx + i`.
    symbol: Vec<f64>,
}

impl Poisson {
    fn new(grid: PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        let (hx, hy) = (grid.hx(), grid.hy());
        let symbol = (0..grid.len())
            .map(|n| {
                let (i, j) = (n % grid.nx, n / grid.nx);
                let sx = (std::f64::consts::PI * i as f64 / grid.nx as f64).sin();
                let sy = (std::f64::consts::PI * j as f64 / grid.ny as f64).sin();
                -4.0 * (sx * sx / (hx * hx) + sy * sy / (hy * hy))
            })
            .collect();
        Self {
            grid,
            fx: planner.plan_fft_forward(grid.nx),
            fy: planner.plan_fft_forward(grid.ny),
            ix: planner.plan_fft_inverse(grid.nx),
            iy: planner.plan_fft_inverse(grid.ny),
            symbol,
        }
    }

    fn transform(&self, data: &mut [Complex64], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        data.par_chunks_mut(nx).for_each(|row| rows.process(row));
        let mut columns: Vec<Complex64> = (0..nx * ny).map(|n| data[(n % ny) * nx + n / ny]).collect();
        columns.par_chunks_mut(ny).for_each(|col| cols.process(col));
        for (n, v) in columns.into_iter().enumerate() {
            data[(n % ny) * nx + n / ny] = v;
        }
    }

    /// `ψ` with zero mean and `∇²_h ψ = ζ − mean(ζ)`.
    fn solve(&self, zeta: &[f64]) -> Result<Vec<f64>> {
        let mut data: Vec<Complex64> = zeta.iter().map(|&z| Complex64::new(z, 0.0)).collect();
        self.transform(&mut data, &self.fx, &self.fy);
        for (v, &s) in data.iter_mut().zip(&self.symbol) {
            *v = if s == 0.0 { Complex64::new(0.0, 0.0) } else { *v / s };
        }
        self.transform(&mut data, &self.ix, &self.iy);
        let scale = 1.0 / self.grid.len() as f64;
        let psi: Vec<f64> = data.iter().map(|v| v.re * scale).collect();
        if !psi.iter().all(|v| v.is_finite()) {
            return Err(Error::Poisson("non-finite stream function".into()));
        }
        Ok(psi)
    }
}

/// Periodic neighbours `(previous, next)` of each index.
fn neighbours(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| ((i + n - 1) % n, (i + 1) % n)).collect()
}

/// Five-point Laplacian with periodic wrap.
pub fn laplacian(grid: &PeriodicGrid, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let (cx, cy) = (1.0 / (grid.hx() * grid.hx()), 1.0 / (grid.hy() * grid.hy()));
    let (xs, ys) = (neighbours(nx), neighbours(ny));
    let mut out = vec![0.0; grid.len()];
    out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let (south, north) = (&f[ys[j].0 * nx..][..nx], &f[ys[j].1 * nx..][..nx]);
        let here = &f[j * nx..][..nx];
        for (i, value) in row.iter_mut().enumerate() {
            let (w, e) = xs[i];
            *value = (here[e] - 2.0 * here[i] + here[w]) * cx + (north[i] - 2.0 * here[i] + south[i]) * cy;
        }
    });
    out
}

/// `J(ψ, ζ) = ψ_x ζ_y − ψ_y ζ_x` in the Arakawa form.
pub fn arakawa_jacobian(grid: &PeriodicGrid, psi: &[f64], zeta: &[f64]) -> Vec<f64> {
    let nx = grid.nx;
    let scale = 1.0 / (12.0 * grid.hx() * grid.hy());
    let (xs, ys) = (neighbours(nx), neighbours(grid.ny));
    let mut out = vec![0.0; grid.len()];
    out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let (s, n) = (ys[j].0 * nx, ys[j].1 * nx);
        let (ps, pc, pn) = (&psi[s..s + nx], &psi[j * nx..(j + 1) * nx], &psi[n..n + nx]);
        let (zs, zc, zn) = (&zeta[s..s + nx], &zeta[j * nx..(j + 1) * nx], &zeta[n..n + nx]);
        for (i, value) in row.iter_mut().enumerate() {
            let (w, e) = xs[i];
            let jpp = (pc[e] - pc[w]) * (zn[i] - zs[i]) - (pn[i] - ps[i]) * (zc[e] - zc[w]);
            let jpx = pc[e] * (zn[e] - zs[e]) - pc[w] * (zn[w] - zs[w]) - pn[i] * (zn[e] - zn[w]) + ps[i] * (zs[e] - zs[w]);
            let jxp = zn[i] * (pn[e] - pn[w]) - zs[i] * (ps[e] - ps[w]) - zc[e] * (pn[e] - ps[e]) + zc[w] * (pn[w] - ps[w]);
            *value = (jpp + jpx + jxp) * scale;
        }
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    /// Mean of `|∇ψ|²` (forward differences).
    pub energy: f64,
    /// Mean of `ζ²`.
    pub enstrophy: f64,
    pub mean_zeta: f64,
    pub max_abs_zeta: f64,
    pub cfl: f64,
}

pub struct SimState {
    grid: PeriodicGrid,
    beta: f64,
    dt: f64,
    t: f64,
    zeta: Vec<f64>,
    psi: Vec<f64>,
    poisson: Poisson,
}

impl std::fmt::Debug for SimState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimState")
            .field("grid", &self.grid)
            .field("beta", &self.beta)
            .field("dt", &self.dt)
            .field("t", &self.t)
            .finish()
    }
}

impl SimState {
    pub fn new(grid: PeriodicGrid, beta: f64, dt: f64, zeta: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if zeta.len() != grid.len() {
            return Err(Error::Grid(format!("ζ has {} values, grid has {}", zeta.len(), grid.len())));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter("time step must be positive".into()));
        }
        let poisson = Poisson::new(grid);
        let psi = poisson.solve(&zeta)?;
        Ok(Self { grid, beta, dt, t: 0.0, zeta, psi, poisson })
    }

    /// Initial vorticity from the analytic `∇²ψ` of a plane field at `t0`.
    pub fn from_field(grid: PeriodicGrid, beta: f64, dt: f64, field: &dyn StreamFunction, t0: f64) -> Result<Self> {
        if field.geometry() != Geometry::Plane {
            return Err(Error::InvalidParameter("the simulator runs on the plane only".into()));
        }
        let mut zeta = Vec::with_capacity(grid.len());
        for n in 0..grid.len() {
            let jet = field.eval_jet(&Jet::point([t0, grid.x(n % grid.nx), grid.y(n / grid.nx)]))?;
            zeta.push(jet.derivative([0, 2, 0]) + jet.derivative([0, 0, 2]));
        }
        let mut state = Self::new(grid, beta, dt, zeta)?;
        state.t = t0;
        Ok(state)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    fn tendency(&self, zeta: &[f64]) -> Result<Vec<f64>> {
        let psi = self.poisson.solve(zeta)?;
        let jac = arakawa_jacobian(&self.grid, &psi, zeta);
        let (nx, hx) = (self.grid.nx, self.grid.hx());
        Ok((0..self.grid.len())
            .into_par_iter()
            .map(|n| {
                let (i, row) = (n % nx, n - n % nx);
                let east = row + (i + 1) % nx;
                let west = row + (i + nx - 1) % nx;
                -jac[n] - self.beta * (psi[east] - psi[west]) / (2.0 * hx)
            })
            .collect())
    }

    /// `Δt · max|∇ψ| / min(hx, hy)`.
    pub fn cfl(&self) -> f64 {
        let (nx, ny, hx, hy) = (self.grid.nx, self.grid.ny, self.grid.hx(), self.grid.hy());
        let mut speed: f64 = 0.0;
        for n in 0..self.grid.len() {
            let (i, j) = (n % nx, n / nx);
            let u = (self.psi[j * nx + (i + 1) % nx] - self.psi[j * nx + (i + nx - 1) % nx]) / (2.0 * hx);
            let v = (self.psi[((j + 1) % ny) * nx + i] - self.psi[((j + ny - 1) % ny) * nx + i]) / (2.0 * hy);
            speed = speed.max(u.hypot(v));
        }
        self.dt * speed / hx.min(hy)
    }

    /// One RK4 step; returns the CFL number before the step.
    pub fn step(&mut self) -> Result<f64> {
        let cfl = self.cfl();
        let dt = self.dt;
        let axpy = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> { base.iter().zip(k).map(|(b, k)| b + s * k).collect() };
        let k1 = self.tendency(&self.zeta)?;
        let k2 = self.tendency(&axpy(&self.zeta, &k1, 0.5 * dt))?;
        let k3 = self.tendency(&axpy(&self.zeta, &k2, 0.5 * dt))?;
        let k4 = self.tendency(&axpy(&self.zeta, &k3, dt))?;
        for n in 0..self.zeta.len() {
            self.zeta[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        self.psi = self.poisson.solve(&self.zeta)?;
        self.t += dt;
        Ok(cfl)
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let (nx, ny, hx, hy) = (self.grid.nx, self.grid.ny, self.grid.hx(), self.grid.hy());
        let n = self.grid.len() as f64;
        let grad = (0..self.grid.len()).map(|k| {
            let (i, j) = (k % nx, k / nx);
            let u = (self.psi[j * nx + (i + 1) % nx] - self.psi[k]) / hx;
            let v = (self.psi[((j + 1) % ny) * nx + i] - self.psi[k]) / hy;
            u * u + v * v
        });
        Diagnostics {
            t: self.t,
            energy: kahan_sum(grad) / n,
            enstrophy: kahan_sum(self.zeta.iter().map(|z| z * z)) / n,
            mean_zeta: kahan_sum(self.zeta.iter().copied()) / n,
            max_abs_zeta: self.zeta.iter().fold(0.0, |m: f64, z| m.max(z.abs())),
            cfl: self.cfl(),
        }
    }

    /// `max|∇²_h ψ − (ζ − mean ζ)| / max|ζ|`.
    pub fn poisson_residual(&self) -> f64 {
        let lap = laplacian(&self.grid, &self.psi);
        let mean = kahan_sum(self.zeta.iter().copied()) / self.grid.len() as f64;
        let scale = self.zeta.iter().fold(0.0, |m: f64, z| m.max(z.abs())).max(f64::MIN_POSITIVE);
        lap.iter().zip(&self.zeta).fold(0.0, |m: f64, (l, z)| m.max((l - (z - mean)).abs())) / scale
    }
}

/// A stored vorticity field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub zeta: Vec<f64>,
}

/// Zonal phase speed from the unwrapped phase of the projection of ζ onto
/// `e^{i(kx + ly)}`, by least squares against time.
pub fn measure_phase_speed(grid: &PeriodicGrid, trajectory: &[Snapshot], wavevector: [f64; 2]) -> Result<f64> {
    let [k, l] = wavevector;
    if k == 0.0 {
        return Err(Error::InvalidParameter("zonal wavenumber must be nonzero".into()));
    }
    if trajectory.len() < 2 {
        return Err(Error::InvalidParameter("need at least two snapshots".into()));
    }
    let basis: Vec<Complex64> = (0..grid.len())
        .map(|n| Complex64::from_polar(1.0, -(k * grid.x(n % grid.nx) + l * grid.y(n / grid.nx))))
        .collect();
    let mut phases = Vec::with_capacity(trajectory.len());
    let mut previous: Option<f64> = None;
    for snap in trajectory {
        if snap.zeta.len() != basis.len() {
            return Err(Error::Grid("snapshot does not match the grid".into()));
        }
        let re = kahan_sum(snap.zeta.iter().zip(&basis).map(|(z, b)| z * b.re));
        let im = kahan_sum(snap.zeta.iter().zip(&basis).map(|(z, b)| z * b.im));
        let amplitude = re.hypot(im) / basis.len() as f64;
        if amplitude < 1e-8 {
            return Err(Error::DegenerateProjection(amplitude));
        }
        let mut phase = im.atan2(re);
        if let Some(prev) = previous {
            phase += std::f64::consts::TAU * ((prev - phase) / std::f64::consts::TAU).round();
        }
        previous = Some(phase);
        phases.push((snap.t, phase));
    }
    let m = phases.len() as f64;
    let (mt, mp) = (phases.iter().map(|p| p.0).sum::<f64>() / m, phases.iter().map(|p| p.1).sum::<f64>() / m);
    let (mut num, mut den) = (0.0, 0.0);
    for &(t, p) in &phases {
        num += (t - mt) * (p - mp);
        den += (t - mt) * (t - mt);
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter("snapshots share a single time".into()));
    }
    // the projection of sin(kx + ly − ωt) rotates as e^{−iωt}
    Ok(-(num / den) / k)
}

/// CFL number above which a step is counted as a warning.
pub const CFL_LIMIT: f64 = 1.0;

/// JSON run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Ly")]
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub beta: f64,
    pub dt: f64,
    pub steps: usize,
    pub init: FamilySpec,
    /// Snapshot spacing in steps for phase measurement and output.
    #[serde(default = "default_every")]
    pub snapshot_every: usize,
    /// Also emit the stored vorticity snapshots as CSV.
    #[serde(default)]
    pub write_snapshots: bool,
}

fn default_every() -> usize {
    10
}

#[derive(Clone, Debug, Serialize)]
pub struct SimRun {
    pub diagnostics: Vec<Diagnostics>,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
    /// Measured zonal phase speed, when the initial field is a Rossby wave.
    pub phase_speed: Option<f64>,
    /// Analytic zonal phase speed of the initial family, when known.
    pub expected_phase_speed: Option<f64>,
    /// Relative L2 error against the analytic family at the final time.
    pub final_relative_error: f64,
    pub max_cfl: f64,
    pub cfl_warnings: usize,
}

/// Runs a configuration, recording diagnostics and snapshots every
/// `snapshot_every` steps.
pub fn run(config: &SimConfig) -> Result<SimRun> {
    let grid = PeriodicGrid::new(config.lx, config.ly, config.nx, config.ny)?;
    if config.snapshot_every == 0 {
        return Err(Error::Config("snapshot_every must be ≥ 1".into()));
    }
    let family = SolutionFamily::new(config.init.clone())?;
    let mut state = SimState::from_field(grid, config.beta, config.dt, &family, 0.0)?;
    let mut diagnostics = vec![state.diagnostics()];
    let mut snapshots = vec![Snapshot { t: 0.0, zeta: state.zeta.clone() }];
    let (mut max_cfl, mut cfl_warnings) = (0.0f64, 0usize);
    for n in 1..=config.steps {
        let cfl = state.step()?;
        max_cfl = max_cfl.max(cfl);
        if cfl > CFL_LIMIT {
            cfl_warnings += 1;
        }
        if n % config.snapshot_every == 0 || n == config.steps {
            diagnostics.push(state.diagnostics());
            snapshots.push(Snapshot { t: state.t, zeta: state.zeta.clone() });
        }
    }
    let (phase_speed, expected_phase_speed) = match config.init {
        FamilySpec::RossbyWave { k, l, .. } if k != 0.0 => {
            (Some(measure_phase_speed(&grid, &snapshots, [k, l])?), family.phase_speed())
        }
        _ => (None, None),
    };
    let exact = analytic_vorticity(&grid, &family, state.t)?;
    let err = kahan_sum(state.zeta.iter().zip(&exact).map(|(a, b)| (a - b) * (a - b)));
    let norm = kahan_sum(exact.iter().map(|b| b * b));
    let final_relative_error = if norm > 0.0 { (err / norm).sqrt() } else { err.sqrt() };
    Ok(SimRun { diagnostics, snapshots, phase_speed, expected_phase_speed, final_relative_error, max_cfl, cfl_warnings })
}

/// `∇²ψ` of a plane field sampled on the grid at time `t`.
pub fn analytic_vorticity(grid: &PeriodicGrid, field: &dyn StreamFunction, t: f64) -> Result<Vec<f64>> {
    (0..grid.len())
        .map(|n| {
            let jet = field.eval_jet(&Jet::point([t, grid.x(n % grid.nx), grid.y(n / grid.nx)]))?;
            Ok(jet.derivative([0, 2, 0]) + jet.derivative([0, 0, 2]))
        })
        .collect()
}
