use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform `(x, y)` grid with a list of time samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneGrid {
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub y0: f64,
    pub y1: f64,
    pub ny: usize,
    pub times: Vec<f64>,
}

impl PlaneGrid {
    pub fn new(x: [f64; 2], nx: usize, y: [f64; 2], ny: usize, times: Vec<f64>) -> Result<Self> {
        let grid = Self { x0: x[0], x1: x[1], nx, y0: y[0], y1: y[1], ny, times };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::Grid(format!("need nx, ny ≥ 8, got {} × {}", self.nx, self.ny)));
        }
        if !(self.x1 > self.x0 && self.y1 > self.y0) {
            return Err(Error::Grid("grid extents must be increasing".into()));
        }
        if self.times.is_empty() {
            return Err(Error::Grid("no time samples".into()));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy()
    }

    /// Same extents with spacings and time steps halved.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
            times: refine_times(&self.times),
            ..self.clone()
        }
    }
}

/// `nλ` points on `[0, 2π)` and `nμ` points on `[−1+δ, 1−δ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereGrid {
    pub nlambda: usize,
    pub nmu: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub times: Vec<f64>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub omega: f64,
    /// Optional λ window replacing the full circle, for non-periodic fields.
    #[serde(default)]
    pub lambda_range: Option<[f64; 2]>,
}

fn default_delta() -> f64 {
    1e-2
}

fn default_radius() -> f64 {
    1.0
}

impl SphereGrid {
    pub fn new(nlambda: usize, nmu: usize, times: Vec<f64>, omega: f64) -> Result<Self> {
        let grid = Self { nlambda, nmu, delta: default_delta(), times, radius: 1.0, omega, lambda_range: None };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nlambda < 8 || self.nmu < 8 {
            return Err(Error::Grid(format!("need nλ, nμ ≥ 8, got {} × {}", self.nlambda, self.nmu)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Grid(format!("pole exclusion δ = {} must lie in (0, 1)", self.delta)));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Grid("radius must be positive".into()));
        }
        if self.times.is_empty() {
            return Err(Error::Grid("no time samples".into()));
        }
        if let Some([a, b]) = self.lambda_range {
            if !(b > a) {
                return Err(Error::Grid("λ window must be increasing".into()));
            }
        }
        Ok(())
    }

    pub fn hlambda(&self) -> f64 {
        match self.lambda_range {
            Some([a, b]) => (b - a) / (self.nlambda - 1) as f64,
            None => std::f64::consts::TAU / self.nlambda as f64,
        }
    }

    pub fn hmu(&self) -> f64 {
        2.0 * (1.0 - self.delta) / (self.nmu - 1) as f64
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.lambda_range.map_or(0.0, |r| r[0]) + i as f64 * self.hlambda()
    }

    pub fn mu(&self, j: usize) -> f64 {
        -(1.0 - self.delta) + j as f64 * self.hmu()
    }

    pub fn refined(&self) -> Self {
        let nlambda = match self.lambda_range {
            Some(_) => 2 * self.nlambda - 1,
            None => 2 * self.nlambda,
        };
        Self { nlambda, nmu: 2 * self.nmu - 1, times: refine_times(&self.times), ..self.clone() }
    }
}

/// Uniform grid in the reduced variables `(p, q)`; one-variable reductions
/// use `nq = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedGrid {
    pub p0: f64,
    pub p1: f64,
    pub np: usize,
    #[serde(default)]
    pub q0: f64,
    #[serde(default)]
    pub q1: f64,
    #[serde(default = "one_point")]
    pub nq: usize,
}

fn one_point() -> usize {
    1
}

impl ReducedGrid {
    pub fn new(p: [f64; 2], np: usize, q: [f64; 2], nq: usize) -> Result<Self> {
        if np < 2 || nq < 1 || !(p[1] > p[0]) || (nq > 1 && !(q[1] > q[0])) {
            return Err(Error::Grid("reduced grid needs increasing extents and np ≥ 2".into()));
        }
        Ok(Self { p0: p[0], p1: p[1], np, q0: q[0], q1: q[1], nq })
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        let step = |a: f64, b: f64, n: usize, k: usize| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 };
        let mut out = Vec::with_capacity(self.np * self.nq);
        for j in 0..self.nq {
            for i in 0..self.np {
                out.push([step(self.p0, self.p1, self.np, i), step(self.q0, self.q1, self.nq, j)]);
            }
        }
        out
    }
}

fn refine_times(times: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * times.len());
    for w in times.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(times.last());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridMeta {
    Plane(PlaneGrid),
    Sphere(SphereGrid),
    Reduced(ReducedGrid),
}

/// One evaluated grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldSample {
    pub t: f64,
    pub s1: f64,
    pub s2: f64,
    pub psi: f64,
    pub zeta: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_norm: f64,
    /// Root-mean-square over the evaluated points.
    pub l2_norm: f64,
    pub points: usize,
    pub grid: GridMeta,
    pub mode: DerivativeMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_ratio: Option<f64>,
}

impl ResidualReport {
    pub fn from_residuals(values: &[f64], grid: GridMeta, mode: DerivativeMode) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Grid("no interior points to evaluate".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite residual {bad}")));
        }
        let max_norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mean_square = kahan_sum(values.iter().map(|v| v * v)) / values.len() as f64;
        Ok(Self { max_norm, l2_norm: mean_square.sqrt(), points: values.len(), grid, mode, convergence_ratio: None })
    }

    pub fn from_samples(samples: &[FieldSample], grid: GridMeta, mode: DerivativeMode) -> Result<Self> {
        let values: Vec<f64> = samples.iter().map(|s| s.residual).collect();
        Self::from_residuals(&values, grid, mode)
    }

    /// Attaches `self.max / fine.max` from a refined evaluation.
    pub fn with_refinement(mut self, fine: &ResidualReport) -> Self {
        self.convergence_ratio = Some(self.max_norm / fine.max_norm);
        self
    }
}

/// Compensated summation in iteration order.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Writes `t,s1,s2,psi,zeta,residual` rows with the given coordinate names.
pub fn write_csv<W: Write>(out: &mut W, names: [&str; 2], samples: &[FieldSample]) -> Result<()> {
    writeln!(out, "t,{},{},psi,zeta,residual", names[0], names[1])?;
    for s in samples {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.s1, s.s2, s.psi, s.zeta, s.residual)?;
    }
    Ok(())
}
