//! Adaptive classical RK4 with step doubling, for small first-order systems.

use crate::error::{Error, Result};

fn rk4_step<const N: usize, F>(f: &F, x: f64, y: [f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let add = |a: &[f64; N], b: &[f64; N], s: f64| -> [f64; N] { std::array::from_fn(|i| a[i] + s * b[i]) };
    let k1 = f(x, &y);
    let k2 = f(x + 0.5 * h, &add(&y, &k1, 0.5 * h));
    let k3 = f(x + 0.5 * h, &add(&y, &k2, 0.5 * h));
    let k4 = f(x + h, &add(&y, &k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` with local error per step
/// below `tol` (absolute, scaled by `1 + |y|`).
pub fn integrate<const N: usize, F>(f: F, x0: f64, y0: [f64; N], x1: f64, tol: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut h = span / 16.0;
    let (mut x, mut y) = (x0, y0);
    let mut iterations = 0usize;
    while (x1 - x) * dir > 0.0 {
        iterations += 1;
        if iterations > 2_000_000 {
            return Err(Error::InvalidParameter("ODE integration exceeded the step budget".into()));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let full = rk4_step(&f, x, y, h);
        let half = rk4_step(&f, x, y, 0.5 * h);
        let fine = rk4_step(&f, x + 0.5 * h, half, 0.5 * h);
        let mut err: f64 = 0.0;
        for i in 0..N {
            err = err.max((fine[i] - full[i]).abs() / (1.0 + fine[i].abs()));
        }
        err /= 15.0;
        if err <= tol || h.abs() < 1e-14 {
            x += h;
            y = std::array::from_fn(|i| fine[i] + (fine[i] - full[i]) / 15.0);
            let grow = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).min(2.0) };
            h *= grow.max(0.2);
        } else {
            h *= (0.9 * (tol / err).powf(0.2)).max(0.1);
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("ODE solution diverged".into()));
        }
    }
    Ok(y)
}

/// Fixed-step RK4 over `steps` equal steps.
pub fn integrate_fixed<const N: usize, F>(f: F, x0: f64, y0: [f64; N], x1: f64, steps: usize) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = (x1 - x0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        y = rk4_step(&f, x0 + i as f64 * h, y, h);
    }
    y
}
