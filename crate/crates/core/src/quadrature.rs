//! Adaptive Gauss–Kronrod (7/15) quadrature for vector-valued integrands.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 40;

fn kronrod<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<([f64; N], f64)>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let fc = f(c)?;
    for i in 0..N {
        k[i] = WGK[7] * fc[i];
        g[i] = WG[3] * fc[i];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx)?, f(c + dx)?);
        for i in 0..N {
            let s = f1[i] + f2[i];
            k[i] += WGK[j] * s;
            if j % 2 == 1 {
                g[i] += WG[j / 2] * s;
            }
        }
    }
    let mut err: f64 = 0.0;
    for i in 0..N {
        k[i] *= h;
        err = err.max((k[i] - g[i] * h).abs());
    }
    Ok((k, err))
}

fn adapt<const N: usize, F>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let (val, err) = kronrod(f, a, b)?;
    let size = val.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if err <= tol.max(64.0 * f64::EPSILON * size) || (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
        return Ok(val);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "quadrature on [{a}, {b}] did not reach tolerance {tol:e} (estimate {err:e})"
        )));
    }
    let m = 0.5 * (a + b);
    let left = adapt(f, a, m, 0.5 * tol, depth + 1)?;
    let right = adapt(f, m, b, 0.5 * tol, depth + 1)?;
    Ok(std::array::from_fn(|i| left[i] + right[i]))
}

/// `∫_a^b f` componentwise to absolute tolerance `tol`.
pub fn integrate_vec<const N: usize, F>(f: F, a: f64, b: f64, tol: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    if a == b {
        return Ok([0.0; N]);
    }
    adapt(&f, a, b, tol, 0)
}

pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(integrate_vec(|x| Ok([f(x)?]), a, b, tol)?[0])
}
