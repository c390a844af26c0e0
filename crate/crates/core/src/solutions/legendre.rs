//! Associated Legendre functions of the first kind, Condon–Shortley phase
//! included.

use crate::error::{Error, Result};
use crate::jet::Jet;

fn check(n: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > n {
        return Err(Error::InvalidParameter(format!("|m| = {} exceeds n = {n}", m.abs())));
    }
    Ok(())
}

fn factorial_ratio(n: u32, m: u32) -> f64 {
    // (n − m)! / (n + m)!
    ((n - m + 1)..=(n + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// `P_n^m` on a jet argument; derivatives are exact for `|μ| < 1`.
pub fn legendre_jet(n: u32, m: i32, mu: &Jet) -> Result<Jet> {
    check(n, m)?;
    let am = m.unsigned_abs();
    let one_minus = 1.0 - *mu * *mu;
    let half_power = if am % 2 == 0 {
        one_minus.powi((am / 2) as i32)
    } else {
        if one_minus.value() <= 0.0 && mu.value().abs() > 1.0 {
            return Err(Error::Domain(format!("μ = {} outside [−1, 1]", mu.value())));
        }
        one_minus.sqrt() * one_minus.powi((am / 2) as i32)
    };
    let double_factorial: f64 = (1..=am).map(|k| (2 * k - 1) as f64).product();
    let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
    let mut p_prev = half_power * (sign * double_factorial);
    if n > am {
        let mut p = *mu * p_prev * (2 * am + 1) as f64;
        for k in (am + 2)..=n {
            let next = (*mu * p * (2 * k - 1) as f64 - p_prev * (k + am - 1) as f64) / (k - am) as f64;
            p_prev = p;
            p = next;
        }
        p_prev = p;
    }
    if m < 0 {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        p_prev = p_prev * (sign * factorial_ratio(n, am));
    }
    Ok(p_prev)
}

/// `P_n^m(μ)` for `|μ| ≤ 1`.
pub fn legendre_p(n: u32, m: i32, mu: f64) -> Result<f64> {
    if mu.abs() > 1.0 {
        return Err(Error::Domain(format!("μ = {mu} outside [−1, 1]")));
    }
    check(n, m)?;
    if mu.abs() == 1.0 && m != 0 {
        return Ok(0.0);
    }
    Ok(legendre_jet(n, m, &Jet::constant(mu))?.value())
}
