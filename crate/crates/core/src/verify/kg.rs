//! Change of variables taking the reduced equation of case `P3` to the
//! Klein–Gordon equation `ṽ_{p̃q̃} + βṽ = 0`.
//!
//! Integrating the reduced equation once in `p` gives
//! `((1+f²)v_p)_q + βv = f''p + h`, so the factor `1 + f²` multiplies `v`
//! rather than dividing it.

use std::sync::Arc;

use super::reduced::{ReducedFn, reduced_fn};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature;
use crate::timefn::TimeFunction;

/// `ṽ = (1+f²)(v − (f''/β)p + h/β + ((1+f²)f'')'/β²)`, `q̃ = ∫ dq/(1+f²)`,
/// `p̃ = p`, with `q̃` anchored at `q = 0` (or `±1` on a half-line).
#[derive(Clone, Debug)]
pub struct KleinGordon {
    beta: f64,
    f: TimeFunction,
    ddf: TimeFunction,
    h: TimeFunction,
    /// `((1+f²)f'')'`.
    tail: TimeFunction,
    anchor: f64,
}

impl KleinGordon {
    pub fn new(beta: f64, f: TimeFunction, h: TimeFunction) -> Result<Self> {
        if beta == 0.0 {
            return Err(Error::InvalidParameter("the Klein–Gordon form needs β ≠ 0".into()));
        }
        let ddf = f.derivative().derivative();
        let one_plus = TimeFunction::constant(1.0).add(&f.mul(&f)?);
        let tail = one_plus.mul(&ddf)?.derivative();
        let anchor = f.domain()?.map_or(0.0, |d| d.anchor());
        Ok(Self { beta, f, ddf, h, tail, anchor })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn one_plus_f2(&self, q: &Jet) -> Result<Jet> {
        let f = self.f.jet(q)?;
        Ok(f * f + 1.0)
    }

    /// `q̃(q)`.
    pub fn q_tilde(&self, q: f64) -> Result<f64> {
        quadrature::integrate(|s| Ok(1.0 / (1.0 + self.f.eval(s)?.powi(2))), self.anchor, q, 1e-14)
    }

    /// `q̃` composed with a jet argument.
    pub fn q_tilde_jet(&self, q: &Jet) -> Result<Jet> {
        let q0 = q.value();
        let rate = self.one_plus_f2(&Jet::var(q0, 0))?.recip();
        Ok(q.compose([self.q_tilde(q0)?, rate.value(), rate.derivative([1, 0, 0]), rate.derivative([2, 0, 0])]))
    }

    /// Inverse of `q̃` by safeguarded Newton iteration.
    pub fn q_of_q_tilde(&self, target: f64) -> Result<f64> {
        // q̃' ∈ (0, 1], so |q − anchor| ≥ |q̃|; widen until bracketed.
        let mut lo = self.anchor;
        let mut hi = self.anchor;
        let mut width = target.abs().max(1.0);
        loop {
            let (a, b) = (self.anchor - width, self.anchor + width);
            if self.q_tilde(a)? <= target && self.q_tilde(b)? >= target {
                lo = lo.min(a);
                hi = hi.max(b);
                break;
            }
            width *= 2.0;
            if width > 1e12 {
                return Err(Error::Domain(format!("q̃ = {target} is not attained")));
            }
        }
        let mut q = 0.5 * (lo + hi);
        for _ in 0..200 {
            let value = self.q_tilde(q)? - target;
            if value.abs() < 1e-15 * (1.0 + target.abs()) {
                return Ok(q);
            }
            if value > 0.0 {
                hi = q;
            } else {
                lo = q;
            }
            let newton = q - value * (1.0 + self.f.eval(q)?.powi(2));
            q = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 * (1.0 + q.abs()) {
                return Ok(q);
            }
        }
        Ok(q)
    }

    /// `q` as a jet in `q̃`.
    fn q_jet(&self, q_tilde: &Jet) -> Result<Jet> {
        let q0 = self.q_of_q_tilde(q_tilde.value())?;
        // derivatives of the inverse from those of q̃(q)
        let r = self.one_plus_f2(&Jet::var(q0, 0))?;
        let (s, s1, s2) = (r.value(), r.derivative([1, 0, 0]), r.derivative([2, 0, 0]));
        // dq/dq̃ = 1 + f² =: s(q); d²q/dq̃² = s' s; d³q/dq̃³ = (s'' s + s'²) s
        Ok(q_tilde.compose([q0, s, s1 * s, (s2 * s + s1 * s1) * s]))
    }

    /// Gauge part `−(f''/β)p + h/β + ((1+f²)f'')'/β²` at `(p, q)`.
    fn shift(&self, p: &Jet, q: &Jet) -> Result<Jet> {
        let b = self.beta;
        Ok(self.h.jet(q)? / b - self.ddf.jet(q)? * *p / b + self.tail.jet(q)? / (b * b))
    }

    /// `ṽ(p̃, q̃)` from `v(p, q)`.
    pub fn transform(&self, v: ReducedFn) -> ReducedFn {
        let kg = Arc::new(self.clone());
        reduced_fn(move |p, qt| {
            let q = kg.q_jet(qt)?;
            Ok((v(p, &q)? + kg.shift(p, &q)?) * kg.one_plus_f2(&q)?)
        })
    }

    /// `v(p, q)` from `ṽ(p̃, q̃)`.
    pub fn inverse(&self, v_tilde: ReducedFn) -> ReducedFn {
        let kg = Arc::new(self.clone());
        reduced_fn(move |p, q| {
            let qt = kg.q_tilde_jet(q)?;
            Ok(v_tilde(p, &qt)? / kg.one_plus_f2(q)? - kg.shift(p, q)?)
        })
    }

    /// `ṽ_{p̃q̃} + βṽ` at `(p̃, q̃)`.
    pub fn residual_at(&self, v_tilde: &ReducedFn, pq: [f64; 2]) -> Result<f64> {
        let jet = v_tilde(&Jet::var(pq[0], 1), &Jet::var(pq[1], 2))?;
        Ok(jet.derivative([0, 1, 1]) + self.beta * jet.value())
    }
}

/// The plane-wave Klein–Gordon solution `sin(kp̃ + (β/k)q̃ + φ)`.
pub fn kg_harmonic(beta: f64, k: f64, phase: f64) -> Result<ReducedFn> {
    if k == 0.0 {
        return Err(Error::InvalidParameter("wavenumber must be nonzero".into()));
    }
    Ok(reduced_fn(move |p, q| Ok((*p * k + *q * (beta / k) + phase).sin())))
}
