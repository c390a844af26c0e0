//! Closed algebra of time-dependent coefficient functions.
//!
//! A [`TimeFunction`] is a finite sum of exponential-polynomial-trigonometric
//! terms `c · t^k · e^{a t} · cos(b t + φ)` plus power-law terms
//! `c · |t|^α` that live on a declared half-line. The algebra is closed under
//! differentiation, antidifferentiation (except `|t|^{-1}`), affine
//! substitution `t ↦ s t + δ` and scaling, which is exactly what the adjoint
//! actions and the normalization quadratures need.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Half-line on which a power-law term is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfLine {
    #[serde(alias = "t>0")]
    Positive,
    #[serde(alias = "t<0")]
    Negative,
}

impl HalfLine {
    fn sign(self) -> f64 {
        match self {
            HalfLine::Positive => 1.0,
            HalfLine::Negative => -1.0,
        }
    }

    fn flipped(self) -> HalfLine {
        match self {
            HalfLine::Positive => HalfLine::Negative,
            HalfLine::Negative => HalfLine::Positive,
        }
    }

    /// The unit point `±1` used as the antiderivative anchor.
    pub fn anchor(self) -> f64 {
        self.sign()
    }
}

/// `coeff · t^pow · e^{exp·t} · cos(osc·t + phase)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    pub coeff: f64,
    #[serde(default)]
    pub pow: u32,
    #[serde(default)]
    pub exp: f64,
    #[serde(default)]
    pub osc: f64,
    #[serde(default)]
    pub phase: f64,
}

/// `coeff · |t|^alpha` restricted to `domain`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerTerm {
    pub coeff: f64,
    pub alpha: f64,
    pub domain: HalfLine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Exp(ExpTerm),
    Power(PowerTerm),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeFunction {
    terms: Vec<Term>,
}

fn falling(alpha: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (alpha - i as f64))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl ExpTerm {
    fn is_polynomial(&self) -> bool {
        self.exp == 0.0 && self.osc == 0.0
    }

    fn deriv_value(&self, t: f64, n: usize) -> f64 {
        let z = Complex64::new(self.exp, self.osc);
        let (r, theta) = z.to_polar();
        let k = self.pow as usize;
        let e = (self.exp * t).exp();
        let mut sum = 0.0;
        for j in 0..=n.min(k) {
            let m = n - j;
            let poly = falling(k as f64, j) * t.powi((k - j) as i32);
            let ed = r.powi(m as i32) * e * (self.osc * t + self.phase + m as f64 * theta).cos();
            sum += binomial(n, j) * poly * ed;
        }
        self.coeff * sum
    }
}

impl PowerTerm {
    fn deriv_value(&self, t: f64, n: usize) -> Result<f64> {
        let ok = match self.domain {
            HalfLine::Positive => t >= 0.0,
            HalfLine::Negative => t <= 0.0,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "|t|^{} is declared on the {:?} half-line, evaluated at t = {t}",
                self.alpha, self.domain
            )));
        }
        let exponent = self.alpha - n as f64;
        if t == 0.0 && exponent < 0.0 {
            return Err(Error::Domain(format!(
                "|t|^{} has a negative exponent at t = 0",
                exponent
            )));
        }
        let sign = self.domain.sign().powi(n as i32);
        Ok(self.coeff * sign * falling(self.alpha, n) * t.abs().powf(exponent))
    }
}

impl TimeFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        Self { terms }.simplified()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant(c: f64) -> Self {
        Self::exp_poly_trig(c, 0, 0.0, 0.0, 0.0)
    }

    pub fn monomial(c: f64, pow: u32) -> Self {
        Self::exp_poly_trig(c, pow, 0.0, 0.0, 0.0)
    }

    /// Polynomial with coefficients in increasing degree.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                Term::Exp(ExpTerm {
                    coeff: c,
                    pow: k as u32,
                    exp: 0.0,
                    osc: 0.0,
                    phase: 0.0,
                })
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn exponential(c: f64, rate: f64) -> Self {
        Self::exp_poly_trig(c, 0, rate, 0.0, 0.0)
    }

    pub fn cosine(c: f64, freq: f64, phase: f64) -> Self {
        Self::exp_poly_trig(c, 0, 0.0, freq, phase)
    }

    pub fn sine(c: f64, freq: f64) -> Self {
        Self::exp_poly_trig(c, 0, 0.0, freq, -std::f64::consts::FRAC_PI_2)
    }

    pub fn exp_poly_trig(coeff: f64, pow: u32, exp: f64, osc: f64, phase: f64) -> Self {
        Self::from_terms(vec![Term::Exp(ExpTerm {
            coeff,
            pow,
            exp,
            osc,
            phase,
        })])
    }

    pub fn power(coeff: f64, alpha: f64, domain: HalfLine) -> Self {
        Self::from_terms(vec![Term::Power(PowerTerm {
            coeff,
            alpha,
            domain,
        })])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the function has no time dependence.
    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.as_slice() {
            [] => Some(0.0),
            [Term::Exp(e)] if e.pow == 0 && e.is_polynomial() => Some(e.coeff * e.phase.cos()),
            _ => None,
        }
    }

    /// Half-line required by the power-law terms, if any.
    pub fn domain(&self) -> Result<Option<HalfLine>> {
        let mut out = None;
        for term in &self.terms {
            if let Term::Power(p) = term {
                match out {
                    None => out = Some(p.domain),
                    Some(d) if d != p.domain => {
                        return Err(Error::Domain(
                            "power-law terms declared on opposite half-lines".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_deriv(t, 0)
    }

    /// Value of the `n`-th derivative at `t`.
    pub fn eval_deriv(&self, t: f64, n: usize) -> Result<f64> {
        let mut sum = 0.0;
        for term in &self.terms {
            sum += match term {
                Term::Exp(e) => e.deriv_value(t, n),
                Term::Power(p) => p.deriv_value(t, n)?,
            };
        }
        Ok(sum)
    }

    /// Value and first three derivatives.
    pub fn derivs3(&self, t: f64) -> Result<[f64; 4]> {
        Ok([
            self.eval_deriv(t, 0)?,
            self.eval_deriv(t, 1)?,
            self.eval_deriv(t, 2)?,
            self.eval_deriv(t, 3)?,
        ])
    }

    /// Composition with a jet argument.
    pub fn jet(&self, t: &Jet) -> Result<Jet> {
        Ok(t.compose(self.derivs3(t.value())?))
    }

    pub fn scale(&self, c: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|term| match term {
                Term::Exp(e) => Term::Exp(ExpTerm {
                    coeff: e.coeff * c,
                    ..e.clone()
                }),
                Term::Power(p) => Term::Power(PowerTerm {
                    coeff: p.coeff * c,
                    ..p.clone()
                }),
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn add(&self, other: &TimeFunction) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn sub(&self, other: &TimeFunction) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn derivative(&self) -> Self {
        let mut terms = Vec::new();
        for term in &self.terms {
            match term {
                Term::Exp(e) => {
                    if e.pow > 0 {
                        terms.push(Term::Exp(ExpTerm {
                            coeff: e.coeff * e.pow as f64,
                            pow: e.pow - 1,
                            ..e.clone()
                        }));
                    }
                    let (r, theta) = Complex64::new(e.exp, e.osc).to_polar();
                    if r != 0.0 {
                        terms.push(Term::Exp(ExpTerm {
                            coeff: e.coeff * r,
                            phase: e.phase + theta,
                            ..e.clone()
                        }));
                    }
                }
                Term::Power(p) => {
                    if p.alpha != 0.0 {
                        terms.push(Term::Power(PowerTerm {
                            coeff: p.coeff * p.alpha * p.domain.sign(),
                            alpha: p.alpha - 1.0,
                            domain: p.domain,
                        }));
                    }
                }
            }
        }
        Self::from_terms(terms)
    }

    /// Antiderivative vanishing at `t = 0` for exponential-polynomial terms and
    /// at the half-line unit point `t = ±1` for power-law terms.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut terms = Vec::new();
        for term in &self.terms {
            match term {
                Term::Exp(e) => {
                    let z = Complex64::new(e.exp, e.osc);
                    if z == Complex64::new(0.0, 0.0) {
                        terms.push(Term::Exp(ExpTerm {
                            coeff: e.coeff * e.phase.cos() / (e.pow + 1) as f64,
                            pow: e.pow + 1,
                            exp: 0.0,
                            osc: 0.0,
                            phase: 0.0,
                        }));
                        continue;
                    }
                    let k = e.pow as usize;
                    let base = Complex64::from_polar(e.coeff, e.phase);
                    let mut anchor = 0.0;
                    for j in 0..=k {
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        let cj = base * sign * falling(k as f64, j) / z.powu(j as u32 + 1);
                        let (mag, arg) = cj.to_polar();
                        terms.push(Term::Exp(ExpTerm {
                            coeff: mag,
                            pow: (k - j) as u32,
                            exp: e.exp,
                            osc: e.osc,
                            phase: arg,
                        }));
                        if j == k {
                            anchor = cj.re;
                        }
                    }
                    terms.push(Term::Exp(ExpTerm {
                        coeff: -anchor,
                        pow: 0,
                        exp: 0.0,
                        osc: 0.0,
                        phase: 0.0,
                    }));
                }
                Term::Power(p) => {
                    if p.alpha == -1.0 {
                        return Err(Error::UnsupportedCoefficient {
                            integral: format!("∫ {}·|t|^-1 dt (logarithm)", p.coeff),
                        });
                    }
                    let c = p.coeff * p.domain.sign() / (p.alpha + 1.0);
                    terms.push(Term::Power(PowerTerm {
                        coeff: c,
                        alpha: p.alpha + 1.0,
                        domain: p.domain,
                    }));
                    terms.push(Term::Exp(ExpTerm {
                        coeff: -c,
                        pow: 0,
                        exp: 0.0,
                        osc: 0.0,
                        phase: 0.0,
                    }));
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// `t ↦ f(s·t + δ)`.
    pub fn affine_sub(&self, s: f64, delta: f64) -> Result<Self> {
        if s == 0.0 {
            return Err(Error::InvalidParameter(
                "affine substitution needs s != 0".into(),
            ));
        }
        let mut terms = Vec::new();
        for term in &self.terms {
            match term {
                Term::Exp(e) => {
                    let k = e.pow as usize;
                    let shift = (e.exp * delta).exp();
                    for j in 0..=k {
                        let c = e.coeff
                            * binomial(k, j)
                            * s.powi(j as i32)
                            * delta.powi((k - j) as i32)
                            * shift;
                        terms.push(Term::Exp(ExpTerm {
                            coeff: c,
                            pow: j as u32,
                            exp: e.exp * s,
                            osc: e.osc * s,
                            phase: e.phase + e.osc * delta,
                        }));
                    }
                }
                Term::Power(p) => {
                    if delta != 0.0 {
                        return Err(Error::Unsupported(format!(
                            "shift t ↦ t + {delta} of the power law |t|^{}",
                            p.alpha
                        )));
                    }
                    terms.push(Term::Power(PowerTerm {
                        coeff: p.coeff * s.abs().powf(p.alpha),
                        alpha: p.alpha,
                        domain: if s < 0.0 { p.domain.flipped() } else { p.domain },
                    }));
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// Pointwise product; fails when an exponential or trigonometric term
    /// meets a power law.
    pub fn mul(&self, other: &TimeFunction) -> Result<Self> {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                match (a, b) {
                    (Term::Exp(x), Term::Exp(y)) => {
                        let c = 0.5 * x.coeff * y.coeff;
                        terms.push(Term::Exp(ExpTerm {
                            coeff: c,
                            pow: x.pow + y.pow,
                            exp: x.exp + y.exp,
                            osc: x.osc + y.osc,
                            phase: x.phase + y.phase,
                        }));
                        terms.push(Term::Exp(ExpTerm {
                            coeff: c,
                            pow: x.pow + y.pow,
                            exp: x.exp + y.exp,
                            osc: x.osc - y.osc,
                            phase: x.phase - y.phase,
                        }));
                    }
                    (Term::Power(p), Term::Power(q)) => {
                        if p.domain != q.domain {
                            return Err(Error::Domain(
                                "product of power laws on opposite half-lines".into(),
                            ));
                        }
                        terms.push(Term::Power(PowerTerm {
                            coeff: p.coeff * q.coeff,
                            alpha: p.alpha + q.alpha,
                            domain: p.domain,
                        }));
                    }
                    (Term::Exp(e), Term::Power(p)) | (Term::Power(p), Term::Exp(e)) => {
                        if !e.is_polynomial() {
                            return Err(Error::Unsupported(format!(
                                "product of |t|^{} with an exponential/trigonometric term",
                                p.alpha
                            )));
                        }
                        terms.push(Term::Power(PowerTerm {
                            coeff: p.coeff
                                * e.coeff
                                * e.phase.cos()
                                * p.domain.sign().powi(e.pow as i32),
                            alpha: p.alpha + e.pow as f64,
                            domain: p.domain,
                        }));
                    }
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// Multiplies by `t^n`. Negative powers of pure polynomial terms become
    /// power laws on `domain`; negative powers of exponential or
    /// trigonometric terms leave the algebra.
    pub fn mul_power(&self, n: i32, domain: Option<HalfLine>) -> Result<Self> {
        let mut terms = Vec::new();
        for term in &self.terms {
            match term {
                Term::Exp(e) => {
                    let k = e.pow as i32 + n;
                    if k >= 0 {
                        terms.push(Term::Exp(ExpTerm {
                            pow: k as u32,
                            ..e.clone()
                        }));
                    } else if e.is_polynomial() {
                        let d = domain.ok_or_else(|| {
                            Error::Domain(format!(
                                "t^{k} needs a declared half-line (singular at t = 0)"
                            ))
                        })?;
                        terms.push(Term::Power(PowerTerm {
                            coeff: e.coeff * e.phase.cos() * d.sign().powi(k),
                            alpha: k as f64,
                            domain: d,
                        }));
                    } else {
                        return Err(Error::UnsupportedCoefficient {
                            integral: format!("t^{n} · ({})", TimeFunction::from_terms(vec![term.clone()])),
                        });
                    }
                }
                Term::Power(p) => {
                    if let Some(d) = domain {
                        if d != p.domain {
                            return Err(Error::Domain(
                                "power law declared on the opposite half-line".into(),
                            ));
                        }
                    }
                    terms.push(Term::Power(PowerTerm {
                        coeff: p.coeff * p.domain.sign().powi(n),
                        alpha: p.alpha + n as f64,
                        domain: p.domain,
                    }));
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// Drops terms whose magnitude over `times` stays below `tol`.
    pub fn pruned(&self, tol: f64, times: &[f64]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|term| {
                let single = TimeFunction {
                    terms: vec![(*term).clone()],
                };
                times
                    .iter()
                    .any(|&t| single.eval(t).map(|v| v.abs() > tol).unwrap_or(true))
            })
            .cloned()
            .collect();
        Self { terms }
    }

    fn simplified(self) -> Self {
        let mut exp_terms: Vec<ExpTerm> = Vec::new();
        let mut pow_terms: Vec<PowerTerm> = Vec::new();
        for term in self.terms {
            match term {
                Term::Exp(mut e) => {
                    if e.coeff == 0.0 {
                        continue;
                    }
                    if e.osc < 0.0 {
                        e.osc = -e.osc;
                        e.phase = -e.phase;
                    }
                    if e.osc == 0.0 {
                        e.coeff *= e.phase.cos();
                        e.phase = 0.0;
                    }
                    if let Some(existing) = exp_terms
                        .iter_mut()
                        .find(|x| x.pow == e.pow && x.exp == e.exp && x.osc == e.osc)
                    {
                        if e.osc == 0.0 {
                            existing.coeff += e.coeff;
                        } else {
                            let sum = Complex64::from_polar(existing.coeff, existing.phase)
                                + Complex64::from_polar(e.coeff, e.phase);
                            let (m, a) = sum.to_polar();
                            existing.coeff = m;
                            existing.phase = a;
                        }
                    } else {
                        exp_terms.push(e);
                    }
                }
                Term::Power(p) => {
                    if p.coeff == 0.0 {
                        continue;
                    }
                    if let Some(existing) = pow_terms
                        .iter_mut()
                        .find(|x| x.alpha == p.alpha && x.domain == p.domain)
                    {
                        existing.coeff += p.coeff;
                    } else {
                        pow_terms.push(p);
                    }
                }
            }
        }
        for e in exp_terms.iter_mut() {
            if e.osc != 0.0 {
                e.phase = e.phase.sin().atan2(e.phase.cos());
            }
        }
        exp_terms.retain(|e| e.coeff != 0.0);
        pow_terms.retain(|p| p.coeff != 0.0);
        exp_terms.sort_by(|a, b| {
            (a.pow, a.exp, a.osc)
                .partial_cmp(&(b.pow, b.exp, b.osc))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        pow_terms.sort_by(|a, b| {
            (a.domain, a.alpha)
                .partial_cmp(&(b.domain, b.alpha))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let terms = exp_terms
            .into_iter()
            .map(Term::Exp)
            .chain(pow_terms.into_iter().map(Term::Power))
            .collect();
        Self { terms }
    }
}

/// Deterministic comparison nodes: 64 Chebyshev points on `[-2, 2]`, or on
/// `[0.05, 2]` / `[-2, -0.05]` for half-line functions.
pub fn sample_times(domain: Option<HalfLine>) -> Vec<f64> {
    let (lo, hi) = match domain {
        None => (-2.0, 2.0),
        Some(HalfLine::Positive) => (0.05, 2.0),
        Some(HalfLine::Negative) => (-2.0, -0.05),
    };
    let n = 64;
    (0..n)
        .map(|i| {
            let x = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        })
        .collect()
}

/// Max abs difference of two functions over `times`.
pub fn sup_distance(a: &TimeFunction, b: &TimeFunction, times: &[f64]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for &t in times {
        m = m.max((a.eval(t)? - b.eval(t)?).abs());
    }
    Ok(m)
}

impl fmt::Display for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match term {
                Term::Exp(e) => {
                    write!(f, "{}", e.coeff)?;
                    if e.pow > 0 {
                        write!(f, "·t^{}", e.pow)?;
                    }
                    if e.exp != 0.0 {
                        write!(f, "·e^({}t)", e.exp)?;
                    }
                    if e.osc != 0.0 {
                        write!(f, "·cos({}t + {})", e.osc, e.phase)?;
                    }
                }
                Term::Power(p) => {
                    let dom = match p.domain {
                        HalfLine::Positive => "t>0",
                        HalfLine::Negative => "t<0",
                    };
                    write!(f, "{}·|t|^{} [{}]", p.coeff, p.alpha, dom)?;
                }
            }
        }
        Ok(())
    }
}
