use std::f64::consts::PI;
use std::sync::Arc;

use super::families::{DerivativeSource, FamilySpec, HarmonicTerm, SinCubedBranch};
use crate::error::{Error, Result};
use crate::field::{FnField, Geometry, SharedField, StreamFunction};
use crate::jet::Jet;
use crate::timefn::{HalfLine, TimeFunction};

pub(super) const PI_HARMONIC_PROVENANCE: &str = "β-plane, partially invariant solutions with a harmonic part";

type Built = (SharedField, DerivativeSource, &'static str);

fn field<F>(func: F) -> SharedField
where
    F: Fn(&[Jet; 3]) -> Result<Jet> + Send + Sync + 'static,
{
    Arc::new(FnField::new(Geometry::Plane, func))
}

pub(super) fn build(spec: &FamilySpec) -> Result<Built> {
    match spec.clone() {
        FamilySpec::RossbyWave { amplitude, k, l, beta, phase } => {
            if k == 0.0 && l == 0.0 {
                return Err(Error::InvalidParameter("RossbyWave needs a nonzero wave vector".into()));
            }
            let omega = -beta * k / (k * k + l * l);
            let f = field(move |p| Ok((p[1] * k + p[2] * l - p[0] * omega + phase).sin() * amplitude));
            Ok((f, DerivativeSource::Analytic, "β-plane, travelling-wave reduction: Rossby wave"))
        }
        FamilySpec::Case4Plane { beta, profile, f, g, h1, h0, window } => case4(beta, profile, f, g, h1, h0, window),
        FamilySpec::CubicSteady { c1, c2, beta } => {
            let f = field(move |p| {
                let (x, y) = (p[1], p[2]);
                let r2 = x * x + y * y;
                Ok((x * x - 3.0 * y * y) * x * c1 + (3.0 * x * x - y * y) * y * c2 - r2 * y * (beta / 8.0))
            });
            Ok((f, DerivativeSource::Analytic, "β-plane, steady rotation-invariant reduction: cubic solution"))
        }
        FamilySpec::SinCubed { beta, branch } => {
            let (sign, shift) = match branch {
                SinCubedBranch::Principal => (1.0, 0.0),
                SinCubedBranch::Plus => (-1.0, PI / 3.0),
                SinCubedBranch::Minus => (-1.0, -PI / 3.0),
            };
            let f = field(move |p| {
                let (x, y) = (p[1], p[2]);
                if x.value() <= 0.0 {
                    return Err(Error::Domain(format!("SinCubed is defined for x > 0, got x = {}", x.value())));
                }
                let r3 = (x * x + y * y).powf(1.5);
                let s = ((y / x).atan() * (1.0 / 3.0) + shift).sin();
                Ok(r3 * s.powi(3) * (sign * beta / 2.0))
            });
            Ok((f, DerivativeSource::Analytic, "β-plane, steady rotation-invariant reduction: cubic-sine solution"))
        }
        FamilySpec::PIHarmonic { beta, eta, harmonic } => {
            let psi = harmonic_field(harmonic)?;
            Ok((pi_harmonic_field(beta, eta, psi)?, DerivativeSource::Analytic, PI_HARMONIC_PROVENANCE))
        }
        FamilySpec::PIFProfile { beta, profile, g1, g0, f1, f0 } => {
            let (dg1, dg0) = (g1.derivative(), g0.derivative());
            let f = field(move |p| {
                let (t, x, y) = (&p[0], p[1], p[2]);
                let a = g1.jet(t)?;
                if a.value() == 0.0 {
                    return Err(Error::Domain(format!("g1 vanishes at t = {}", t.value())));
                }
                let w = a * y + g0.jet(t)?;
                let drift = (dg1.jet(t)? * y + dg0.jet(t)?) / a * x;
                Ok(profile.jet(&w)? / (a * a) - y.powi(3) * (beta / 6.0) - drift + f1.jet(t)? * y + f0.jet(t)?)
            });
            Ok((f, DerivativeSource::Analytic, "β-plane, partially invariant solutions with a profile function"))
        }
        FamilySpec::PIChi { beta, chi1, chi2, chi3 } => {
            if beta == 0.0 {
                return Err(Error::InvalidParameter("PIChi requires β ≠ 0".into()));
            }
            let dchi1 = chi1.derivative();
            let f = field(move |p| {
                let (t, x, y) = (&p[0], p[1], p[2]);
                let linear = (dchi1.jet(t)? * x * 2.0 + chi2.jet(t)?) * (-1.0 / beta);
                Ok(linear + chi1.jet(t)? * y * y + chi3.jet(t)? * y)
            });
            Ok((f, DerivativeSource::Analytic, "β-plane, partially invariant solutions linear in x"))
        }
        _ => unreachable!("sphere family routed to the plane builder"),
    }
}

fn case4(
    beta: f64,
    profile: TimeFunction,
    f: TimeFunction,
    g: TimeFunction,
    h1: TimeFunction,
    h0: TimeFunction,
    window: Option<[f64; 2]>,
) -> Result<Built> {
    if let Some([lo, hi]) = window {
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!("empty window [{lo}, {hi}]")));
        }
        for i in 0..=256 {
            let t = lo + (hi - lo) * i as f64 / 256.0;
            if f.eval(t)? == 0.0 || f.eval(t)?.signum() != f.eval(lo)?.signum() {
                return Err(Error::InvalidParameter(format!("f vanishes inside the window near t = {t}")));
            }
        }
    } else if f.is_zero() {
        return Err(Error::InvalidParameter("Case4Plane requires f ≠ 0".into()));
    }
    let df = f.derivative();
    let big_g = g.antiderivative()?;
    let out = field(move |p| {
        let (t, x, y) = (&p[0], p[1], p[2]);
        let fj = f.jet(t)?;
        if fj.value() == 0.0 {
            return Err(Error::Domain(format!("f vanishes at t = {}", t.value())));
        }
        let theta = fj * y - big_g.jet(t)?;
        let shear = df.jet(t)? / fj * x * y;
        Ok(profile.jet(&theta)? / (fj * fj) - y.powi(3) * (beta / 6.0) + h1.jet(t)? * y + h0.jet(t)? - shear
            + g.jet(t)? / fj * x)
    });
    Ok((out, DerivativeSource::Analytic, "β-plane, Galilei-type reduction: general invariant solution"))
}

fn harmonic_field(terms: Vec<HarmonicTerm>) -> Result<SharedField> {
    if terms.is_empty() {
        return Err(Error::InvalidParameter("PIHarmonic needs at least one harmonic term".into()));
    }
    Ok(field(move |p| {
        let (t, x, y) = (&p[0], p[1], p[2]);
        let mut acc = Jet::constant(0.0);
        for term in &terms {
            acc += match term {
                HarmonicTerm::Polynomial { n, coeff, phase } => {
                    let (mut re, mut im) = (Jet::constant(1.0), Jet::constant(0.0));
                    for _ in 0..*n {
                        (re, im) = (re * x - im * y, re * y + im * x);
                    }
                    coeff.jet(t)? * (re * phase.cos() - im * phase.sin())
                }
                HarmonicTerm::Exponential { k, coeff, phase } => {
                    coeff.jet(t)? * (x * *k).exp() * (y * *k + *phase).cos()
                }
            };
        }
        Ok(acc)
    }))
}

/// Probe times inside the domain shared by all coefficient functions.
fn probe_times(harmonic: &SharedField) -> Vec<f64> {
    for times in [[0.0, 0.5, 1.3], [0.5, 1.0, 2.0], [-0.5, -1.0, -2.0]] {
        if times.iter().all(|&t| harmonic.eval([t, 0.1, 0.2]).is_ok()) {
            return times.to_vec();
        }
    }
    vec![HalfLine::Positive.anchor()]
}

pub(super) fn pi_harmonic_field(beta: f64, eta: f64, harmonic: SharedField) -> Result<SharedField> {
    if harmonic.geometry() != Geometry::Plane {
        return Err(Error::InvalidParameter("harmonic part must be a plane field".into()));
    }
    for &t in &probe_times(&harmonic) {
        for i in 0..5 {
            for j in 0..5 {
                let p = [t, -1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64];
                let jet = harmonic.eval_jet(&Jet::point(p))?;
                let lap = jet.derivative([0, 2, 0]) + jet.derivative([0, 0, 2]);
                if lap.abs() > 1e-8 {
                    return Err(Error::InvalidParameter(format!("Ψ is not harmonic: ∇²Ψ = {lap:e} at {p:?}")));
                }
            }
        }
    }
    Ok(field(move |p| {
        let y = p[2];
        Ok(harmonic.eval_jet(p)? - y.powi(3) * (beta / 6.0) + y * y * (eta / 2.0))
    }))
}
