use std::sync::Arc;

use super::families::{DerivativeSource, FamilySpec, RhMember};
use super::legendre::legendre_jet;
use crate::error::{Error, Result};
use crate::field::{FnField, Geometry, SharedField};
use crate::jet::Jet;
use crate::timefn::TimeFunction;
use crate::{ode, quadrature};

/// Distance kept from the poles by the quadrature and ODE families.
pub const POLE_MARGIN: f64 = 1e-3;

type Built = (SharedField, DerivativeSource, &'static str);

fn field<F>(func: F) -> SharedField
where
    F: Fn(&[Jet; 3]) -> Result<Jet> + Send + Sync + 'static,
{
    Arc::new(FnField::new(Geometry::Sphere, func))
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.abs() > 1.0 - POLE_MARGIN {
        return Err(Error::Domain(format!("|μ| = {} exceeds 1 − {POLE_MARGIN}", mu.abs())));
    }
    Ok(())
}

pub(super) struct RhParameters {
    pub speed: f64,
    pub zonal: f64,
}

pub(super) fn rh_parameters(spec: &FamilySpec) -> Option<RhParameters> {
    match *spec {
        FamilySpec::RossbyHaurwitz { omega, n, a, .. } => rh_speed(omega, n, a).ok(),
        FamilySpec::RossbyHaurwitzSum { omega, n, .. } => rh_speed(omega, n, None).ok(),
        _ => None,
    }
}

fn rh_speed(omega: f64, n: u32, a: Option<f64>) -> Result<RhParameters> {
    if n == 0 {
        return Err(Error::InvalidParameter("Rossby–Haurwitz degree must be ≥ 1".into()));
    }
    let c = -((n * (n + 1)) as f64);
    match a {
        None => Ok(RhParameters { speed: -2.0 * omega / (n * (n + 1)) as f64, zonal: 0.0 }),
        Some(_) if n == 1 => Err(Error::InvalidParameter(
            "degree 1 admits only the pure wave; leave `a` unset".into(),
        )),
        Some(a) => Ok(RhParameters { speed: a - omega, zonal: omega - a * c / (c + 2.0) }),
    }
}

fn rh_wave(n: u32, members: Vec<RhMember>, speed: f64, zonal: f64) -> Result<SharedField> {
    for m in &members {
        legendre_jet(n, m.m, &Jet::constant(0.0))?;
    }
    Ok(field(move |p| {
        let (t, lambda, mu) = (p[0], p[1], p[2]);
        if mu.value().abs() > 1.0 {
            return Err(Error::Domain(format!("μ = {} outside [−1, 1]", mu.value())));
        }
        let mut acc = mu * zonal;
        for member in &members {
            let arg = (lambda - t * speed) * member.m as f64 + member.phase;
            acc += legendre_jet(n, member.m, &mu)? * arg.cos() * member.amplitude;
        }
        Ok(acc)
    }))
}

pub(super) fn build(spec: &FamilySpec) -> Result<Built> {
    match spec.clone() {
        FamilySpec::RossbyHaurwitz { omega, amplitude, n, m, a, phase } => {
            let params = rh_speed(omega, n, a)?;
            let member = RhMember { m, amplitude, phase };
            let f = rh_wave(n, vec![member], params.speed, params.zonal)?;
            Ok((f, DerivativeSource::Analytic, "rotating sphere, Rossby–Haurwitz wave"))
        }
        FamilySpec::RossbyHaurwitzSum { omega, n, members } => {
            if members.is_empty() {
                return Err(Error::InvalidParameter("empty Rossby–Haurwitz superposition".into()));
            }
            let params = rh_speed(omega, n, None)?;
            let f = rh_wave(n, members, params.speed, 0.0)?;
            Ok((f, DerivativeSource::Analytic, "rotating sphere, superposed Rossby–Haurwitz waves"))
        }
        FamilySpec::SphereCase3 { g, f, h, profile } => case3(g, f, h, profile),
        FamilySpec::SphereZonalWave { b, c, v0, dv0 } => {
            let profile = Arc::new(ZonalProfile::new(b, c, v0, dv0)?);
            let out = field(move |p| {
                let (lambda, mu) = (p[1], p[2]);
                Ok((lambda * b).exp() * mu.compose(profile.derivs(mu.value())?))
            });
            Ok((out, DerivativeSource::Ode, "sphere, scaling-rotation reduction: Legendre-type profile"))
        }
        _ => unreachable!("plane family routed to the sphere builder"),
    }
}

/// `gλ + f + h artanh μ + Q(μ, ∫g)` where `∂_μ Q = [W(μ − G) − W(−G)]/(1 − μ²)`
/// and `W' = w`.
fn case3(g: TimeFunction, f: TimeFunction, h: TimeFunction, w: TimeFunction) -> Result<Built> {
    let big_w = w.antiderivative()?;
    let big_g = g.antiderivative()?;
    let (dw, ddw) = (w.derivative(), w.derivative().derivative());
    let out = field(move |p| {
        let (t, lambda, mu) = (&p[0], p[1], p[2]);
        check_mu(mu.value())?;
        let gj = big_g.jet(t)?;
        let (m0, g0) = (mu.value(), gj.value());
        // Integrand as a jet in (μ, G) for the μ-derivatives of Q.
        let (mv, gv) = (Jet::var(m0, 1), Jet::var(g0, 2));
        let integrand = (big_w.jet(&(mv - gv))? - big_w.jet(&(-gv))?) / (1.0 - mv * mv);
        // G-derivatives of Q itself by quadrature from the equator.
        let base = [big_w.eval(-g0)?, w.eval(-g0)?, dw.eval(-g0)?, ddw.eval(-g0)?];
        let q = quadrature::integrate_vec(
            |s| {
                let den = 1.0 - s * s;
                let th = s - g0;
                Ok([
                    (big_w.eval(th)? - base[0]) / den,
                    -(w.eval(th)? - base[1]) / den,
                    (dw.eval(th)? - base[2]) / den,
                    -(ddw.eval(th)? - base[3]) / den,
                ])
            },
            0.0,
            m0,
            1e-12,
        )?;
        let mut d = [[0.0; 4]; 4];
        for b in 0..4 {
            d[0][b] = q[b];
        }
        for a in 1..4 {
            for b in 0..=(3 - a) {
                d[a][b] = integrand.derivative([0, a - 1, b]);
            }
        }
        let quad = mu.compose2(&gj, d);
        Ok(g.jet(t)? * lambda + f.jet(t)? + h.jet(t)? * mu.atanh() + quad)
    });
    Ok((out, DerivativeSource::Quadrature, "sphere, Galilei-type reduction: general solution"))
}

/// Numerical solution of `((1−μ²)v')' + b²v/(1−μ²) = Cv` on
/// `|μ| ≤ 1 − 10⁻³`.
#[derive(Debug)]
pub struct ZonalProfile {
    kappa: f64,
    c: f64,
    step: f64,
    /// `(v, v')` at `μ = i·step`, index offset by `half`.
    nodes: Vec<[f64; 2]>,
    half: usize,
}

impl ZonalProfile {
    const NODE_STEP: f64 = 1.0 / 256.0;

    pub fn new(b: f64, c: f64, v0: f64, dv0: f64) -> Result<Self> {
        if !(b.is_finite() && c.is_finite() && v0.is_finite() && dv0.is_finite()) {
            return Err(Error::InvalidParameter("zonal profile parameters must be finite".into()));
        }
        let kappa = b * b;
        let step = Self::NODE_STEP;
        let half = ((1.0 - POLE_MARGIN) / step).ceil() as usize;
        let mut nodes = vec![[0.0; 2]; 2 * half + 1];
        nodes[half] = [v0, dv0];
        let rhs = move |mu: f64, y: &[f64; 2]| rhs(kappa, c, mu, y);
        for dir in [1.0, -1.0] {
            let mut y = [v0, dv0];
            for i in 1..=half {
                let from = dir * (i - 1) as f64 * step;
                let to = dir * (i as f64 * step).min(1.0 - POLE_MARGIN / 2.0);
                y = ode::integrate(rhs, from, y, to, 1e-14)?;
                let idx = if dir > 0.0 { half + i } else { half - i };
                nodes[idx] = y;
            }
        }
        Ok(Self { kappa, c, step, nodes, half })
    }

    fn node_mu(&self, idx: usize) -> f64 {
        let i = idx as f64 - self.half as f64;
        (i * self.step).clamp(-(1.0 - POLE_MARGIN / 2.0), 1.0 - POLE_MARGIN / 2.0)
    }

    /// `v` and its first three derivatives at `mu`.
    pub fn derivs(&self, mu: f64) -> Result<[f64; 4]> {
        check_mu(mu)?;
        let idx = ((mu / self.step).round() + self.half as f64) as usize;
        let from = self.node_mu(idx);
        let (kappa, c) = (self.kappa, self.c);
        let [v, dv] = ode::integrate_fixed(move |m, y: &[f64; 2]| rhs(kappa, c, m, y), from, self.nodes[idx], mu, 16);
        let w = 1.0 - mu * mu;
        let ddv = (2.0 * mu * dv + c * v - kappa * v / w) / w;
        let dddv = (4.0 * mu * ddv + 2.0 * dv + c * dv - kappa * dv / w - 2.0 * kappa * mu * v / (w * w)) / w;
        Ok([v, dv, ddv, dddv])
    }

    pub fn value(&self, mu: f64) -> Result<f64> {
        Ok(self.derivs(mu)?[0])
    }
}

fn rhs(kappa: f64, c: f64, mu: f64, y: &[f64; 2]) -> [f64; 2] {
    let w = 1.0 - mu * mu;
    [y[1], (2.0 * mu * y[1] + c * y[0] - kappa * y[0] / w) / w]
}
