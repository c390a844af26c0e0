//! Adjoint actions `Ad(e^{εv}) w`: closed forms, the Lie series and an ODE
//! integration of `dw/dε = [w, v]`.

use crate::error::{Error, Result};
use crate::generators::{Generator, PlaneFlavor, PlaneGenerator, SphereGenerator};
use crate::timefn::{sample_times, HalfLine, TimeFunction};

/// Result of [`adjoint_closed`]. `series_fallback` is set when no closed form
/// applies and the image is a truncated Lie series.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointImage {
    pub image: Generator,
    pub series_fallback: bool,
}

const FALLBACK_ORDER: usize = 40;

fn times_t(f: &TimeFunction) -> TimeFunction {
    f.mul_power(1, None).expect("t·f stays in the algebra")
}

/// `e^{-k e} f(e^{-e} t)`.
fn rescaled(f: &TimeFunction, e: f64, k: f64) -> Result<TimeFunction> {
    Ok(f.affine_sub((-e).exp(), 0.0)?.scale((-k * e).exp()))
}

fn beta_parts(v: &PlaneGenerator) -> Vec<PlaneGenerator> {
    let flavor = v.flavor;
    let mut parts = Vec::new();
    if v.a_d1 != 0.0 {
        parts.push(PlaneGenerator::beta_d().scale(v.a_d1));
    }
    if v.a_t != 0.0 {
        parts.push(PlaneGenerator::dt(flavor).scale(v.a_t));
    }
    if !v.h.is_zero() {
        parts.push(PlaneGenerator::y_shift(v.h.clone()).with_flavor(flavor));
    }
    if !v.f.is_zero() {
        parts.push(PlaneGenerator::x(flavor, v.f.clone()));
    }
    if !v.g.is_zero() {
        parts.push(PlaneGenerator::z(flavor, v.g.clone()));
    }
    parts
}

/// Closed-form action of one β-plane basis direction `part` (scaled by `eps`).
fn beta_single(part: &PlaneGenerator, eps: f64, w: &PlaneGenerator) -> Result<PlaneGenerator> {
    let ay = w.h.as_constant().unwrap_or(0.0);
    let mut out = w.clone();
    if part.a_d1 != 0.0 {
        let e = part.a_d1 * eps;
        out.a_t = w.a_t * e.exp();
        out.h = TimeFunction::constant(ay * (-e).exp());
        out.f = rescaled(&w.f, e, 1.0)?;
        out.g = rescaled(&w.g, e, 3.0)?;
    } else if part.a_t != 0.0 {
        let e = part.a_t * eps;
        out.a_t = w.a_t - e * w.a_d1;
        out.f = w.f.affine_sub(1.0, -e)?;
        out.g = w.g.affine_sub(1.0, -e)?;
    } else if let Some(c) = part.h.as_constant().filter(|c| *c != 0.0) {
        let e = c * eps;
        out.h = TimeFunction::constant(ay + e * w.a_d1);
        out.g = w.g.add(&w.f.derivative().scale(e));
    } else if !part.f.is_zero() {
        let p = part.f.scale(eps);
        let pp = p.derivative();
        out.f = w
            .f
            .add(&p.add(&times_t(&pp)).scale(w.a_d1))
            .add(&pp.scale(w.a_t));
        out.g = w.g.sub(&pp.scale(ay));
    } else if !part.g.is_zero() {
        let q = part.g.scale(eps);
        let qp = q.derivative();
        out.g = w
            .g
            .add(&q.scale(3.0).add(&times_t(&qp)).scale(w.a_d1))
            .add(&qp.scale(w.a_t));
    }
    Ok(out)
}

fn sphere_parts(v: &SphereGenerator) -> Vec<SphereGenerator> {
    let frame = v.frame;
    let mut parts = Vec::new();
    if v.a_d != 0.0 {
        parts.push(SphereGenerator::d(frame).scale(v.a_d));
    }
    if v.a_t != 0.0 {
        parts.push(SphereGenerator::dt(frame).scale(v.a_t));
    }
    if v.rot.iter().any(|&c| c != 0.0) {
        parts.push(SphereGenerator { rot: v.rot, ..SphereGenerator::zero(frame) });
    }
    if !v.g.is_zero() {
        parts.push(SphereGenerator::z(frame, v.g.clone()));
    }
    parts
}

/// Rotation of `a` by `angle` about the unit vector `k`.
fn rodrigues(a: [f64; 3], k: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let cross = [
        k[1] * a[2] - k[2] * a[1],
        k[2] * a[0] - k[0] * a[2],
        k[0] * a[1] - k[1] * a[0],
    ];
    let dot = k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
    [0, 1, 2].map(|i| a[i] * c + cross[i] * s + k[i] * dot * (1.0 - c))
}

fn sphere_single(part: &SphereGenerator, eps: f64, w: &SphereGenerator) -> Result<SphereGenerator> {
    let mut out = w.clone();
    let norm = part.rot.iter().map(|c| c * c).sum::<f64>().sqrt();
    if part.a_d != 0.0 {
        let e = part.a_d * eps;
        out.a_t = w.a_t * e.exp();
        out.g = rescaled(&w.g, e, 1.0)?;
    } else if part.a_t != 0.0 {
        let e = part.a_t * eps;
        out.a_t = w.a_t - e * w.a_d;
        out.g = w.g.affine_sub(1.0, -e)?;
    } else if norm != 0.0 {
        let axis = part.rot.map(|c| c / norm);
        out.rot = rodrigues(w.rot, axis, -eps * norm);
    } else if !part.g.is_zero() {
        let q = part.g.scale(eps);
        let qp = q.derivative();
        out.g = w.g.add(&q.add(&times_t(&qp)).scale(w.a_d)).add(&qp.scale(w.a_t));
    }
    Ok(out)
}

fn parts_commute(parts: &[Generator]) -> Result<bool> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if !a.commutator(b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Ad(e^{εv}) w` from the closed-form tables, extended linearly in `w`.
///
/// `v` may be any combination of mutually commuting basis directions. The
/// f-plane algebra and noncommuting combinations fall back to the Lie series.
pub fn adjoint_closed(v: &Generator, eps: f64, w: &Generator) -> Result<AdjointImage> {
    // Validates flavors.
    v.commutator(w)?;
    let closed = match (v, w) {
        (Generator::Plane(pv), Generator::Plane(pw)) if pv.flavor == PlaneFlavor::BetaPlane => {
            pv.validate()?;
            pw.validate()?;
            let parts = beta_parts(pv);
            let generic: Vec<Generator> = parts.iter().cloned().map(Generator::Plane).collect();
            if parts_commute(&generic)? {
                let mut out = pw.clone();
                for part in &parts {
                    out = beta_single(part, eps, &out)?;
                }
                Some(Generator::Plane(out))
            } else {
                None
            }
        }
        (Generator::Sphere(sv), Generator::Sphere(sw)) => {
            let parts = sphere_parts(sv);
            let generic: Vec<Generator> = parts.iter().cloned().map(Generator::Sphere).collect();
            if parts_commute(&generic)? {
                let mut out = sw.clone();
                for part in &parts {
                    out = sphere_single(part, eps, &out)?;
                }
                Some(Generator::Sphere(out))
            } else {
                None
            }
        }
        _ => None,
    };
    match closed {
        Some(image) => Ok(AdjointImage { image, series_fallback: false }),
        None => Ok(AdjointImage {
            image: adjoint_series(v, eps, w, FALLBACK_ORDER)?,
            series_fallback: true,
        }),
    }
}

/// Partial sum of `Σ εⁿ/n! {vⁿ, w}` with `{vⁿ, w} = −[v, {vⁿ⁻¹, w}]`.
pub fn adjoint_series(v: &Generator, eps: f64, w: &Generator, order: usize) -> Result<Generator> {
    let mut term = w.clone();
    let mut sum = w.clone();
    let mut factor = 1.0;
    for n in 1..=order {
        term = v.commutator(&term)?.scale(-1.0);
        if term.is_zero() {
            break;
        }
        factor *= eps / n as f64;
        sum = sum.add(&term.scale(factor))?;
    }
    Ok(sum)
}

fn domain_of(g: &Generator) -> Result<Option<HalfLine>> {
    let (_, funcs) = g.parts();
    let mut out = None;
    for f in funcs {
        if let Some(d) = f.domain()? {
            out = Some(d);
        }
    }
    Ok(out)
}

fn prune(g: &Generator, times: &[f64]) -> Generator {
    const TINY: f64 = 1e-40;
    match g {
        Generator::Plane(p) => Generator::Plane(PlaneGenerator {
            f: p.f.pruned(TINY, times),
            h: p.h.pruned(TINY, times),
            g: p.g.pruned(TINY, times),
            ..p.clone()
        }),
        Generator::Sphere(s) => Generator::Sphere(SphereGenerator {
            g: s.g.pruned(TINY, times),
            ..s.clone()
        }),
    }
}

/// Classical RK4 on `dw/dε = [w, v]`, `w(0) = w`, in coefficient space.
pub fn adjoint_ode_oracle(v: &Generator, eps: f64, w: &Generator, steps: usize) -> Result<Generator> {
    if steps == 0 {
        return Err(Error::InvalidParameter("the ODE oracle needs steps ≥ 1".into()));
    }
    if eps == 0.0 {
        return Ok(w.clone());
    }
    let domain = match domain_of(v)? {
        Some(d) => Some(d),
        None => domain_of(w)?,
    };
    let times = sample_times(domain);
    let rhs = |x: &Generator| x.commutator(v);
    let h = eps / steps as f64;
    let mut y = w.clone();
    for _ in 0..steps {
        let k1 = rhs(&y)?;
        let k2 = rhs(&y.add(&k1.scale(0.5 * h))?)?;
        let k3 = rhs(&y.add(&k2.scale(0.5 * h))?)?;
        let k4 = rhs(&y.add(&k3.scale(h))?)?;
        let incr = k1.add(&k2.scale(2.0))?.add(&k3.scale(2.0))?.add(&k4)?;
        y = prune(&y.add(&incr.scale(h / 6.0))?, &times);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Frame;

    const BP: PlaneFlavor = PlaneFlavor::BetaPlane;

    fn plane(g: PlaneGenerator) -> Generator {
        Generator::Plane(g)
    }

    #[test]
    fn scaling_acts_on_time_translation() {
        let img = adjoint_closed(&plane(PlaneGenerator::beta_d()), 2f64.ln(), &plane(PlaneGenerator::dt(BP)))
            .unwrap();
        assert!(!img.series_fallback);
        let want = plane(PlaneGenerator::dt(BP).scale(2.0));
        let (ds, _) = img.image.distance(&want, &[0.0]).unwrap();
        assert!(ds < 1e-15);
    }

    #[test]
    fn rotation_about_third_axis() {
        let r = Frame::Rest;
        let img = adjoint_closed(
            &Generator::Sphere(SphereGenerator::j(r, 3)),
            std::f64::consts::FRAC_PI_2,
            &Generator::Sphere(SphereGenerator::j(r, 2)),
        )
        .unwrap()
        .image;
        let (ds, _) = img.distance(&Generator::Sphere(SphereGenerator::j(r, 1)), &[0.0]).unwrap();
        assert!(ds < 1e-15);
    }

    #[test]
    fn zero_parameter_is_identity() {
        let w = plane(PlaneGenerator::x(BP, TimeFunction::cosine(1.0, 1.0, 0.0)));
        let v = plane(PlaneGenerator::beta_d());
        assert_eq!(adjoint_closed(&v, 0.0, &w).unwrap().image, w);
        assert_eq!(adjoint_ode_oracle(&v, 0.0, &w, 10).unwrap(), w);
    }

    #[test]
    fn series_terminates_for_nilpotent_pair() {
        let v = plane(PlaneGenerator::dt(BP));
        let w = plane(PlaneGenerator::beta_d());
        let s = adjoint_series(&v, 0.7, &w, 5).unwrap();
        let want = plane(PlaneGenerator::beta_d().add(&PlaneGenerator::dt(BP).scale(-0.7)).unwrap());
        assert_eq!(s, want);
    }

    #[test]
    fn series_approximates_rotation() {
        let r = Frame::Rest;
        let eps: f64 = 0.3;
        let v = Generator::Sphere(SphereGenerator::j(r, 1));
        let w = Generator::Sphere(SphereGenerator::j(r, 2));
        let s = adjoint_series(&v, eps, &w, 8).unwrap();
        let c = adjoint_closed(&v, eps, &w).unwrap().image;
        let bound = eps.powi(9) / 362880.0;
        let (ds, _) = s.distance(&c, &[0.0]).unwrap();
        assert!(ds <= bound, "{ds} > {bound}");
    }

    #[test]
    fn ode_oracle_examples() {
        let d = plane(PlaneGenerator::beta_d());
        let dy = plane(PlaneGenerator::dy(BP));
        let out = adjoint_ode_oracle(&d, 1.0, &dy, 100).unwrap();
        let want = plane(PlaneGenerator::dy(BP).scale((-1.0f64).exp()));
        let (ds, _) = out.distance(&want, &[0.0]).unwrap();
        assert!(ds < 1e-8);

        let x = plane(PlaneGenerator::x(BP, TimeFunction::monomial(1.0, 2)));
        let out = adjoint_ode_oracle(&dy, 0.5, &x, 100).unwrap();
        let want = plane(PlaneGenerator {
            g: TimeFunction::monomial(1.0, 1),
            ..PlaneGenerator::x(BP, TimeFunction::monomial(1.0, 2))
        });
        let times = sample_times(None);
        let (ds, df) = out.distance(&want, &times).unwrap();
        assert!(ds < 1e-8 && df < 1e-8);
    }

    #[test]
    fn ode_oracle_tracks_scaling_of_exponentials() {
        let d = plane(PlaneGenerator::beta_d());
        let x = plane(PlaneGenerator::x(BP, TimeFunction::exponential(1.0, 0.8)));
        let closed = adjoint_closed(&d, 0.6, &x).unwrap().image;
        let ode = adjoint_ode_oracle(&d, 0.6, &x, 200).unwrap();
        let (_, df) = closed.distance(&ode, &sample_times(None)).unwrap();
        assert!(df < 1e-6, "{df}");
    }

    #[test]
    fn fplane_falls_back_to_series() {
        let v = plane(PlaneGenerator::d1());
        let w = plane(PlaneGenerator::dt(PlaneFlavor::FPlane));
        let img = adjoint_closed(&v, 0.5, &w).unwrap();
        assert!(img.series_fallback);
        let want = plane(PlaneGenerator::dt(PlaneFlavor::FPlane).scale(0.5f64.exp()));
        let (ds, _) = img.image.distance(&want, &[0.0]).unwrap();
        assert!(ds < 1e-14);
    }
}
