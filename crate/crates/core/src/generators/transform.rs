//! Finite point transformations: flows of basis generators, discrete
//! symmetries and the rotating/rest frame map. Every map is affine in ψ,
//! `ψ̃ = A·ψ + B(t, s1, s2)`, and is evaluated on jets so that transformed
//! solutions keep exact derivatives.

use std::f64::consts::TAU;
use std::fmt;

use super::{Frame, Generator, PlaneGenerator, SphereGenerator};
use crate::error::{Error, Result};
use crate::field::{Geometry, SharedField, StreamFunction};
use crate::jet::Jet;
use crate::timefn::TimeFunction;

#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    TimeShift(f64),
    /// `exp(ε D1)` on the plane.
    PlaneD1(f64),
    /// `exp(ε D2)` on the plane.
    PlaneD2(f64),
    /// `exp(ε (D1 − D2))`.
    BetaD(f64),
    /// `exp(ε J)`.
    PlaneRotation(f64),
    /// `exp(ε Jt)`.
    TimeRotation(f64),
    XShift { f: TimeFunction, eps: f64 },
    YShift { h: TimeFunction, eps: f64 },
    Gauge { g: TimeFunction, eps: f64 },
    /// `(t, x, y, ψ) ↦ (−t, −x, y, ψ)`.
    PlaneReflectTX,
    /// `(t, x, y, ψ) ↦ (t, x, −y, −ψ)`.
    PlaneReflectY,
    /// `exp(ε D)` on the sphere.
    SphereD(f64),
    /// `exp(ε J_axis)`, axis in 1..=3.
    SphereRotation { axis: usize, angle: f64 },
    /// `(t, λ, μ, ψ) ↦ (−t, −λ, μ, ψ)`.
    SphereReflectTLambda,
    /// `(t, λ, μ, ψ) ↦ (t, λ, −μ, −ψ)`.
    SphereReflectMu,
    /// Rotating coordinates to rest coordinates:
    /// `(t, λ, μ, ψ) ↦ (t, λ + Ωt, μ, ψ − Ωμ)`.
    FrameToRest(f64),
    FrameToRotating(f64),
}

fn rotate(a: Jet, b: Jet, angle: f64) -> (Jet, Jet) {
    let (s, c) = angle.sin_cos();
    (a * c - b * s, a * s + b * c)
}

fn wrap_angle(lambda: Jet) -> Jet {
    let v = lambda.value();
    let shift = (v / TAU).floor() * TAU;
    lambda - shift
}

fn rigid_rotation(p: &[Jet; 3], axis: usize, angle: f64) -> Result<[Jet; 3]> {
    let [t, lambda, mu] = *p;
    if axis == 1 {
        return Ok([t, lambda + angle, mu]);
    }
    if mu.value().abs() >= 1.0 {
        return Err(Error::Domain(format!("rotation of the pole μ = {}", mu.value())));
    }
    let s = (1.0 - mu * mu).sqrt();
    let (ex, ey, ez) = (s * lambda.cos(), s * lambda.sin(), mu);
    let (ex, ey, ez) = match axis {
        // J2 turns (X, Z) with Ẋ = −Z, Ż = X.
        2 => {
            let (x2, z2) = rotate(ex, ez, angle);
            (x2, ey, z2)
        }
        // J3 turns (Y, Z) with Ẏ = Z, Ż = −Y.
        3 => {
            let (z2, y2) = rotate(ez, ey, angle);
            (ex, y2, z2)
        }
        _ => return Err(Error::InvalidParameter(format!("rotation axis {axis}"))),
    };
    if (ex.value().powi(2) + ey.value().powi(2)).sqrt() < 1e-14 {
        return Err(Error::Domain("rotation maps the point onto a pole".into()));
    }
    Ok([t, wrap_angle(Jet::atan2(&ey, &ex)), ez])
}

impl Elementary {
    pub fn inverse(&self) -> Elementary {
        use Elementary::*;
        match self {
            TimeShift(e) => TimeShift(-e),
            PlaneD1(e) => PlaneD1(-e),
            PlaneD2(e) => PlaneD2(-e),
            BetaD(e) => BetaD(-e),
            PlaneRotation(e) => PlaneRotation(-e),
            TimeRotation(e) => TimeRotation(-e),
            XShift { f, eps } => XShift { f: f.clone(), eps: -eps },
            YShift { h, eps } => YShift { h: h.clone(), eps: -eps },
            Gauge { g, eps } => Gauge { g: g.clone(), eps: -eps },
            PlaneReflectTX => PlaneReflectTX,
            PlaneReflectY => PlaneReflectY,
            SphereD(e) => SphereD(-e),
            SphereRotation { axis, angle } => SphereRotation { axis: *axis, angle: -angle },
            SphereReflectTLambda => SphereReflectTLambda,
            SphereReflectMu => SphereReflectMu,
            FrameToRest(o) => FrameToRotating(*o),
            FrameToRotating(o) => FrameToRest(*o),
        }
    }

    /// Image of the base point `(t, s1, s2)`.
    pub fn forward_base(&self, p: &[Jet; 3]) -> Result<[Jet; 3]> {
        use Elementary::*;
        let [t, a, b] = *p;
        Ok(match self {
            TimeShift(e) => [t + *e, a, b],
            PlaneD1(e) | SphereD(e) => [t * e.exp(), a, b],
            PlaneD2(e) => [t, a * e.exp(), b * e.exp()],
            BetaD(e) => [t * e.exp(), a * (-e).exp(), b * (-e).exp()],
            PlaneRotation(e) => {
                let (x, y) = rotate(a, b, *e);
                [t, x, y]
            }
            TimeRotation(e) => {
                let ang = t * *e;
                let (s, c) = (ang.sin(), ang.cos());
                [t, a * c - b * s, a * s + b * c]
            }
            XShift { f, eps } => [t, a + f.jet(&t)? * *eps, b],
            YShift { h, eps } => [t, a, b + h.jet(&t)? * *eps],
            Gauge { .. } => [t, a, b],
            PlaneReflectTX | SphereReflectTLambda => [-t, -a, b],
            PlaneReflectY | SphereReflectMu => [t, a, -b],
            SphereRotation { axis, angle } => rigid_rotation(p, *axis, *angle)?,
            FrameToRest(o) => [t, a + t * *o, b],
            FrameToRotating(o) => [t, a - t * *o, b],
        })
    }

    pub fn inverse_base(&self, q: &[Jet; 3]) -> Result<[Jet; 3]> {
        self.inverse().forward_base(q)
    }

    /// `(A, B)` with `ψ̃ = A ψ + B` evaluated at the original base point.
    pub fn psi_affine(&self, p: &[Jet; 3]) -> Result<(f64, Jet)> {
        use Elementary::*;
        let [t, a, b] = *p;
        let zero = Jet::constant(0.0);
        Ok(match self {
            PlaneD1(e) | SphereD(e) => ((-e).exp(), zero),
            PlaneD2(e) => ((2.0 * e).exp(), zero),
            BetaD(e) => ((-3.0 * e).exp(), zero),
            TimeRotation(e) => (1.0, (a * a + b * b) * (0.5 * e)),
            XShift { f, eps } => (1.0, -(f.derivative().jet(&t)? * b) * *eps),
            YShift { h, eps } => (1.0, h.derivative().jet(&t)? * a * *eps),
            Gauge { g, eps } => (1.0, g.jet(&t)? * *eps),
            PlaneReflectY | SphereReflectMu => (-1.0, zero),
            FrameToRest(o) => (1.0, b * -*o),
            FrameToRotating(o) => (1.0, b * *o),
            _ => (1.0, zero),
        })
    }

    fn describe(&self) -> String {
        use Elementary::*;
        match self {
            TimeShift(e) => format!("exp({e}·∂t)"),
            PlaneD1(e) => format!("exp({e}·D1)"),
            PlaneD2(e) => format!("exp({e}·D2)"),
            BetaD(e) | SphereD(e) => format!("exp({e}·D)"),
            PlaneRotation(e) => format!("exp({e}·J)"),
            TimeRotation(e) => format!("exp({e}·Jt)"),
            XShift { f, eps } => format!("exp({eps}·X({f}))"),
            YShift { h, eps } => format!("exp({eps}·Y({h}))"),
            Gauge { g, eps } => format!("exp({eps}·Z({g}))"),
            PlaneReflectTX => "(t,x,y,ψ)↦(−t,−x,y,ψ)".into(),
            PlaneReflectY => "(t,x,y,ψ)↦(t,x,−y,−ψ)".into(),
            SphereRotation { axis, angle } => format!("exp({angle}·J{axis})"),
            SphereReflectTLambda => "(t,λ,μ,ψ)↦(−t,−λ,μ,ψ)".into(),
            SphereReflectMu => "(t,λ,μ,ψ)↦(t,λ,−μ,−ψ)".into(),
            FrameToRest(o) => format!("to rest frame (Ω = {o})"),
            FrameToRotating(o) => format!("to rotating frame (Ω = {o})"),
        }
    }
}

/// A finite composition of elementary maps, applied first to last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointTransformation {
    steps: Vec<Elementary>,
}

impl PointTransformation {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(step: Elementary) -> Self {
        Self { steps: vec![step] }
    }

    pub fn from_steps(steps: Vec<Elementary>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Elementary] {
        &self.steps
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &PointTransformation) -> Self {
        let mut steps = first.steps.clone();
        steps.extend(self.steps.iter().cloned());
        Self { steps }
    }

    pub fn inverse(&self) -> Self {
        Self {
            steps: self.steps.iter().rev().map(Elementary::inverse).collect(),
        }
    }

    pub fn apply_jet(&self, p: &[Jet; 3], psi: Jet) -> Result<([Jet; 3], Jet)> {
        let (mut p, mut psi) = (*p, psi);
        for step in &self.steps {
            let (a, b) = step.psi_affine(&p)?;
            psi = psi * a + b;
            p = step.forward_base(&p)?;
        }
        Ok((p, psi))
    }

    /// Image of `(t, s1, s2, ψ)`.
    pub fn apply(&self, point: [f64; 4]) -> Result<[f64; 4]> {
        let p = [point[0], point[1], point[2]].map(Jet::constant);
        let (q, psi) = self.apply_jet(&p, Jet::constant(point[3]))?;
        Ok([q[0].value(), q[1].value(), q[2].value(), psi.value()])
    }

    pub fn apply_inverse(&self, point: [f64; 4]) -> Result<[f64; 4]> {
        self.inverse().apply(point)
    }

    pub fn pushforward(&self, field: SharedField) -> Pushforward {
        Pushforward {
            inner: field,
            transform: self.clone(),
        }
    }
}

impl fmt::Display for PointTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "identity");
        }
        let parts: Vec<String> = self.steps.iter().rev().map(Elementary::describe).collect();
        write!(f, "{}", parts.join(" ∘ "))
    }
}

/// The image of a solution under a point transformation:
/// `ψ_new(X̃) = A·ψ(base⁻¹(X̃)) + B(base⁻¹(X̃))`.
pub struct Pushforward {
    inner: SharedField,
    transform: PointTransformation,
}

impl StreamFunction for Pushforward {
    fn geometry(&self) -> Geometry {
        self.inner.geometry()
    }

    fn eval_jet(&self, q: &[Jet; 3]) -> Result<Jet> {
        let steps = &self.transform.steps;
        let mut points = Vec::with_capacity(steps.len() + 1);
        points.push(*q);
        for step in steps.iter().rev() {
            let p = step.inverse_base(points.last().expect("nonempty"))?;
            points.push(p);
        }
        points.reverse();
        let mut psi = self.inner.eval_jet(&points[0])?;
        for (step, p) in steps.iter().zip(&points) {
            let (a, b) = step.psi_affine(p)?;
            psi = psi * a + b;
        }
        Ok(psi)
    }
}

fn plane_flow(v: &PlaneGenerator, eps: f64) -> Result<Vec<Elementary>> {
    let scalars = [v.a_d1, v.a_d2, v.a_j, v.a_jt, v.a_t];
    let nonzero_scalars = scalars.iter().filter(|c| **c != 0.0).count();
    let funcs = [&v.f, &v.h, &v.g];
    let nonzero_funcs = funcs.iter().filter(|f| !f.is_zero()).count();
    let not_basis = || Error::NotBasis(format!("{}", Generator::Plane(v.clone())));
    if v.a_d1 != 0.0 && v.a_d2 == -v.a_d1 && nonzero_scalars == 2 && nonzero_funcs == 0 {
        return Ok(vec![Elementary::BetaD(v.a_d1 * eps)]);
    }
    match (nonzero_scalars, nonzero_funcs) {
        (1, 0) => Ok(vec![if v.a_d1 != 0.0 {
            Elementary::PlaneD1(v.a_d1 * eps)
        } else if v.a_d2 != 0.0 {
            Elementary::PlaneD2(v.a_d2 * eps)
        } else if v.a_j != 0.0 {
            Elementary::PlaneRotation(v.a_j * eps)
        } else if v.a_jt != 0.0 {
            Elementary::TimeRotation(v.a_jt * eps)
        } else {
            Elementary::TimeShift(v.a_t * eps)
        }]),
        (0, 1) => Ok(vec![if !v.f.is_zero() {
            Elementary::XShift { f: v.f.clone(), eps }
        } else if !v.h.is_zero() {
            Elementary::YShift { h: v.h.clone(), eps }
        } else {
            Elementary::Gauge { g: v.g.clone(), eps }
        }]),
        _ => Err(not_basis()),
    }
}

fn sphere_rest_flow(v: &SphereGenerator, eps: f64) -> Result<Vec<Elementary>> {
    let not_basis = || Error::NotBasis(format!("{}", Generator::Sphere(v.clone())));
    let rot_axes: Vec<usize> = (0..3).filter(|&i| v.rot[i] != 0.0).collect();
    let mut steps = Vec::new();
    if v.a_d != 0.0 {
        steps.push(Elementary::SphereD(v.a_d * eps));
    }
    if v.a_t != 0.0 {
        steps.push(Elementary::TimeShift(v.a_t * eps));
    }
    for &i in &rot_axes {
        steps.push(Elementary::SphereRotation {
            axis: i + 1,
            angle: v.rot[i] * eps,
        });
    }
    if !v.g.is_zero() {
        steps.push(Elementary::Gauge { g: v.g.clone(), eps });
    }
    // ∂t + c·J1 (the rotating-frame ∂t) is the only commuting pair accepted.
    let commuting_pair = steps.len() == 2 && v.a_t != 0.0 && rot_axes == [0];
    if steps.len() == 1 || commuting_pair {
        Ok(steps)
    } else {
        Err(not_basis())
    }
}

/// `exp(ε v)` for a multiple of a basis element.
pub fn flow(v: &Generator, eps: f64) -> Result<PointTransformation> {
    if v.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    match v {
        Generator::Plane(p) => Ok(PointTransformation::from_steps(plane_flow(p, eps)?)),
        Generator::Sphere(s) => {
            let rest = sphere_rest_flow(s, eps)?;
            Ok(match s.frame {
                Frame::Rest => PointTransformation::from_steps(rest),
                Frame::Rotating { omega } => {
                    let mut steps = vec![Elementary::FrameToRest(omega)];
                    steps.extend(rest);
                    steps.push(Elementary::FrameToRotating(omega));
                    PointTransformation::from_steps(steps)
                }
            })
        }
    }
}
