//! Symmetry generators of the vorticity equation on the f-plane, the β-plane,
//! the sphere at rest and the rotating sphere.
//!
//! Plane basis (coordinates `t, x, y, ψ`):
//! `D1 = t∂t − ψ∂ψ`, `D2 = x∂x + y∂y + 2ψ∂ψ`, `J = −y∂x + x∂y`,
//! `Jt = t(−y∂x + x∂y) + ½(x² + y²)∂ψ`, `∂t`, `X(f) = f∂x − f′y∂ψ`,
//! `Y(h) = h∂y + h′x∂ψ`, `Z(g) = g∂ψ`. The β-plane algebra is spanned by
//! `D = D1 − D2`, `∂t`, `∂y = Y(1)`, `X(f)` and `Z(g)`.
//!
//! Sphere basis (coordinates `t, λ, μ, ψ`): `D = t∂t − ψ∂ψ`, `∂t`,
//! `J1 = ∂λ`, `J2`, `J3` (infinitesimal rotations) and `Z(g)`.

mod frame;
mod transform;

pub use frame::{
    frame_transform, map_generator_between_frames, rotating_basis_field, FrameDirection,
    FrameMapped, RotatingBasis,
};
pub use transform::{flow, Elementary, PointTransformation, Pushforward};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timefn::TimeFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneFlavor {
    #[serde(rename = "fplane")]
    FPlane,
    #[serde(rename = "bplane")]
    BetaPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Frame {
    Rest,
    Rotating { omega: f64 },
}

impl Frame {
    pub fn omega(self) -> f64 {
        match self {
            Frame::Rest => 0.0,
            Frame::Rotating { omega } => omega,
        }
    }
}

/// `a_d1·D1 + a_d2·D2 + a_j·J + a_jt·Jt + a_t·∂t + X(f) + Y(h) + Z(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneGenerator {
    pub flavor: PlaneFlavor,
    pub a_d1: f64,
    pub a_d2: f64,
    pub a_j: f64,
    pub a_jt: f64,
    pub a_t: f64,
    pub f: TimeFunction,
    pub h: TimeFunction,
    pub g: TimeFunction,
}

/// `a_d·D + a_t·∂t + a1·J1 + a2·J2 + a3·J3 + Z(g)`, always in rest-frame
/// coordinates. `frame` records which equation the generator belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGenerator {
    pub frame: Frame,
    pub a_d: f64,
    pub a_t: f64,
    pub rot: [f64; 3],
    pub g: TimeFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Plane(PlaneGenerator),
    Sphere(SphereGenerator),
}

fn times_t(f: &TimeFunction) -> TimeFunction {
    f.mul_power(1, None)
        .expect("multiplying by a nonnegative power of t stays in the algebra")
}

impl PlaneGenerator {
    pub fn zero(flavor: PlaneFlavor) -> Self {
        Self {
            flavor,
            a_d1: 0.0,
            a_d2: 0.0,
            a_j: 0.0,
            a_jt: 0.0,
            a_t: 0.0,
            f: TimeFunction::zero(),
            h: TimeFunction::zero(),
            g: TimeFunction::zero(),
        }
    }

    pub fn d1() -> Self {
        Self { a_d1: 1.0, ..Self::zero(PlaneFlavor::FPlane) }
    }

    pub fn d2() -> Self {
        Self { a_d2: 1.0, ..Self::zero(PlaneFlavor::FPlane) }
    }

    pub fn rotation() -> Self {
        Self { a_j: 1.0, ..Self::zero(PlaneFlavor::FPlane) }
    }

    pub fn time_rotation() -> Self {
        Self { a_jt: 1.0, ..Self::zero(PlaneFlavor::FPlane) }
    }

    pub fn y_shift(h: TimeFunction) -> Self {
        Self { h, ..Self::zero(PlaneFlavor::FPlane) }
    }

    /// β-plane scaling `D = D1 − D2`.
    pub fn beta_d() -> Self {
        Self { a_d1: 1.0, a_d2: -1.0, ..Self::zero(PlaneFlavor::BetaPlane) }
    }

    pub fn dt(flavor: PlaneFlavor) -> Self {
        Self { a_t: 1.0, ..Self::zero(flavor) }
    }

    /// `∂y = Y(1)`.
    pub fn dy(flavor: PlaneFlavor) -> Self {
        Self { h: TimeFunction::constant(1.0), ..Self::zero(flavor) }
    }

    pub fn x(flavor: PlaneFlavor, f: TimeFunction) -> Self {
        Self { f, ..Self::zero(flavor) }
    }

    pub fn z(flavor: PlaneFlavor, g: TimeFunction) -> Self {
        Self { g, ..Self::zero(flavor) }
    }

    pub fn with_flavor(self, flavor: PlaneFlavor) -> Self {
        Self { flavor, ..self }
    }

    /// Coefficient of `D` for a β-plane generator.
    pub fn a_d(&self) -> f64 {
        self.a_d1
    }

    /// Coefficient of `∂y` when `h` is constant.
    pub fn a_y(&self) -> Option<f64> {
        self.h.as_constant()
    }

    pub fn validate(&self) -> Result<()> {
        if self.flavor == PlaneFlavor::BetaPlane {
            if self.a_d2 != -self.a_d1 || self.a_j != 0.0 || self.a_jt != 0.0 {
                return Err(Error::InvalidParameter(
                    "β-plane generators are spanned by D, ∂t, ∂y, X(f), Z(g)".into(),
                ));
            }
            if self.h.as_constant().is_none() {
                return Err(Error::InvalidParameter(
                    "β-plane generators need a constant ∂y coefficient".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        [self.a_d1, self.a_d2, self.a_j, self.a_jt, self.a_t]
            .iter()
            .all(|&c| c == 0.0)
            && self.f.is_zero()
            && self.h.is_zero()
            && self.g.is_zero()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            flavor: self.flavor,
            a_d1: self.a_d1 * c,
            a_d2: self.a_d2 * c,
            a_j: self.a_j * c,
            a_jt: self.a_jt * c,
            a_t: self.a_t * c,
            f: self.f.scale(c),
            h: self.h.scale(c),
            g: self.g.scale(c),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(
                format!("{:?}", self.flavor),
                format!("{:?}", other.flavor),
            ));
        }
        Ok(Self {
            flavor: self.flavor,
            a_d1: self.a_d1 + other.a_d1,
            a_d2: self.a_d2 + other.a_d2,
            a_j: self.a_j + other.a_j,
            a_jt: self.a_jt + other.a_jt,
            a_t: self.a_t + other.a_t,
            f: self.f.add(&other.f),
            h: self.h.add(&other.h),
            g: self.g.add(&other.g),
        })
    }

    /// `[s, X(f) + Y(h) + Z(g)]` where `s` is the scalar part of `self`.
    fn act_on_functions(
        &self,
        f: &TimeFunction,
        h: &TimeFunction,
        g: &TimeFunction,
    ) -> (TimeFunction, TimeFunction, TimeFunction) {
        let (fp, hp, gp) = (f.derivative(), h.derivative(), g.derivative());
        let x = times_t(&fp)
            .scale(self.a_d1)
            .sub(&f.scale(self.a_d2))
            .add(&h.scale(self.a_j))
            .add(&times_t(h).scale(self.a_jt))
            .add(&fp.scale(self.a_t));
        let y = times_t(&hp)
            .scale(self.a_d1)
            .sub(&h.scale(self.a_d2))
            .sub(&f.scale(self.a_j))
            .sub(&times_t(f).scale(self.a_jt))
            .add(&hp.scale(self.a_t));
        let z = g
            .add(&times_t(&gp))
            .scale(self.a_d1)
            .sub(&g.scale(2.0 * self.a_d2))
            .add(&gp.scale(self.a_t));
        (x, y, z)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(
                format!("{:?}", self.flavor),
                format!("{:?}", other.flavor),
            ));
        }
        let (x1, y1, z1) = self.act_on_functions(&other.f, &other.h, &other.g);
        let (x2, y2, z2) = other.act_on_functions(&self.f, &self.h, &self.g);
        let fh = self.f.mul(&other.h)?.sub(&other.f.mul(&self.h)?);
        Ok(Self {
            flavor: self.flavor,
            a_d1: 0.0,
            a_d2: 0.0,
            a_j: -(self.a_jt * other.a_t - other.a_jt * self.a_t),
            a_jt: self.a_d1 * other.a_jt - other.a_d1 * self.a_jt,
            a_t: -(self.a_d1 * other.a_t - other.a_d1 * self.a_t),
            f: x1.sub(&x2),
            h: y1.sub(&y2),
            g: z1.sub(&z2).add(&fh.derivative()),
        })
    }

    /// Infinitesimal coefficients `(ξt, ξx, ξy, ξψ)` at `(t, x, y, ψ)`.
    pub fn eval_vector_field(&self, p: [f64; 4]) -> Result<[f64; 4]> {
        let [t, x, y, psi] = p;
        let [f, fp, ..] = self.f.derivs3(t)?;
        let [h, hp, ..] = self.h.derivs3(t)?;
        let g = self.g.eval(t)?;
        Ok([
            self.a_d1 * t + self.a_t,
            self.a_d2 * x - self.a_j * y - self.a_jt * t * y + f,
            self.a_d2 * y + self.a_j * x + self.a_jt * t * x + h,
            (2.0 * self.a_d2 - self.a_d1) * psi + 0.5 * self.a_jt * (x * x + y * y) - fp * y
                + hp * x
                + g,
        ])
    }
}

impl SphereGenerator {
    pub fn zero(frame: Frame) -> Self {
        Self {
            frame,
            a_d: 0.0,
            a_t: 0.0,
            rot: [0.0; 3],
            g: TimeFunction::zero(),
        }
    }

    pub fn d(frame: Frame) -> Self {
        Self { a_d: 1.0, ..Self::zero(frame) }
    }

    pub fn dt(frame: Frame) -> Self {
        Self { a_t: 1.0, ..Self::zero(frame) }
    }

    /// `J_k` for `k` in 1..=3.
    pub fn j(frame: Frame, k: usize) -> Self {
        let mut rot = [0.0; 3];
        rot[k - 1] = 1.0;
        Self { rot, ..Self::zero(frame) }
    }

    pub fn z(frame: Frame, g: TimeFunction) -> Self {
        Self { g, ..Self::zero(frame) }
    }

    pub fn is_zero(&self) -> bool {
        self.a_d == 0.0 && self.a_t == 0.0 && self.rot.iter().all(|&c| c == 0.0) && self.g.is_zero()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            frame: self.frame,
            a_d: self.a_d * c,
            a_t: self.a_t * c,
            rot: self.rot.map(|r| r * c),
            g: self.g.scale(c),
        }
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FlavorMismatch(
                format!("{:?}", self.frame),
                format!("{:?}", other.frame),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        Ok(Self {
            frame: self.frame,
            a_d: self.a_d + other.a_d,
            a_t: self.a_t + other.a_t,
            rot: [0, 1, 2].map(|i| self.rot[i] + other.rot[i]),
            g: self.g.add(&other.g),
        })
    }

    fn act_on_z(&self, g: &TimeFunction) -> TimeFunction {
        let gp = g.derivative();
        g.add(&times_t(&gp)).scale(self.a_d).add(&gp.scale(self.a_t))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let (a, b) = (self.rot, other.rot);
        Ok(Self {
            frame: self.frame,
            a_d: 0.0,
            a_t: -(self.a_d * other.a_t - other.a_d * self.a_t),
            rot: [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ],
            g: self.act_on_z(&other.g).sub(&other.act_on_z(&self.g)),
        })
    }

    /// Rest-frame coefficients `(ξt, ξλ, ξμ, ξψ)` at a rest-frame point.
    pub fn eval_rest(&self, p: [f64; 4]) -> Result<[f64; 4]> {
        let [t, lambda, mu, psi] = p;
        let (mut xl, mut xm) = (self.rot[0], 0.0);
        if self.rot[1] != 0.0 || self.rot[2] != 0.0 {
            if mu.abs() >= 1.0 {
                return Err(Error::Domain(format!(
                    "J2/J3 are singular at the pole μ = {mu}"
                )));
            }
            let s = (1.0 - mu * mu).sqrt();
            let (sl, cl) = lambda.sin_cos();
            xl += mu / s * (self.rot[1] * sl + self.rot[2] * cl);
            xm += s * (self.rot[1] * cl - self.rot[2] * sl);
        }
        Ok([
            self.a_d * t + self.a_t,
            xl,
            xm,
            -self.a_d * psi + self.g.eval(t)?,
        ])
    }

    /// Coefficients at a point given in the generator's own frame.
    pub fn eval_vector_field(&self, p: [f64; 4]) -> Result<[f64; 4]> {
        let omega = self.frame.omega();
        if omega == 0.0 {
            return self.eval_rest(p);
        }
        let [t, lambda, mu, psi] = p;
        let rest = self.eval_rest([t, lambda + omega * t, mu, psi - omega * mu])?;
        Ok([
            rest[0],
            rest[1] - omega * rest[0],
            rest[2],
            rest[3] + omega * rest[2],
        ])
    }
}

impl Generator {
    fn label(&self) -> String {
        match self {
            Generator::Plane(p) => format!("{:?}", p.flavor),
            Generator::Sphere(s) => format!("sphere {:?}", s.frame),
        }
    }

    pub fn commutator(&self, other: &Generator) -> Result<Generator> {
        match (self, other) {
            (Generator::Plane(a), Generator::Plane(b)) => Ok(Generator::Plane(a.commutator(b)?)),
            (Generator::Sphere(a), Generator::Sphere(b)) => {
                Ok(Generator::Sphere(a.commutator(b)?))
            }
            _ => Err(Error::FlavorMismatch(self.label(), other.label())),
        }
    }

    pub fn eval_vector_field(&self, p: [f64; 4]) -> Result<[f64; 4]> {
        match self {
            Generator::Plane(g) => g.eval_vector_field(p),
            Generator::Sphere(g) => g.eval_vector_field(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Generator::Plane(g) => g.is_zero(),
            Generator::Sphere(g) => g.is_zero(),
        }
    }

    pub fn scale(&self, c: f64) -> Generator {
        match self {
            Generator::Plane(g) => Generator::Plane(g.scale(c)),
            Generator::Sphere(g) => Generator::Sphere(g.scale(c)),
        }
    }

    pub fn add(&self, other: &Generator) -> Result<Generator> {
        match (self, other) {
            (Generator::Plane(a), Generator::Plane(b)) => Ok(Generator::Plane(a.add(b)?)),
            (Generator::Sphere(a), Generator::Sphere(b)) => Ok(Generator::Sphere(a.add(b)?)),
            _ => Err(Error::FlavorMismatch(self.label(), other.label())),
        }
    }

    /// Scalar coefficients and the time functions, for norm comparisons.
    pub fn parts(&self) -> (Vec<f64>, Vec<&TimeFunction>) {
        match self {
            Generator::Plane(g) => (
                vec![g.a_d1, g.a_d2, g.a_j, g.a_jt, g.a_t],
                vec![&g.f, &g.h, &g.g],
            ),
            Generator::Sphere(g) => (
                vec![g.a_d, g.a_t, g.rot[0], g.rot[1], g.rot[2]],
                vec![&g.g],
            ),
        }
    }

    /// Largest scalar difference and largest function difference over `times`.
    pub fn distance(&self, other: &Generator, times: &[f64]) -> Result<(f64, f64)> {
        let diff = self.add(&other.scale(-1.0))?;
        let (scalars, funcs) = diff.parts();
        let ds = scalars.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut df = 0.0f64;
        for f in funcs {
            for &t in times {
                df = df.max(f.eval(t)?.abs());
            }
        }
        Ok((ds, df))
    }
}

impl From<PlaneGenerator> for Generator {
    fn from(g: PlaneGenerator) -> Self {
        Generator::Plane(g)
    }
}

impl From<SphereGenerator> for Generator {
    fn from(g: SphereGenerator) -> Self {
        Generator::Sphere(g)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut push = |c: f64, name: &str| {
            if c != 0.0 {
                parts.push(format!("{c}·{name}"));
            }
        };
        match self {
            Generator::Plane(g) => {
                if g.flavor == PlaneFlavor::BetaPlane {
                    push(g.a_d1, "D");
                } else {
                    push(g.a_d1, "D1");
                    push(g.a_d2, "D2");
                    push(g.a_j, "J");
                    push(g.a_jt, "Jt");
                }
                push(g.a_t, "∂t");
                for (name, fun) in [("X", &g.f), ("Y", &g.h), ("Z", &g.g)] {
                    if !fun.is_zero() {
                        parts.push(format!("{name}({fun})"));
                    }
                }
            }
            Generator::Sphere(g) => {
                push(g.a_d, "D");
                push(g.a_t, "∂t");
                push(g.rot[0], "J1");
                push(g.rot[1], "J2");
                push(g.rot[2], "J3");
                if !g.g.is_zero() {
                    parts.push(format!("Z({})", g.g));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// JSON form `{algebra, coeffs, f, g, h, omega}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    pub algebra: AlgebraTag,
    #[serde(default)]
    pub coeffs: std::collections::BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "TimeFunction::is_zero")]
    pub f: TimeFunction,
    #[serde(default, skip_serializing_if = "TimeFunction::is_zero")]
    pub g: TimeFunction,
    #[serde(default, skip_serializing_if = "TimeFunction::is_zero")]
    pub h: TimeFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraTag {
    #[serde(rename = "bplane")]
    BetaPlane,
    #[serde(rename = "fplane")]
    FPlane,
    #[serde(rename = "sphere0")]
    Sphere0,
    #[serde(rename = "sphereOmega")]
    SphereOmega,
}

const PLANE_KEYS: [&str; 5] = ["D1", "D2", "J", "Jt", "t"];
const BETA_KEYS: [&str; 3] = ["D", "t", "y"];
const SPHERE_KEYS: [&str; 5] = ["D", "t", "J1", "J2", "J3"];

impl GeneratorRecord {
    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.coeffs.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "unknown coefficient '{key}' for {:?} (allowed: {})",
                    self.algebra,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn c(&self, key: &str) -> f64 {
        self.coeffs.get(key).copied().unwrap_or(0.0)
    }

    pub fn to_generator(&self) -> Result<Generator> {
        match self.algebra {
            AlgebraTag::FPlane => {
                self.check_keys(&PLANE_KEYS)?;
                Ok(Generator::Plane(PlaneGenerator {
                    flavor: PlaneFlavor::FPlane,
                    a_d1: self.c("D1"),
                    a_d2: self.c("D2"),
                    a_j: self.c("J"),
                    a_jt: self.c("Jt"),
                    a_t: self.c("t"),
                    f: self.f.clone(),
                    h: self.h.clone(),
                    g: self.g.clone(),
                }))
            }
            AlgebraTag::BetaPlane => {
                self.check_keys(&BETA_KEYS)?;
                if !self.h.is_zero() {
                    return Err(Error::Config(
                        "β-plane generators take the ∂y coefficient as coeffs.y, not h".into(),
                    ));
                }
                let d = self.c("D");
                Ok(Generator::Plane(PlaneGenerator {
                    flavor: PlaneFlavor::BetaPlane,
                    a_d1: d,
                    a_d2: -d,
                    a_j: 0.0,
                    a_jt: 0.0,
                    a_t: self.c("t"),
                    f: self.f.clone(),
                    h: TimeFunction::constant(self.c("y")),
                    g: self.g.clone(),
                }))
            }
            AlgebraTag::Sphere0 | AlgebraTag::SphereOmega => {
                self.check_keys(&SPHERE_KEYS)?;
                if !self.f.is_zero() || !self.h.is_zero() {
                    return Err(Error::Config("sphere generators only take g".into()));
                }
                let frame = match (self.algebra, self.omega) {
                    (AlgebraTag::Sphere0, None | Some(0.0)) => Frame::Rest,
                    (AlgebraTag::Sphere0, Some(_)) => {
                        return Err(Error::Config("sphere0 generators have Ω = 0".into()))
                    }
                    (_, Some(omega)) if omega != 0.0 => Frame::Rotating { omega },
                    _ => return Err(Error::Config("sphereOmega needs a nonzero omega".into())),
                };
                let rot = [self.c("J1"), self.c("J2"), self.c("J3")];
                let rest = SphereGenerator {
                    frame,
                    a_d: self.c("D"),
                    a_t: self.c("t"),
                    rot,
                    g: self.g.clone(),
                };
                // Rotating-frame coefficients refer to the rotating basis;
                // its ∂t is the rest-frame ∂t + Ω·J1.
                Ok(Generator::Sphere(match frame {
                    Frame::Rest => rest,
                    Frame::Rotating { omega } => SphereGenerator {
                        rot: [rot[0] + omega * rest.a_t, rot[1], rot[2]],
                        ..rest
                    },
                }))
            }
        }
    }

    pub fn from_generator(g: &Generator) -> Self {
        let mut coeffs = std::collections::BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            if v != 0.0 {
                coeffs.insert(k.to_string(), v);
            }
        };
        match g {
            Generator::Plane(p) if p.flavor == PlaneFlavor::BetaPlane => {
                put("D", p.a_d1);
                put("t", p.a_t);
                put("y", p.h.as_constant().unwrap_or(0.0));
                Self {
                    algebra: AlgebraTag::BetaPlane,
                    coeffs,
                    f: p.f.clone(),
                    g: p.g.clone(),
                    h: TimeFunction::zero(),
                    omega: None,
                }
            }
            Generator::Plane(p) => {
                put("D1", p.a_d1);
                put("D2", p.a_d2);
                put("J", p.a_j);
                put("Jt", p.a_jt);
                put("t", p.a_t);
                Self {
                    algebra: AlgebraTag::FPlane,
                    coeffs,
                    f: p.f.clone(),
                    g: p.g.clone(),
                    h: p.h.clone(),
                    omega: None,
                }
            }
            Generator::Sphere(s) => {
                let omega = s.frame.omega();
                put("D", s.a_d);
                put("t", s.a_t);
                put("J1", s.rot[0] - omega * s.a_t);
                put("J2", s.rot[1]);
                put("J3", s.rot[2]);
                Self {
                    algebra: if omega == 0.0 { AlgebraTag::Sphere0 } else { AlgebraTag::SphereOmega },
                    coeffs,
                    f: TimeFunction::zero(),
                    g: s.g.clone(),
                    h: TimeFunction::zero(),
                    omega: if omega == 0.0 { None } else { Some(omega) },
                }
            }
        }
    }
}
