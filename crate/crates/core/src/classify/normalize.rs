//! Normalization of one-dimensional subalgebras to canonical representatives.

use std::fmt;

use serde::{Serialize, Serializer};

use super::adjoint::adjoint_closed;
use crate::error::{Error, Result};
use crate::generators::{
    Frame, Generator, GeneratorRecord, PlaneFlavor, PlaneGenerator, SphereGenerator,
};
use crate::timefn::{sample_times, HalfLine, TimeFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassId {
    /// `⟨D⟩`
    PD,
    /// `⟨∂t + c∂y⟩`, `c ∈ {0, 1}`
    PTY,
    /// `⟨∂y + X(f)⟩`
    PYX,
    /// `⟨X(f) + Z(g)⟩`, including pure `Z(g)`
    PXZ,
    /// `⟨D + aJ1⟩`
    SDJ,
    /// `⟨∂t + aJ1⟩`, `a ∈ {−1, 0, 1}`
    STJ,
    /// `⟨J1 + Z(g)⟩`
    SJZ,
    /// `⟨Z(g)⟩`
    SZ,
}

impl ClassId {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassId::PD => "P-D",
            ClassId::PTY => "P-TY",
            ClassId::PYX => "P-YX",
            ClassId::PXZ => "P-XZ",
            ClassId::SDJ => "S-DJ",
            ClassId::STJ => "S-TJ",
            ClassId::SJZ => "S-JZ",
            ClassId::SZ => "S-Z",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ClassId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessStep {
    /// `w ↦ Ad(e^{eps·element}) w`.
    Adjoint { element: Generator, eps: f64 },
    /// The discrete map `(t, x, y, ψ) ↦ (t, x, −y, −ψ)`.
    Reflection,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub steps: Vec<WitnessStep>,
    /// Applied after all steps.
    pub scale: f64,
}

fn reflect(w: &Generator) -> Result<Generator> {
    match w {
        Generator::Plane(p) if p.flavor == PlaneFlavor::BetaPlane => Ok(Generator::Plane(PlaneGenerator {
            h: p.h.scale(-1.0),
            g: p.g.scale(-1.0),
            ..p.clone()
        })),
        _ => Err(Error::Unsupported(
            "the y-reflection witness step only acts on β-plane generators".into(),
        )),
    }
}

impl Witness {
    pub fn replay(&self, v: &Generator) -> Result<Generator> {
        let mut w = v.clone();
        for step in &self.steps {
            w = match step {
                WitnessStep::Adjoint { element, eps } => adjoint_closed(element, *eps, &w)?.image,
                WitnessStep::Reflection => reflect(&w)?,
            };
        }
        Ok(w.scale(self.scale))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub class: ClassId,
    pub representative: Generator,
    pub witness: Witness,
    /// Distance between the replayed witness and the representative.
    pub residual: f64,
}

#[derive(Serialize)]
struct StepJson {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    element: Option<GeneratorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    class: ClassId,
    representative: GeneratorRecord,
    witness: Vec<StepJson>,
    scale: f64,
    residual: f64,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

impl Serialize for ClassificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let witness = self
            .witness
            .steps
            .iter()
            .map(|step| match step {
                WitnessStep::Adjoint { element, eps } => StepJson {
                    kind: "adjoint",
                    element: Some(GeneratorRecord::from_generator(element)),
                    eps: Some(*eps),
                },
                WitnessStep::Reflection => StepJson {
                    kind: "reflection",
                    element: None,
                    eps: None,
                },
            })
            .collect();
        ReportJson {
            class: self.class,
            representative: GeneratorRecord::from_generator(&self.representative),
            witness,
            scale: self.witness.scale,
            residual: self.residual,
            _marker: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

struct Builder {
    current: Generator,
    steps: Vec<WitnessStep>,
}

impl Builder {
    fn new(v: Generator) -> Self {
        Self { current: v, steps: Vec::new() }
    }

    fn adjoint(&mut self, element: Generator, eps: f64) -> Result<()> {
        if eps == 0.0 || element.is_zero() {
            return Ok(());
        }
        self.current = adjoint_closed(&element, eps, &self.current)?.image;
        self.steps.push(WitnessStep::Adjoint { element, eps });
        Ok(())
    }

    fn reflect(&mut self) -> Result<()> {
        self.current = reflect(&self.current)?;
        self.steps.push(WitnessStep::Reflection);
        Ok(())
    }

    fn plane(&self) -> &PlaneGenerator {
        match &self.current {
            Generator::Plane(p) => p,
            Generator::Sphere(_) => unreachable!("plane builder"),
        }
    }

    fn sphere(&self) -> &SphereGenerator {
        match &self.current {
            Generator::Sphere(s) => s,
            Generator::Plane(_) => unreachable!("sphere builder"),
        }
    }

    fn finish(self, original: &Generator, class: ClassId, scale: f64) -> Result<ClassificationReport> {
        let representative = self.current.scale(scale);
        let witness = Witness { steps: self.steps, scale };
        let replayed = witness.replay(original)?;
        let times = sample_times(function_domain(&representative)?);
        let (ds, df) = replayed.distance(&representative, &times)?;
        Ok(ClassificationReport {
            class,
            representative,
            witness,
            residual: ds.max(df),
        })
    }
}

fn function_domain(g: &Generator) -> Result<Option<HalfLine>> {
    let (_, funcs) = g.parts();
    let mut out = None;
    for f in funcs {
        if let Some(d) = f.domain()? {
            out = Some(d);
        }
    }
    Ok(out)
}

fn neg_antiderivative(f: &TimeFunction) -> Result<TimeFunction> {
    Ok(f.antiderivative()?.scale(-1.0))
}

/// Normalizes a β-plane generator. `domain` is the half-line used when the
/// kill quadratures of class P-D divide by powers of `t`.
pub fn normalize_1d_plane(v: &PlaneGenerator, domain: HalfLine) -> Result<ClassificationReport> {
    if v.flavor != PlaneFlavor::BetaPlane {
        return Err(Error::FlavorMismatch("β-plane".into(), format!("{:?}", v.flavor)));
    }
    v.validate()?;
    if v.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let bp = PlaneFlavor::BetaPlane;
    let original = Generator::Plane(v.clone());
    let ay0 = v.a_y().unwrap_or(0.0);

    if v.a_d1 != 0.0 {
        let scale = 1.0 / v.a_d1;
        let mut b = Builder::new(original.clone());
        let at = b.plane().a_t * scale;
        b.adjoint(Generator::Plane(PlaneGenerator::dt(bp)), at)?;
        let ay = b.plane().a_y().unwrap_or(0.0) * scale;
        b.adjoint(Generator::Plane(PlaneGenerator::dy(bp)), -ay)?;
        let f = b.plane().f.scale(scale);
        if !f.is_zero() {
            let integral = f.antiderivative()?;
            let p = integral.mul_power(-1, Some(domain)).map_err(|_| Error::UnsupportedCoefficient {
                integral: format!("t⁻¹ ∫ ({f}) dt"),
            })?;
            b.adjoint(Generator::Plane(PlaneGenerator::x(bp, p.scale(-1.0))), 1.0)?;
        }
        let g = b.plane().g.scale(scale);
        if !g.is_zero() {
            let t2g = g.mul_power(2, None)?;
            let q = t2g
                .antiderivative()?
                .mul_power(-3, Some(domain))
                .map_err(|_| Error::UnsupportedCoefficient {
                    integral: format!("t⁻³ ∫ t²·({g}) dt"),
                })?;
            b.adjoint(Generator::Plane(PlaneGenerator::z(bp, q.scale(-1.0))), 1.0)?;
        }
        return b.finish(&original, ClassId::PD, scale);
    }

    if v.a_t != 0.0 {
        let mut scale = 1.0 / v.a_t;
        let mut b = Builder::new(original.clone());
        let f = b.plane().f.scale(scale);
        if !f.is_zero() {
            b.adjoint(Generator::Plane(PlaneGenerator::x(bp, neg_antiderivative(&f)?)), 1.0)?;
        }
        let g = b.plane().g.scale(scale);
        if !g.is_zero() {
            b.adjoint(Generator::Plane(PlaneGenerator::z(bp, neg_antiderivative(&g)?)), 1.0)?;
        }
        let ay = ay0 * scale;
        if ay != 0.0 {
            let eps = ay.abs().ln() / 2.0;
            b.adjoint(Generator::Plane(PlaneGenerator::beta_d()), eps)?;
            scale *= (-eps).exp();
            if ay < 0.0 {
                b.reflect()?;
            }
        }
        return b.finish(&original, ClassId::PTY, scale);
    }

    if ay0 != 0.0 {
        let scale = 1.0 / ay0;
        let mut b = Builder::new(original.clone());
        let g = b.plane().g.scale(scale);
        if !g.is_zero() {
            b.adjoint(Generator::Plane(PlaneGenerator::x(bp, g.antiderivative()?)), 1.0)?;
        }
        return b.finish(&original, ClassId::PYX, scale);
    }

    Builder::new(original.clone()).finish(&original, ClassId::PXZ, 1.0)
}

/// Normalizes a generator of the rest-frame sphere algebra.
pub fn normalize_1d_sphere(v: &SphereGenerator, domain: HalfLine) -> Result<ClassificationReport> {
    if v.frame != Frame::Rest {
        return Err(Error::FlavorMismatch("sphere at rest".into(), format!("{:?}", v.frame)));
    }
    if v.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let frame = Frame::Rest;
    let original = Generator::Sphere(v.clone());
    let mut b = Builder::new(original.clone());

    let [_, a2, a3] = v.rot;
    if a3 != 0.0 {
        b.adjoint(Generator::Sphere(SphereGenerator::j(frame, 1)), a3.atan2(a2))?;
    }
    let [a1, a2, _] = b.sphere().rot;
    if a2 != 0.0 {
        b.adjoint(Generator::Sphere(SphereGenerator::j(frame, 3)), a2.atan2(a1))?;
    }
    let r = b.sphere().rot[0];

    if v.a_d != 0.0 {
        let scale = 1.0 / v.a_d;
        b.adjoint(Generator::Sphere(SphereGenerator::dt(frame)), v.a_t * scale)?;
        let g = b.sphere().g.scale(scale);
        if !g.is_zero() {
            let q = g
                .antiderivative()?
                .mul_power(-1, Some(domain))
                .map_err(|_| Error::UnsupportedCoefficient {
                    integral: format!("t⁻¹ ∫ ({g}) dt"),
                })?;
            b.adjoint(Generator::Sphere(SphereGenerator::z(frame, q.scale(-1.0))), 1.0)?;
        }
        return b.finish(&original, ClassId::SDJ, scale);
    }

    if v.a_t != 0.0 {
        let mut scale = 1.0 / v.a_t;
        let g = b.sphere().g.scale(scale);
        if !g.is_zero() {
            b.adjoint(Generator::Sphere(SphereGenerator::z(frame, neg_antiderivative(&g)?)), 1.0)?;
        }
        let a = r * scale;
        if a != 0.0 {
            let eps = a.abs().ln();
            b.adjoint(Generator::Sphere(SphereGenerator::d(frame)), eps)?;
            scale *= (-eps).exp();
        }
        return b.finish(&original, ClassId::STJ, scale);
    }

    if r != 0.0 {
        return b.finish(&original, ClassId::SJZ, 1.0 / r);
    }

    b.finish(&original, ClassId::SZ, 1.0)
}

/// Dispatches on the algebra of `v`.
pub fn normalize_1d(v: &Generator, domain: HalfLine) -> Result<ClassificationReport> {
    match v {
        Generator::Plane(p) => normalize_1d_plane(p, domain),
        Generator::Sphere(s) => normalize_1d_sphere(s, domain),
    }
}
