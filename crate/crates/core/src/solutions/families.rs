use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::equation::Equation;
use super::{plane, sphere};
use crate::error::Result;
use crate::field::{Geometry, SharedField, StreamFunction};
use crate::jet::Jet;
use crate::timefn::TimeFunction;

fn zero_fn() -> TimeFunction {
    TimeFunction::zero()
}

fn one() -> f64 {
    1.0
}

/// Branch of the cubic-sine steady solution: `(sign, phase)` is `(+, 0)`,
/// `(−, π/3)` or `(−, −π/3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SinCubedBranch {
    #[default]
    Principal,
    Plus,
    Minus,
}

/// One harmonic building block of Ψ in the partially invariant family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HarmonicTerm {
    /// `Re(c(t) e^{iφ} (x + iy)^n)`.
    Polynomial {
        n: u32,
        coeff: TimeFunction,
        #[serde(default)]
        phase: f64,
    },
    /// `c(t) e^{kx} cos(ky + φ)`.
    Exponential {
        k: f64,
        coeff: TimeFunction,
        #[serde(default)]
        phase: f64,
    },
}

/// One member `A P_n^m(μ) cos(m(λ − c t) + φ)` of a superposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhMember {
    pub m: i32,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Family descriptor, serialised as `{"id": ..., params...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", deny_unknown_fields)]
pub enum FamilySpec {
    RossbyWave {
        amplitude: f64,
        k: f64,
        l: f64,
        beta: f64,
        #[serde(default)]
        phase: f64,
    },
    Case4Plane {
        beta: f64,
        /// Profile `F(θ)`.
        profile: TimeFunction,
        f: TimeFunction,
        #[serde(default = "zero_fn")]
        g: TimeFunction,
        #[serde(default = "zero_fn")]
        h1: TimeFunction,
        #[serde(default = "zero_fn")]
        h0: TimeFunction,
        /// Time window on which `f` must not vanish.
        #[serde(default)]
        window: Option<[f64; 2]>,
    },
    CubicSteady {
        c1: f64,
        c2: f64,
        beta: f64,
    },
    SinCubed {
        beta: f64,
        #[serde(default)]
        branch: SinCubedBranch,
    },
    PIHarmonic {
        beta: f64,
        #[serde(default)]
        eta: f64,
        harmonic: Vec<HarmonicTerm>,
    },
    PIFProfile {
        beta: f64,
        profile: TimeFunction,
        g1: TimeFunction,
        #[serde(default = "zero_fn")]
        g0: TimeFunction,
        #[serde(default = "zero_fn")]
        f1: TimeFunction,
        #[serde(default = "zero_fn")]
        f0: TimeFunction,
    },
    PIChi {
        beta: f64,
        chi1: TimeFunction,
        #[serde(default = "zero_fn")]
        chi2: TimeFunction,
        #[serde(default = "zero_fn")]
        chi3: TimeFunction,
    },
    RossbyHaurwitz {
        omega: f64,
        amplitude: f64,
        n: u32,
        m: i32,
        /// Angular velocity parameter; `None` selects the pure wave.
        #[serde(default)]
        a: Option<f64>,
        #[serde(default)]
        phase: f64,
    },
    /// Superposition of pure Rossby–Haurwitz waves of a common degree.
    RossbyHaurwitzSum {
        omega: f64,
        n: u32,
        members: Vec<RhMember>,
    },
    SphereCase3 {
        #[serde(default = "zero_fn")]
        g: TimeFunction,
        #[serde(default = "zero_fn")]
        f: TimeFunction,
        #[serde(default = "zero_fn")]
        h: TimeFunction,
        /// Vorticity profile `w(θ)`.
        profile: TimeFunction,
    },
    SphereZonalWave {
        b: f64,
        c: f64,
        #[serde(default = "one")]
        v0: f64,
        #[serde(default)]
        dv0: f64,
    },
}

impl FamilySpec {
    pub fn id(&self) -> &'static str {
        match self {
            FamilySpec::RossbyWave { .. } => "RossbyWave",
            FamilySpec::Case4Plane { .. } => "Case4Plane",
            FamilySpec::CubicSteady { .. } => "CubicSteady",
            FamilySpec::SinCubed { .. } => "SinCubed",
            FamilySpec::PIHarmonic { .. } => "PIHarmonic",
            FamilySpec::PIFProfile { .. } => "PIFProfile",
            FamilySpec::PIChi { .. } => "PIChi",
            FamilySpec::RossbyHaurwitz { .. } => "RossbyHaurwitz",
            FamilySpec::RossbyHaurwitzSum { .. } => "RossbyHaurwitzSum",
            FamilySpec::SphereCase3 { .. } => "SphereCase3",
            FamilySpec::SphereZonalWave { .. } => "SphereZonalWave",
        }
    }

    pub fn equation(&self) -> Equation {
        match self {
            FamilySpec::RossbyWave { beta, .. }
            | FamilySpec::Case4Plane { beta, .. }
            | FamilySpec::CubicSteady { beta, .. }
            | FamilySpec::SinCubed { beta, .. }
            | FamilySpec::PIHarmonic { beta, .. }
            | FamilySpec::PIFProfile { beta, .. }
            | FamilySpec::PIChi { beta, .. } => Equation::Plane { beta: *beta },
            FamilySpec::RossbyHaurwitz { omega, .. } | FamilySpec::RossbyHaurwitzSum { omega, .. } => {
                Equation::Sphere { omega: *omega }
            }
            FamilySpec::SphereCase3 { .. } | FamilySpec::SphereZonalWave { .. } => Equation::Sphere { omega: 0.0 },
        }
    }
}

/// How derivatives of ψ are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeSource {
    Analytic,
    Quadrature,
    Ode,
}

/// A constructed family member: ψ with derivatives through third order.
#[derive(Clone)]
pub struct SolutionFamily {
    spec: FamilySpec,
    source: DerivativeSource,
    provenance: &'static str,
    field: SharedField,
}

impl std::fmt::Debug for SolutionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolutionFamily")
            .field("spec", &self.spec)
            .field("source", &self.source)
            .finish()
    }
}

impl SolutionFamily {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        let (field, source, provenance) = match &spec {
            FamilySpec::SphereCase3 { .. } | FamilySpec::SphereZonalWave { .. } => sphere::build(&spec)?,
            FamilySpec::RossbyHaurwitz { .. } | FamilySpec::RossbyHaurwitzSum { .. } => sphere::build(&spec)?,
            _ => plane::build(&spec)?,
        };
        Ok(Self { spec, source, provenance, field })
    }

    /// Parses a JSON descriptor and builds the family.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    /// Partially invariant family with a caller-supplied harmonic Ψ; the
    /// harmonicity is checked on a probe grid.
    pub fn pi_harmonic_with(beta: f64, eta: f64, harmonic: SharedField) -> Result<Self> {
        let field = plane::pi_harmonic_field(beta, eta, harmonic)?;
        Ok(Self {
            spec: FamilySpec::PIHarmonic { beta, eta, harmonic: Vec::new() },
            source: DerivativeSource::Analytic,
            provenance: plane::PI_HARMONIC_PROVENANCE,
            field,
        })
    }

    pub fn id(&self) -> &'static str {
        self.spec.id()
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn equation(&self) -> Equation {
        self.spec.equation()
    }

    pub fn source(&self) -> DerivativeSource {
        self.source
    }

    pub fn provenance(&self) -> &'static str {
        self.provenance
    }

    pub fn field(&self) -> SharedField {
        Arc::clone(&self.field)
    }

    /// `∂^α ψ` at `p` for `|α| ≤ 3`, `α` indexing `(t, s1, s2)`.
    pub fn eval_derivs(&self, p: [f64; 3], alpha: [usize; 3]) -> Result<f64> {
        Ok(self.field.eval_jet(&Jet::point(p))?.derivative(alpha))
    }

    /// Rossby–Haurwitz zonal coefficient `Ω − ac/(c+2)`.
    pub fn zonal_coefficient(&self) -> Option<f64> {
        sphere::rh_parameters(&self.spec).map(|p| p.zonal)
    }

    /// Angular phase speed of wave families (`a − Ω` on the sphere,
    /// `ω/k` on the plane).
    pub fn phase_speed(&self) -> Option<f64> {
        match self.spec {
            FamilySpec::RossbyWave { k, l, beta, .. } if k != 0.0 => Some(-beta / (k * k + l * l)),
            _ => sphere::rh_parameters(&self.spec).map(|p| p.speed),
        }
    }
}

impl StreamFunction for SolutionFamily {
    fn geometry(&self) -> Geometry {
        self.spec.equation().geometry()
    }

    fn eval_jet(&self, p: &[Jet; 3]) -> Result<Jet> {
        self.field.eval_jet(p)
    }
}
