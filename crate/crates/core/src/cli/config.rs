//! JSON inputs of the subcommands. Every struct rejects unknown keys.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FnField, Geometry, SharedField, SumField};
use crate::generators::GeneratorRecord;
use crate::jet::Jet;
use crate::solutions::{Equation, FamilySpec, SolutionFamily};
use crate::timefn::{HalfLine, TimeFunction};
use crate::verify::{kg_harmonic, reduced_fn, DerivativeMode, KleinGordon, PlaneGrid, ReducedFn, ReductionCase, ReductionParams, SphereGrid};

/// `coeff · t^t · s1^x · s2^y`, added to a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: f64,
    #[serde(default)]
    pub t: u32,
    #[serde(default)]
    pub x: u32,
    #[serde(default)]
    pub y: u32,
}

impl Monomial {
    fn eval(&self, p: &[Jet; 3]) -> Jet {
        p[0].powi(self.t as i32) * p[1].powi(self.x as i32) * p[2].powi(self.y as i32) * self.coeff
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedMonomial {
    pub coeff: f64,
    #[serde(default)]
    pub p: u32,
    #[serde(default)]
    pub q: u32,
}

/// A reduced solution `v(p, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReducedSpec {
    Polynomial { terms: Vec<ReducedMonomial> },
    /// `amplitude · sin(kp·p + kq·q + phase)`.
    Harmonic { amplitude: f64, kp: f64, kq: f64, phase: f64 },
    /// Case `P3` only: the Klein–Gordon harmonic mapped back to `v`.
    KgHarmonic {
        k: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        h: TimeFunction,
    },
}

impl ReducedSpec {
    pub fn build(&self, case: ReductionCase, params: &ReductionParams) -> Result<ReducedFn> {
        Ok(match self.clone() {
            ReducedSpec::Polynomial { terms } => reduced_fn(move |p, q| {
                let mut acc = Jet::constant(0.0);
                for term in &terms {
                    acc += p.powi(term.p as i32) * q.powi(term.q as i32) * term.coeff;
                }
                Ok(acc)
            }),
            ReducedSpec::Harmonic { amplitude, kp, kq, phase } => {
                reduced_fn(move |p, q| Ok((*p * kp + *q * kq + phase).sin() * amplitude))
            }
            ReducedSpec::KgHarmonic { k, phase, h } => {
                if case != ReductionCase::P3 {
                    return Err(Error::Config("kg_harmonic reduces case P3 only".into()));
                }
                params.require(case)?;
                let beta = params.beta.expect("checked");
                let kg = KleinGordon::new(beta, params.f.clone().expect("checked"), h)?;
                kg.inverse(kg_harmonic(beta, k, phase)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftedSpec {
    pub case: ReductionCase,
    #[serde(default)]
    pub params: ReductionParams,
    pub reduced: ReducedSpec,
}

/// Grid overrides; unset entries take the defaults of the geometry.
/// On the sphere `n` is `[nλ, nμ]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub x: Option<[f64; 2]>,
    #[serde(default)]
    pub y: Option<[f64; 2]>,
    #[serde(default)]
    pub n: Option<[usize; 2]>,
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub lambda_range: Option<[f64; 2]>,
}

pub const DEFAULT_TIMES: [f64; 3] = [0.5, 0.75, 1.0];

impl GridSpec {
    pub fn plane(&self) -> Result<PlaneGrid> {
        let [nx, ny] = self.n.unwrap_or([17, 17]);
        PlaneGrid::new(
            self.x.unwrap_or([0.2, 1.8]),
            nx,
            self.y.unwrap_or([-0.8, 0.8]),
            ny,
            self.times.clone().unwrap_or_else(|| DEFAULT_TIMES.to_vec()),
        )
    }

    pub fn sphere(&self, omega: f64) -> Result<SphereGrid> {
        let [nl, nm] = self.n.unwrap_or([32, 17]);
        let mut grid = SphereGrid::new(nl, nm, self.times.clone().unwrap_or_else(|| DEFAULT_TIMES.to_vec()), omega)?;
        if let Some(delta) = self.delta {
            grid.delta = delta;
        }
        grid.lambda_range = self.lambda_range;
        grid.validate()?;
        Ok(grid)
    }
}

/// The field a verify, sample or transform run acts on: a catalogued
/// family or a lifted reduced solution, plus optional monomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub lifted: Option<LiftedSpec>,
    /// Required when neither `family` nor `lifted` fixes the equation.
    #[serde(default)]
    pub equation: Option<Equation>,
    #[serde(default)]
    pub add: Vec<Monomial>,
}

/// A built field with the equation it is checked against.
pub struct ResolvedField {
    pub field: SharedField,
    pub equation: Equation,
    pub family: Option<Arc<SolutionFamily>>,
}

impl FieldSpec {
    pub fn resolve(&self) -> Result<ResolvedField> {
        let mut parts: Vec<SharedField> = Vec::new();
        let mut equation = None;
        let mut family_handle = None;
        match (&self.family, &self.lifted) {
            (Some(_), Some(_)) => return Err(Error::Config("give either `family` or `lifted`, not both".into())),
            (Some(spec), None) => {
                let family = Arc::new(SolutionFamily::new(spec.clone())?);
                equation = Some(family.equation());
                parts.push(family.clone());
                family_handle = Some(family);
            }
            (None, Some(lifted)) => {
                lifted.params.require(lifted.case)?;
                let v = lifted.reduced.build(lifted.case, &lifted.params)?;
                parts.push(crate::verify::lift(lifted.case, v, &lifted.params)?);
                equation = Some(match lifted.case.geometry() {
                    Geometry::Plane => Equation::Plane { beta: lifted.params.beta.unwrap_or(0.0) },
                    Geometry::Sphere => Equation::Sphere { omega: 0.0 },
                });
            }
            (None, None) => {}
        }
        let equation = match (equation, self.equation) {
            (Some(found), Some(given)) if found != given => {
                return Err(Error::Config(format!("`equation` {given:?} contradicts the field's {found:?}")))
            }
            (Some(eq), _) | (None, Some(eq)) => eq,
            (None, None) => return Err(Error::Config("no family, lifted solution or equation given".into())),
        };
        if !self.add.is_empty() || parts.is_empty() {
            let terms = self.add.clone();
            parts.push(Arc::new(FnField::new(equation.geometry(), move |p: &[Jet; 3]| {
                let mut acc = Jet::constant(0.0);
                for term in &terms {
                    acc += term.eval(p);
                }
                Ok(acc)
            })));
        }
        let field: SharedField = if parts.len() == 1 { parts.pop().expect("one part") } else { Arc::new(SumField { parts }) };
        Ok(ResolvedField { field, equation, family: family_handle })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub lifted: Option<LiftedSpec>,
    #[serde(default)]
    pub equation: Option<Equation>,
    #[serde(default)]
    pub add: Vec<Monomial>,
    #[serde(default = "analytic")]
    pub mode: DerivativeMode,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Extra analytic checks at this many seeded random points of the grid box.
    #[serde(default)]
    pub random_points: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

macro_rules! field_spec {
    ($($config:ty),*) => {$(
        impl $config {
            pub fn field_spec(&self) -> FieldSpec {
                FieldSpec {
                    family: self.family.clone(),
                    lifted: self.lifted.clone(),
                    equation: self.equation,
                    add: self.add.clone(),
                }
            }
        }
    )*};
}

field_spec!(VerifyConfig, TransformConfig, SampleConfig);

fn analytic() -> DerivativeMode {
    DerivativeMode::Analytic
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub generator: GeneratorRecord,
    /// Half-line on which power-law coefficients live.
    #[serde(default = "positive")]
    pub domain: HalfLine,
}

fn positive() -> HalfLine {
    HalfLine::Positive
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointConfig {
    /// Group element generator `v` in `Ad(e^{εv}) w`.
    pub v: GeneratorRecord,
    pub w: GeneratorRecord,
    pub eps: f64,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default = "default_series_order")]
    pub series_order: usize,
    #[serde(default = "default_oracle_steps")]
    pub oracle_steps: usize,
}

fn default_series_order() -> usize {
    12
}

fn default_oracle_steps() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub lifted: Option<LiftedSpec>,
    #[serde(default)]
    pub equation: Option<Equation>,
    #[serde(default)]
    pub add: Vec<Monomial>,
    pub generator: GeneratorRecord,
    pub eps: f64,
    #[serde(default = "analytic")]
    pub mode: DerivativeMode,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub lifted: Option<LiftedSpec>,
    #[serde(default)]
    pub equation: Option<Equation>,
    #[serde(default)]
    pub add: Vec<Monomial>,
    #[serde(default)]
    pub grid: GridSpec,
}
