//! Two-dimensional subalgebras: closure test and the canonical lists.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::generators::{Frame, Generator, PlaneFlavor, PlaneGenerator, SphereGenerator};
use crate::timefn::{sample_times, HalfLine, TimeFunction};

const CLOSURE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub closed: bool,
    /// `[v1, v2] ≈ c1·v1 + c2·v2` (least-squares coefficients).
    pub coefficients: [f64; 2],
    /// Scaled least-squares residual.
    pub residual: f64,
}

fn domain(gens: &[&Generator]) -> Result<Option<HalfLine>> {
    let mut out = None;
    for g in gens {
        let (_, funcs) = g.parts();
        for f in funcs {
            if let Some(d) = f.domain()? {
                if out.is_some_and(|o| o != d) {
                    return Err(Error::Domain("generators live on opposite half-lines".into()));
                }
                out = Some(d);
            }
        }
    }
    Ok(out)
}

/// Scalar coefficients followed by function samples.
fn features(g: &Generator, times: &[f64]) -> Result<Vec<f64>> {
    let (mut out, funcs) = g.parts();
    for f in funcs {
        for &t in times {
            out.push(f.eval(t)?);
        }
    }
    Ok(out)
}

/// Decides whether `[v1, v2]` lies in `span{v1, v2}`.
pub fn closure_check_2d(v1: &Generator, v2: &Generator) -> Result<Closure> {
    let bracket = v1.commutator(v2)?;
    let times = sample_times(domain(&[v1, v2, &bracket])?);
    let a1 = features(v1, &times)?;
    let a2 = features(v2, &times)?;
    let target = features(&bracket, &times)?;
    let n = a1.len();
    let matrix = DMatrix::from_fn(n, 2, |i, j| if j == 0 { a1[i] } else { a2[i] });
    let svd = matrix.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if smax == 0.0 || smin <= 1e-9 * smax {
        return Err(Error::Dependent);
    }
    let rhs = DVector::from_vec(target.clone());
    let x = svd
        .solve(&rhs, 1e-14 * smax)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let fitted = &matrix * &x;
    let scale = a1
        .iter()
        .chain(&a2)
        .chain(&target)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let residual = (fitted - rhs).amax() / scale;
    Ok(Closure {
        closed: residual <= CLOSURE_TOL,
        coefficients: [x[0], x[1]],
        residual,
    })
}

/// Free constants and function slots of a pattern.
#[derive(Clone, Debug)]
pub struct PatternParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub f1: TimeFunction,
    pub g1: TimeFunction,
    pub f2: TimeFunction,
    pub g2: TimeFunction,
}

impl Default for PatternParams {
    fn default() -> Self {
        Self {
            a: 0.7,
            b: 1.3,
            c: 1.0,
            f1: TimeFunction::polynomial(&[0.5, 1.0]),
            g1: TimeFunction::cosine(1.0, 2.0, 0.3),
            f2: TimeFunction::exponential(1.0, -0.4),
            g2: TimeFunction::polynomial(&[0.0, 0.0, 1.5]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra2d {
    BetaPlane,
    Sphere,
}

pub struct Pattern2d {
    pub notation: &'static str,
    /// Domain restrictions, or why the pattern replaces an unclosed variant.
    pub note: Option<&'static str>,
    build: fn(&PatternParams) -> (Generator, Generator),
}

impl Pattern2d {
    pub fn instantiate(&self, params: &PatternParams) -> (Generator, Generator) {
        (self.build)(params)
    }
}

const BP: PlaneFlavor = PlaneFlavor::BetaPlane;
const REST: Frame = Frame::Rest;

fn p(g: PlaneGenerator) -> Generator {
    Generator::Plane(g)
}

fn s(g: SphereGenerator) -> Generator {
    Generator::Sphere(g)
}

fn sum_p(a: PlaneGenerator, b: PlaneGenerator) -> PlaneGenerator {
    a.add(&b).expect("same flavor")
}

fn sum_s(a: SphereGenerator, b: SphereGenerator) -> SphereGenerator {
    a.add(&b).expect("same frame")
}

fn abs_pow(c: f64, alpha: f64) -> TimeFunction {
    TimeFunction::power(c, alpha, HalfLine::Positive)
}

fn plane_patterns() -> Vec<Pattern2d> {
    vec![
        Pattern2d {
            notation: "⟨D, ∂t⟩",
            note: None,
            build: |_| (p(PlaneGenerator::beta_d()), p(PlaneGenerator::dt(BP))),
        },
        Pattern2d {
            notation: "⟨D, ∂y + a·X(1)⟩",
            note: None,
            build: |q| {
                let x = PlaneGenerator::x(BP, TimeFunction::constant(q.a));
                (p(PlaneGenerator::beta_d()), p(sum_p(PlaneGenerator::dy(BP), x)))
            },
        },
        Pattern2d {
            notation: "⟨D, X(|t|^a) + c·Z(|t|^(a−2))⟩",
            note: Some("on t > 0"),
            build: |q| {
                let w = PlaneGenerator {
                    g: abs_pow(q.c, q.a - 2.0),
                    ..PlaneGenerator::x(BP, abs_pow(1.0, q.a))
                };
                (p(PlaneGenerator::beta_d()), p(w))
            },
        },
        Pattern2d {
            notation: "⟨D, Z(|t|^(a−2))⟩",
            note: Some("on t > 0"),
            build: |q| {
                (
                    p(PlaneGenerator::beta_d()),
                    p(PlaneGenerator::z(BP, abs_pow(1.0, q.a - 2.0))),
                )
            },
        },
        Pattern2d {
            notation: "⟨∂t + b·∂y, X(e^(at)) + Z((abt + c)e^(at))⟩",
            note: None,
            build: |q| {
                let v1 = sum_p(PlaneGenerator::dt(BP), PlaneGenerator::dy(BP).scale(q.b));
                let g = TimeFunction::exp_poly_trig(q.a * q.b, 1, q.a, 0.0, 0.0)
                    .add(&TimeFunction::exponential(q.c, q.a));
                let v2 = PlaneGenerator { g, ..PlaneGenerator::x(BP, TimeFunction::exponential(1.0, q.a)) };
                (p(v1), p(v2))
            },
        },
        Pattern2d {
            notation: "⟨∂t + b·∂y, Z(e^(at))⟩",
            note: Some(
                "⟨∂t + b∂y, Z((abt + c)e^(at))⟩ is not closed for ab ≠ 0; \
                 the closed pattern drops the abt term",
            ),
            build: |q| {
                let v1 = sum_p(PlaneGenerator::dt(BP), PlaneGenerator::dy(BP).scale(q.b));
                (p(v1), p(PlaneGenerator::z(BP, TimeFunction::exponential(1.0, q.a))))
            },
        },
        Pattern2d {
            notation: "⟨∂y + X(f1), X(1) + Z(g2)⟩",
            note: None,
            build: |q| {
                let v1 = sum_p(PlaneGenerator::dy(BP), PlaneGenerator::x(BP, q.f1.clone()));
                let v2 = PlaneGenerator { g: q.g2.clone(), ..PlaneGenerator::x(BP, TimeFunction::constant(1.0)) };
                (p(v1), p(v2))
            },
        },
        Pattern2d {
            notation: "⟨∂y + X(f1), Z(g2)⟩",
            note: None,
            build: |q| {
                let v1 = sum_p(PlaneGenerator::dy(BP), PlaneGenerator::x(BP, q.f1.clone()));
                (p(v1), p(PlaneGenerator::z(BP, q.g2.clone())))
            },
        },
        Pattern2d {
            notation: "⟨X(f1) + Z(g1), X(f2) + Z(g2)⟩",
            note: Some("(f1, g1) and (f2, g2) linearly independent"),
            build: |q| {
                let v1 = PlaneGenerator { g: q.g1.clone(), ..PlaneGenerator::x(BP, q.f1.clone()) };
                let v2 = PlaneGenerator { g: q.g2.clone(), ..PlaneGenerator::x(BP, q.f2.clone()) };
                (p(v1), p(v2))
            },
        },
    ]
}

fn sphere_patterns() -> Vec<Pattern2d> {
    vec![
        Pattern2d {
            notation: "⟨D + a·J1, ∂t⟩",
            note: None,
            build: |q| {
                let v1 = sum_s(SphereGenerator::d(REST), SphereGenerator::j(REST, 1).scale(q.a));
                (s(v1), s(SphereGenerator::dt(REST)))
            },
        },
        Pattern2d {
            notation: "⟨D, J1 + Z(a/t)⟩",
            note: Some("on t > 0"),
            build: |q| {
                let v2 = SphereGenerator { g: abs_pow(q.a, -1.0), ..SphereGenerator::j(REST, 1) };
                (s(SphereGenerator::d(REST)), s(v2))
            },
        },
        Pattern2d {
            notation: "⟨D + a·J1, Z(|t|^b)⟩",
            note: Some("on t > 0"),
            build: |q| {
                let v1 = sum_s(SphereGenerator::d(REST), SphereGenerator::j(REST, 1).scale(q.a));
                (s(v1), s(SphereGenerator::z(REST, abs_pow(1.0, q.b))))
            },
        },
        Pattern2d {
            notation: "⟨∂t, J1 + Z(c)⟩",
            note: Some("c ∈ {−1, 0, 1}"),
            build: |q| {
                let v2 = SphereGenerator { g: TimeFunction::constant(q.c), ..SphereGenerator::j(REST, 1) };
                (s(SphereGenerator::dt(REST)), s(v2))
            },
        },
        Pattern2d {
            notation: "⟨∂t + c·J1, Z(e^(c̃t))⟩",
            note: Some("c ∈ {−1, 0, 1}; the exponent uses b"),
            build: |q| {
                let v1 = sum_s(SphereGenerator::dt(REST), SphereGenerator::j(REST, 1).scale(q.c));
                (s(v1), s(SphereGenerator::z(REST, TimeFunction::exponential(1.0, q.b))))
            },
        },
        Pattern2d {
            notation: "⟨J1 + Z(g1), Z(g2)⟩",
            note: None,
            build: |q| {
                let v1 = SphereGenerator { g: q.g1.clone(), ..SphereGenerator::j(REST, 1) };
                (s(v1), s(SphereGenerator::z(REST, q.g2.clone())))
            },
        },
        Pattern2d {
            notation: "⟨Z(g1), Z(g2)⟩",
            note: Some("g1, g2 linearly independent"),
            build: |q| {
                (
                    s(SphereGenerator::z(REST, q.g1.clone())),
                    s(SphereGenerator::z(REST, q.g2.clone())),
                )
            },
        },
    ]
}

pub fn canonical_2d_catalogue(algebra: Algebra2d) -> Vec<Pattern2d> {
    match algebra {
        Algebra2d::BetaPlane => plane_patterns(),
        Algebra2d::Sphere => sphere_patterns(),
    }
}
