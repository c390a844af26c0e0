use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{DerivativeMode, GridMeta, ReducedGrid, ResidualReport};
use crate::error::{Error, Result};
use crate::field::{FnField, Geometry, SharedField};
use crate::jet::Jet;
use crate::timefn::TimeFunction;

/// Group-invariant reductions: one-dimensional subalgebras (`P1`–`P4`,
/// `S1`–`S3`) and the two-dimensional ones (`P2D`, `S2D`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionCase {
    P1,
    P2,
    P3,
    P4,
    P2D,
    S1,
    S2,
    S3,
    S2D,
}

impl ReductionCase {
    pub const ALL: [ReductionCase; 9] = [
        ReductionCase::P1,
        ReductionCase::P2,
        ReductionCase::P3,
        ReductionCase::P4,
        ReductionCase::P2D,
        ReductionCase::S1,
        ReductionCase::S2,
        ReductionCase::S3,
        ReductionCase::S2D,
    ];

    pub fn geometry(self) -> Geometry {
        match self {
            ReductionCase::P1 | ReductionCase::P2 | ReductionCase::P3 | ReductionCase::P4 | ReductionCase::P2D => {
                Geometry::Plane
            }
            _ => Geometry::Sphere,
        }
    }

    /// Whether the reduced function depends on one variable only.
    pub fn is_ode(self) -> bool {
        matches!(self, ReductionCase::P2D | ReductionCase::S2D)
    }
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ReductionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionCase::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown reduction case `{s}`")))
    }
}

/// Parameters of the reductions; each case reads only the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionParams {
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub f: Option<TimeFunction>,
    #[serde(default)]
    pub g: Option<TimeFunction>,
}

impl ReductionParams {
    fn real(&self, value: Option<f64>, name: &str, case: ReductionCase) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidParameter(format!("case {case} needs parameter `{name}`")))
    }

    fn func<'a>(&self, value: &'a Option<TimeFunction>, name: &str, case: ReductionCase) -> Result<&'a TimeFunction> {
        value
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter(format!("case {case} needs parameter `{name}`")))
    }

    /// Checks that every parameter `case` uses is present.
    pub fn require(&self, case: ReductionCase) -> Result<()> {
        use ReductionCase::*;
        match case {
            P1 | P2D => self.real(self.beta, "beta", case).map(drop),
            P2 => self.real(self.beta, "beta", case).and(self.real(self.c, "c", case)).map(drop),
            P3 => self.real(self.beta, "beta", case).and(self.func(&self.f, "f", case).map(drop)),
            P4 => self
                .real(self.beta, "beta", case)
                .and(self.func(&self.f, "f", case).map(drop))
                .and(self.func(&self.g, "g", case).map(drop)),
            S1 | S2 => self.real(self.a, "a", case).map(drop),
            S3 => self.func(&self.g, "g", case).map(drop),
            S2D => self.real(self.b, "b", case).map(drop),
        }
    }
}

/// A reduced solution `v(p, q)` evaluated on jets.
pub type ReducedFn = Arc<dyn Fn(&Jet, &Jet) -> Result<Jet> + Send + Sync>;

pub fn reduced_fn<F>(func: F) -> ReducedFn
where
    F: Fn(&Jet, &Jet) -> Result<Jet> + Send + Sync + 'static,
{
    Arc::new(func)
}

/// Residual of the reduced equation of `case` at `(p, q)`.
pub fn reduced_residual_at(case: ReductionCase, v: &ReducedFn, params: &ReductionParams, pq: [f64; 2]) -> Result<f64> {
    use ReductionCase::*;
    params.require(case)?;
    let [p, q] = pq;
    let jet = v(&Jet::var(p, 1), &Jet::var(q, 2))?;
    let d = |a: usize, b: usize| jet.derivative([0, a, b]);
    let beta = params.beta.unwrap_or(0.0);
    Ok(match case {
        P1 | P2 => {
            let w = d(2, 0) + d(0, 2);
            let wp = d(3, 0) + d(1, 2);
            let wq = d(2, 1) + d(0, 3);
            let jac = d(1, 0) * wq - d(0, 1) * wp + beta * d(1, 0);
            if case == P1 {
                -w + p * wp + q * wq + jac
            } else {
                -params.c.unwrap_or(0.0) * wq + jac
            }
        }
        P3 => {
            let [f, df, ddf, _] = params.f.as_ref().expect("checked").derivs3(q)?;
            (1.0 + f * f) * d(2, 1) + 2.0 * f * df * d(2, 0) + beta * d(1, 0) - ddf
        }
        P4 => {
            let [f, df, _, _] = params.f.as_ref().expect("checked").derivs3(q)?;
            if f == 0.0 {
                return Err(Error::Domain(format!("f vanishes at q = {q}")));
            }
            let g = params.g.as_ref().expect("checked").eval(q)?;
            let drift = g / f - df / f * p;
            d(2, 1) + drift * d(3, 0) + beta * drift
        }
        P2D => {
            let (v, v1, v2, v3) = (d(0, 0), d(1, 0), d(2, 0), d(3, 0));
            let w = v2 + 9.0 * v;
            v * (v3 + 9.0 * v1 + beta * p.cos()) - v1 * (w + beta * p.sin()) / 3.0
        }
        S1 | S2 => {
            let s = 1.0 - q * q;
            let w = d(2, 0) / s + s * d(0, 2) - 2.0 * q * d(0, 1);
            let wp = d(3, 0) / s + s * d(1, 2) - 2.0 * q * d(1, 1);
            let wq = d(2, 1) / s + 2.0 * q * d(2, 0) / (s * s) + s * d(0, 3) - 4.0 * q * d(0, 2) - 2.0 * d(0, 1);
            let a = params.a.unwrap_or(0.0);
            if case == S1 {
                w + a * wp - d(1, 0) * wq + d(0, 1) * wp
            } else {
                -(a + d(0, 1)) * wp + d(1, 0) * wq
            }
        }
        S3 => {
            let s = 1.0 - q * q;
            let wp = s * d(1, 2) - 2.0 * q * d(1, 1);
            let wq = s * d(0, 3) - 4.0 * q * d(0, 2) - 2.0 * d(0, 1);
            wp + params.g.as_ref().expect("checked").eval(p)? * wq
        }
        S2D => {
            let s = 1.0 - p * p;
            let k = params.b.unwrap_or(0.0).powi(2);
            let (v, v1, v2, v3) = (d(0, 0), d(1, 0), d(2, 0), d(3, 0));
            let w = k * v / s + s * v2 - 2.0 * p * v1;
            let w1 = k * v1 / s + 2.0 * k * p * v / (s * s) + s * v3 - 4.0 * p * v2 - 2.0 * v1;
            v * w1 - v1 * w
        }
    })
}

/// Reduced residual norms over a `(p, q)` grid (analytic derivatives).
pub fn reduced_residual(
    case: ReductionCase,
    v: &ReducedFn,
    params: &ReductionParams,
    grid: &ReducedGrid,
) -> Result<ResidualReport> {
    params.require(case)?;
    let values: Vec<Result<f64>> =
        grid.points().into_par_iter().map(|pq| reduced_residual_at(case, v, params, pq)).collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    ResidualReport::from_residuals(&values, GridMeta::Reduced(grid.clone()), DerivativeMode::Analytic)
}

fn time_positive(t: f64, case: ReductionCase) -> Result<()> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("case {case} is lifted on t > 0, got t = {t}")));
    }
    Ok(())
}

/// Reduced coordinates `(p, q)` of a full-space point.
pub fn reduction_point(case: ReductionCase, params: &ReductionParams, point: [f64; 3]) -> Result<[f64; 2]> {
    let jets = Jet::point(point);
    let (p, q) = reduced_coordinates(case, params, &jets)?;
    Ok([p.value(), q.value()])
}

fn reduced_coordinates(case: ReductionCase, params: &ReductionParams, x: &[Jet; 3]) -> Result<(Jet, Jet)> {
    use ReductionCase::*;
    let (t, s1, s2) = (x[0], x[1], x[2]);
    Ok(match case {
        P1 => {
            time_positive(t.value(), case)?;
            (t * s1, t * s2)
        }
        P2 => (s1, s2 - t * params.c.unwrap_or(0.0)),
        P3 => (s1 - params.f.as_ref().expect("checked").jet(&t)? * s2, t),
        P4 => (s2, t),
        P2D => {
            if s1.value() == 0.0 && s2.value() == 0.0 {
                return Err(Error::Domain("polar reduction is singular at the origin".into()));
            }
            (Jet::atan2(&s2, &s1), Jet::constant(0.0))
        }
        S1 => {
            time_positive(t.value(), case)?;
            (s1 - t.ln() * params.a.unwrap_or(0.0), s2)
        }
        S2 => (s1 - t * params.a.unwrap_or(0.0), s2),
        S3 => (t, s2),
        S2D => (s2, Jet::constant(0.0)),
    })
}

/// The ansatz of `case`: a full-space stream function built from `v`.
pub fn lift(case: ReductionCase, v: ReducedFn, params: &ReductionParams) -> Result<SharedField> {
    use ReductionCase::*;
    params.require(case)?;
    let params = params.clone();
    let geometry = case.geometry();
    let (f, g) = (params.f.clone().unwrap_or_default(), params.g.clone().unwrap_or_default());
    let df = f.derivative();
    Ok(Arc::new(FnField::new(geometry, move |x: &[Jet; 3]| {
        let (t, s1, s2) = (x[0], x[1], x[2]);
        let (p, q) = reduced_coordinates(case, &params, x)?;
        let value = v(&p, &q)?;
        Ok(match case {
            P1 => value * t.powi(-3),
            P2 | S2 => value,
            P3 => value - df.jet(&t)? * s2 * s2 * 0.5,
            P4 => {
                let fj = f.jet(&t)?;
                if fj.value() == 0.0 {
                    return Err(Error::Domain(format!("f vanishes at t = {}", t.value())));
                }
                value - df.jet(&t)? / fj * s1 * s2 + g.jet(&t)? / fj * s1
            }
            P2D => value * (s1 * s1 + s2 * s2).powf(1.5),
            S1 => value / t,
            S3 => value + g.jet(&t)? * s1,
            S2D => value * (s1 * params.b.unwrap_or(0.0)).exp(),
        })
    })))
}

/// `residual(lift v) / reduced_residual(v)` at a full-space point; the two
/// residuals are proportional with this factor for every smooth `v`.
pub fn lift_factor(case: ReductionCase, params: &ReductionParams, point: [f64; 3]) -> f64 {
    use ReductionCase::*;
    let [t, s1, s2] = point;
    match case {
        P1 => t.powi(-2),
        S1 => -t.powi(-2),
        P2D => 3.0 * (s1 * s1 + s2 * s2),
        S2D => {
            let b = params.b.unwrap_or(0.0);
            b * (2.0 * b * s1).exp()
        }
        _ => 1.0,
    }
}
