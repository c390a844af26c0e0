//! Stream functions as jet-evaluable maps of `(t, s1, s2)`.
//!
//! On the plane `(s1, s2) = (x, y)`; on the sphere `(s1, s2) = (λ, μ)` with
//! `μ = sin(latitude)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Plane,
    Sphere,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::Plane => write!(f, "plane"),
            Geometry::Sphere => write!(f, "sphere"),
        }
    }
}

pub trait StreamFunction: Send + Sync {
    fn geometry(&self) -> Geometry;

    /// Value with all mixed partials through third order.
    fn eval_jet(&self, p: &[Jet; 3]) -> Result<Jet>;

    fn eval(&self, p: [f64; 3]) -> Result<f64> {
        Ok(self.eval_jet(&Jet::point(p))?.value())
    }
}

pub type SharedField = Arc<dyn StreamFunction>;

impl StreamFunction for SharedField {
    fn geometry(&self) -> Geometry {
        (**self).geometry()
    }

    fn eval_jet(&self, p: &[Jet; 3]) -> Result<Jet> {
        (**self).eval_jet(p)
    }
}

/// Wraps a closure over jets.
pub struct FnField<F> {
    geometry: Geometry,
    func: F,
}

impl<F> FnField<F>
where
    F: Fn(&[Jet; 3]) -> Result<Jet> + Send + Sync,
{
    pub fn new(geometry: Geometry, func: F) -> Self {
        Self { geometry, func }
    }
}

impl<F> StreamFunction for FnField<F>
where
    F: Fn(&[Jet; 3]) -> Result<Jet> + Send + Sync,
{
    fn geometry(&self) -> Geometry {
        self.geometry
    }

    fn eval_jet(&self, p: &[Jet; 3]) -> Result<Jet> {
        (self.func)(p)
    }
}

/// Pointwise sum `a + b`, used for perturbed fields and superpositions.
pub struct SumField {
    pub parts: Vec<SharedField>,
}

impl StreamFunction for SumField {
    fn geometry(&self) -> Geometry {
        self.parts
            .first()
            .map(|p| p.geometry())
            .unwrap_or(Geometry::Plane)
    }

    fn eval_jet(&self, p: &[Jet; 3]) -> Result<Jet> {
        let mut acc = Jet::constant(0.0);
        for part in &self.parts {
            acc += part.eval_jet(p)?;
        }
        Ok(acc)
    }
}
