use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::Geometry;
use crate::jet::Jet;

/// The governing equation a field is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "lowercase", deny_unknown_fields)]
pub enum Equation {
    /// `ζ_t + J(ψ, ζ) + βψ_x = 0`; `β = 0` is the f-plane.
    Plane { beta: f64 },
    /// The unit sphere in a frame rotating with angular velocity `omega`.
    Sphere { omega: f64 },
}

impl Equation {
    pub fn geometry(&self) -> Geometry {
        match self {
            Equation::Plane { .. } => Geometry::Plane,
            Equation::Sphere { .. } => Geometry::Sphere,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::Plane { beta } => write!(f, "plane(beta={beta})"),
            Equation::Sphere { omega } => write!(f, "sphere(omega={omega})"),
        }
    }
}

/// Pointwise residual of the vorticity equation from a third-order jet of ψ
/// in `(t, s1, s2)` taken at `point`.
pub fn residual_from_jet(eq: &Equation, point: [f64; 3], psi: &Jet) -> f64 {
    match *eq {
        Equation::Plane { beta } => plane_residual(psi, beta),
        Equation::Sphere { omega } => sphere_residual(psi, point[2], omega, 1.0),
    }
}

/// `ζ_t + ψ_x ζ_y − ψ_y ζ_x + βψ_x`.
pub fn plane_residual(psi: &Jet, beta: f64) -> f64 {
    let d = |a: usize, b: usize, c: usize| psi.derivative([a, b, c]);
    let zeta_t = d(1, 2, 0) + d(1, 0, 2);
    let zeta_x = d(0, 3, 0) + d(0, 1, 2);
    let zeta_y = d(0, 2, 1) + d(0, 0, 3);
    zeta_t + d(0, 1, 0) * zeta_y - d(0, 0, 1) * zeta_x + beta * d(0, 1, 0)
}

/// `ζ_t + R⁻²(ψ_λ ζ_μ − ψ_μ ζ_λ) + 2ΩR⁻²ψ_λ` with `ζ = R⁻² Δ_S ψ`.
pub fn sphere_residual(psi: &Jet, mu: f64, omega: f64, radius: f64) -> f64 {
    let d = |a: usize, b: usize, c: usize| psi.derivative([a, b, c]);
    let w = 1.0 - mu * mu;
    let r2 = radius * radius;
    let zeta_t = d(1, 2, 0) / w + w * d(1, 0, 2) - 2.0 * mu * d(1, 0, 1);
    let zeta_l = d(0, 3, 0) / w + w * d(0, 1, 2) - 2.0 * mu * d(0, 1, 1);
    let zeta_m = d(0, 2, 1) / w + 2.0 * mu * d(0, 2, 0) / (w * w) + w * d(0, 0, 3) - 4.0 * mu * d(0, 0, 2) - 2.0 * d(0, 0, 1);
    (zeta_t + (d(0, 1, 0) * zeta_m - d(0, 0, 1) * zeta_l) / r2 + 2.0 * omega * d(0, 1, 0)) / r2
}
