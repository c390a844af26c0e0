//! Closed-form and quadrature-backed exact solution families.

mod equation;
mod families;
mod legendre;
mod plane;
mod sphere;

pub use equation::{Equation, plane_residual, residual_from_jet, sphere_residual};
pub use families::{DerivativeSource, FamilySpec, HarmonicTerm, RhMember, SinCubedBranch, SolutionFamily};
pub use legendre::{legendre_jet, legendre_p};
pub use sphere::ZonalProfile;

#[cfg(test)]
mod tests;
