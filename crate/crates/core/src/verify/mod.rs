//! Residuals of the full equations, of the reduced equations and of the
//! Klein–Gordon form, on analytic or finite-difference derivatives.

mod full;
mod grid;
mod kg;
mod reduced;

pub use full::{
    plane_field, residual_plane, residual_plane_convergence, residual_sphere, residual_sphere_convergence, sphere_field,
};
pub use grid::{
    DerivativeMode, FieldSample, GridMeta, PlaneGrid, ReducedGrid, ResidualReport, SphereGrid, kahan_sum, write_csv,
};
pub use kg::{KleinGordon, kg_harmonic};
pub use reduced::{
    ReducedFn, ReductionCase, ReductionParams, lift, lift_factor, reduced_fn, reduced_residual, reduced_residual_at,
    reduction_point,
};

#[cfg(test)]
mod tests;
