//! Adjoint actions and subalgebra classification.

mod adjoint;
mod normalize;
mod subalgebra2d;

pub use adjoint::{adjoint_closed, adjoint_ode_oracle, adjoint_series, AdjointImage};
pub use normalize::{
    normalize_1d, normalize_1d_plane, normalize_1d_sphere, ClassId, ClassificationReport, Witness,
    WitnessStep,
};
pub use subalgebra2d::{
    canonical_2d_catalogue, closure_check_2d, Algebra2d, Closure, Pattern2d, PatternParams,
};
