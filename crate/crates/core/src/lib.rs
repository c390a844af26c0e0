//! Symmetry analysis toolkit for the barotropic vorticity equation on the
//! β-plane, the f-plane and the rotating sphere.

pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod generators;
pub mod jet;
pub mod ode;
pub mod quadrature;
pub mod simulate;
pub mod solutions;
pub mod timefn;
pub mod verify;

pub use error::{Error, Result};
