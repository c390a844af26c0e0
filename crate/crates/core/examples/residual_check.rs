//! Analytic and finite-difference residuals of a catalogued β-plane family.

use bve_symmetry::solutions::{FamilySpec, SolutionFamily};
use bve_symmetry::verify::{residual_plane, residual_plane_convergence, DerivativeMode, PlaneGrid};

fn main() -> bve_symmetry::Result<()> {
    let family = SolutionFamily::new(FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 2.0, beta: 1.0, phase: 0.0 })?;
    let grid = PlaneGrid::new([0.2, 1.8], 17, [-0.8, 0.8], 17, vec![0.5, 0.75, 1.0])?;
    let field = family.field();

    let analytic = residual_plane(&field, &grid, 1.0, DerivativeMode::Analytic)?;
    println!("{}: analytic max residual {:.2e} over {} points", family.id(), analytic.max_norm, analytic.points);

    let fd = residual_plane_convergence(&field, &grid, 1.0, DerivativeMode::FiniteDifference)?;
    println!("finite differences: max {:.2e}, ratio under halving {:.3}", fd.max_norm, fd.convergence_ratio.unwrap_or(f64::NAN));
    Ok(())
}
