//! A reduced solution lifted back to the full equation.

use bve_symmetry::jet::Jet;
use bve_symmetry::solutions::legendre_jet;
use bve_symmetry::verify::{
    lift, reduced_fn, reduced_residual, residual_sphere, DerivativeMode, ReducedGrid, ReductionCase, ReductionParams,
    SphereGrid,
};

fn main() -> bve_symmetry::Result<()> {
    // Travelling waves ψ = v(λ − at, μ) reduce the sphere equation to an
    // equation for v; a Legendre mode plus the matching zonal flow solves it.
    let (n, m, a) = (3u32, 2i32, 0.35);
    let c = -((n * (n + 1)) as f64);
    let zonal = -a * c / (c + 2.0);
    let params = ReductionParams { a: Some(a), ..Default::default() };
    let v = reduced_fn(move |p: &Jet, q: &Jet| Ok(legendre_jet(n, m, q)? * (*p * m as f64).cos() + *q * zonal));

    let reduced = reduced_residual(ReductionCase::S2, &v, &params, &ReducedGrid::new([0.0, 6.0], 25, [-0.9, 0.9], 19)?)?;
    let psi = lift(ReductionCase::S2, v, &params)?;
    let full = residual_sphere(&psi, &SphereGrid::new(32, 17, vec![0.0, 0.5, 1.0], 0.0)?, DerivativeMode::Analytic)?;
    println!("reduced residual {:.1e}, lifted residual {:.1e}", reduced.max_norm, full.max_norm);
    Ok(())
}
