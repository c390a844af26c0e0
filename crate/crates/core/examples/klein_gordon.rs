//! Klein–Gordon harmonics turned into β-plane solutions.

use bve_symmetry::timefn::TimeFunction;
use bve_symmetry::verify::{
    kg_harmonic, lift, residual_plane, DerivativeMode, KleinGordon, PlaneGrid, ReductionCase, ReductionParams,
};

fn main() -> bve_symmetry::Result<()> {
    let beta = 1.0;
    let grid = PlaneGrid::new([0.2, 1.8], 17, [-0.8, 0.8], 17, vec![0.5, 0.75, 1.0])?;
    for (name, f) in [("0", TimeFunction::zero()), ("1", TimeFunction::constant(1.0)), ("t", TimeFunction::monomial(1.0, 1))] {
        let kg = KleinGordon::new(beta, f.clone(), TimeFunction::zero())?;
        let v = kg.inverse(kg_harmonic(beta, 1.5, 0.2)?);
        let params = ReductionParams { beta: Some(beta), f: Some(f), ..Default::default() };
        let psi = lift(ReductionCase::P3, v, &params)?;
        let residual = residual_plane(&psi, &grid, beta, DerivativeMode::Analytic)?;
        println!("f = {name}: q̃(1) = {:.6}, lifted residual {:.1e}", kg.q_tilde(1.0)?, residual.max_norm);
    }
    Ok(())
}
