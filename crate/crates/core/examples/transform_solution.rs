//! Symmetry flows map solutions to solutions.

use std::sync::Arc;

use bve_symmetry::field::SharedField;
use bve_symmetry::generators::{flow, Generator, PlaneFlavor, PlaneGenerator};
use bve_symmetry::solutions::{FamilySpec, SolutionFamily};
use bve_symmetry::timefn::TimeFunction;
use bve_symmetry::verify::{residual_plane, DerivativeMode, PlaneGrid};

fn main() -> bve_symmetry::Result<()> {
    let beta = 1.0;
    let wave = SolutionFamily::new(FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 2.0, beta, phase: 0.0 })?;
    let grid = PlaneGrid::new([0.2, 1.8], 17, [-0.8, 0.8], 17, vec![0.5, 0.75, 1.0])?;
    let bp = PlaneFlavor::BetaPlane;
    let generators = [
        Generator::Plane(PlaneGenerator::beta_d()),
        Generator::Plane(PlaneGenerator::dy(bp)),
        Generator::Plane(PlaneGenerator::x(bp, TimeFunction::sine(1.0, 2.0))),
    ];
    for v in generators {
        let map = flow(&v, 0.7)?;
        let image: SharedField = Arc::new(map.pushforward(wave.field()));
        let residual = residual_plane(&image, &grid, beta, DerivativeMode::Analytic)?;
        println!("exp(0.7·[{v}]): residual of the image {:.1e}", residual.max_norm);
    }
    Ok(())
}
