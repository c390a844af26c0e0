//! Rossby–Haurwitz waves on the rotating sphere and their rest-frame image.

use std::sync::Arc;

use bve_symmetry::field::SharedField;
use bve_symmetry::generators::{frame_transform, FrameDirection};
use bve_symmetry::solutions::{FamilySpec, SolutionFamily};
use bve_symmetry::verify::{residual_sphere, DerivativeMode, SphereGrid};

fn main() -> bve_symmetry::Result<()> {
    let omega = 1.0;
    for n in 1..=4u32 {
        let wave = SolutionFamily::new(FamilySpec::RossbyHaurwitz { omega, amplitude: 1.0, n, m: 1, a: None, phase: 0.0 })?;
        let grid = SphereGrid::new(32, 17, vec![0.0, 0.5, 1.0], omega)?;
        let residual = residual_sphere(&wave.field(), &grid, DerivativeMode::Analytic)?;
        println!(
            "n = {n}: phase speed {:+.6} (−2Ω/n(n+1) = {:+.6}), residual {:.1e}",
            wave.phase_speed().unwrap_or(f64::NAN),
            -2.0 * omega / (n * (n + 1)) as f64,
            residual.max_norm
        );
    }

    // The same wave seen from the non-rotating frame solves the Ω = 0 equation.
    let wave = SolutionFamily::new(FamilySpec::RossbyHaurwitz { omega, amplitude: 1.0, n: 3, m: 2, a: None, phase: 0.0 })?;
    let rest: SharedField = Arc::new(frame_transform(wave.field(), omega, FrameDirection::ToRest));
    let grid = SphereGrid::new(32, 17, vec![0.0, 0.5, 1.0], 0.0)?;
    println!("rest frame residual {:.1e}", residual_sphere(&rest, &grid, DerivativeMode::Analytic)?.max_norm);
    Ok(())
}
