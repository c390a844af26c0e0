//! Doubly periodic β-plane run started from a Rossby wave.

use std::f64::consts::TAU;

use bve_symmetry::simulate::{run, SimConfig};
use bve_symmetry::solutions::FamilySpec;

fn main() -> bve_symmetry::Result<()> {
    let config = SimConfig {
        lx: TAU,
        ly: TAU,
        nx: 64,
        ny: 64,
        beta: 1.0,
        dt: 0.04,
        steps: 250,
        init: FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 1.0, beta: 1.0, phase: 0.0 },
        snapshot_every: 10,
        write_snapshots: false,
    };
    let result = run(&config)?;
    let (first, last) = (result.diagnostics[0], result.diagnostics[result.diagnostics.len() - 1]);
    println!("phase speed {:.6}, expected {:.6}", result.phase_speed.unwrap_or(f64::NAN), result.expected_phase_speed.unwrap_or(f64::NAN));
    println!("energy drift {:.1e}, enstrophy drift {:.1e}", (last.energy - first.energy) / first.energy, (last.enstrophy - first.enstrophy) / first.enstrophy);
    println!("max CFL {:.3}, final L2 error {:.2e}", result.max_cfl, result.final_relative_error);
    Ok(())
}
