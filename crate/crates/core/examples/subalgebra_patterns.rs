//! Closure of the canonical two-dimensional subalgebras.

use bve_symmetry::classify::{canonical_2d_catalogue, closure_check_2d, Algebra2d, PatternParams};

fn main() -> bve_symmetry::Result<()> {
    for algebra in [Algebra2d::BetaPlane, Algebra2d::Sphere] {
        println!("{algebra:?}");
        for pattern in canonical_2d_catalogue(algebra) {
            let (v1, v2) = pattern.instantiate(&PatternParams::default());
            let closure = closure_check_2d(&v1, &v2)?;
            let [c1, c2] = closure.coefficients;
            println!("  {:<28} closed {} [v1, v2] = {c1:+.3}·v1 {c2:+.3}·v2", pattern.notation, closure.closed);
            if let Some(note) = pattern.note {
                println!("    note: {note}");
            }
        }
    }
    Ok(())
}
