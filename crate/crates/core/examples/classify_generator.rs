//! Normal forms of one-dimensional subalgebras with a replayable witness.

use bve_symmetry::classify::{normalize_1d, WitnessStep};
use bve_symmetry::generators::{Frame, Generator, PlaneFlavor, PlaneGenerator, SphereGenerator};
use bve_symmetry::timefn::{HalfLine, TimeFunction};

fn main() -> bve_symmetry::Result<()> {
    let bp = PlaneFlavor::BetaPlane;
    let plane = Generator::Plane(PlaneGenerator {
        a_d1: 2.0,
        a_d2: -2.0,
        a_t: 3.0,
        f: TimeFunction::polynomial(&[1.0, -0.5]),
        ..PlaneGenerator::zero(bp)
    });
    let sphere = Generator::Sphere(SphereGenerator { rot: [0.3, 1.0, -0.4], ..SphereGenerator::zero(Frame::Rest) });

    for v in [plane, sphere] {
        let report = normalize_1d(&v, HalfLine::Positive)?;
        println!("{v}\n  class {} representative {}", report.class, report.representative);
        for step in &report.witness.steps {
            match step {
                WitnessStep::Adjoint { element, eps } => println!("  Ad(exp({eps:.6}·[{element}]))"),
                WitnessStep::Reflection => println!("  y-reflection"),
            }
        }
        println!("  scale {:.6}, replay residual {:.1e}", report.witness.scale, report.residual);
    }
    Ok(())
}
