//! `Ad(e^{εv}) w` three ways: closed form, truncated Lie series, ODE.

use bve_symmetry::classify::{adjoint_closed, adjoint_ode_oracle, adjoint_series};
use bve_symmetry::generators::{Frame, Generator, PlaneFlavor, PlaneGenerator, SphereGenerator};
use bve_symmetry::timefn::{sample_times, TimeFunction};

fn show(v: &Generator, eps: f64, w: &Generator) -> bve_symmetry::Result<()> {
    let closed = adjoint_closed(v, eps, w)?.image;
    let series = adjoint_series(v, eps, w, 12)?;
    let oracle = adjoint_ode_oracle(v, eps, w, 200)?;
    let times = sample_times(None);
    let (ds, df) = closed.distance(&oracle, &times)?;
    let (ss, sf) = closed.distance(&series, &times)?;
    println!("Ad(exp({eps}·[{v}])) [{w}] = {closed}");
    println!("  vs ODE {:.1e}, vs series {:.1e}", ds.max(df), ss.max(sf));
    Ok(())
}

fn main() -> bve_symmetry::Result<()> {
    let bp = PlaneFlavor::BetaPlane;
    let scaling = Generator::Plane(PlaneGenerator::beta_d());
    let x = Generator::Plane(PlaneGenerator::x(bp, TimeFunction::polynomial(&[0.0, 0.0, 1.0])));
    show(&scaling, 0.5, &x)?;
    show(&Generator::Plane(PlaneGenerator::dy(bp)), 2.0, &x)?;

    let j = |k| Generator::Sphere(SphereGenerator::j(Frame::Rest, k));
    show(&j(1), 0.3, &j(2))?;
    Ok(())
}
