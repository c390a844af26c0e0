use std::sync::Arc;

use super::*;
use crate::field::{FnField, Geometry, StreamFunction};
use crate::jet::Jet;
use crate::timefn::TimeFunction;

fn poly(c: &[f64]) -> TimeFunction {
    TimeFunction::polynomial(c)
}

/// One member of every family, with points inside its domain.
pub(crate) fn catalogue() -> Vec<(FamilySpec, Vec<[f64; 3]>)> {
    let plane_pts = vec![[0.3, 0.7, -0.4], [1.1, 0.2, 0.9], [0.6, 1.4, 0.3]];
    let sphere_pts = vec![[0.3, 0.7, -0.4], [1.1, 2.2, 0.6], [0.6, -1.0, 0.1]];
    vec![
        (FamilySpec::RossbyWave { amplitude: 1.3, k: 1.0, l: 2.0, beta: 1.5, phase: 0.2 }, plane_pts.clone()),
        (
            FamilySpec::Case4Plane {
                beta: 1.0,
                profile: TimeFunction::sine(1.0, 1.0).add(&poly(&[0.0, 0.0, 0.3])),
                f: poly(&[1.0, 0.5]),
                g: TimeFunction::cosine(0.4, 2.0, 0.0),
                h1: poly(&[0.0, 1.0]),
                h0: poly(&[0.2]),
                window: Some([0.0, 2.0]),
            },
            plane_pts.clone(),
        ),
        (FamilySpec::CubicSteady { c1: 0.4, c2: -0.7, beta: 2.0 }, plane_pts.clone()),
        (FamilySpec::SinCubed { beta: 1.2, branch: SinCubedBranch::Principal }, plane_pts.clone()),
        (FamilySpec::SinCubed { beta: 1.2, branch: SinCubedBranch::Plus }, plane_pts.clone()),
        (FamilySpec::SinCubed { beta: 1.2, branch: SinCubedBranch::Minus }, plane_pts.clone()),
        (
            FamilySpec::PIHarmonic {
                beta: 1.0,
                eta: 0.3,
                harmonic: vec![
                    HarmonicTerm::Polynomial { n: 3, coeff: poly(&[0.5, 1.0]), phase: 0.4 },
                    HarmonicTerm::Exponential { k: 1.5, coeff: TimeFunction::sine(0.7, 1.0), phase: 0.1 },
                ],
            },
            plane_pts.clone(),
        ),
        (
            FamilySpec::PIFProfile {
                beta: 1.0,
                profile: TimeFunction::cosine(1.0, 1.0, 0.3),
                g1: poly(&[1.0, 0.3]),
                g0: TimeFunction::sine(0.5, 1.0),
                f1: poly(&[0.1, 0.2]),
                f0: poly(&[0.0, 0.0, 1.0]),
            },
            plane_pts.clone(),
        ),
        (
            FamilySpec::PIChi { beta: 2.0, chi1: poly(&[0.0, 0.0, 1.0]), chi2: TimeFunction::sine(1.0, 1.0), chi3: poly(&[1.0]) },
            plane_pts,
        ),
        (FamilySpec::RossbyHaurwitz { omega: 1.0, amplitude: 0.8, n: 3, m: 2, a: Some(0.4), phase: 0.5 }, sphere_pts.clone()),
        (FamilySpec::RossbyHaurwitz { omega: 0.7, amplitude: 1.0, n: 1, m: 1, a: None, phase: 0.0 }, sphere_pts.clone()),
        (
            FamilySpec::RossbyHaurwitzSum {
                omega: 1.0,
                n: 4,
                members: vec![
                    RhMember { m: -2, amplitude: 0.3, phase: 0.0 },
                    RhMember { m: 1, amplitude: 1.0, phase: 0.7 },
                    RhMember { m: 4, amplitude: 0.1, phase: -0.2 },
                ],
            },
            sphere_pts.clone(),
        ),
        (
            FamilySpec::SphereCase3 {
                g: poly(&[0.2, 0.1]),
                f: TimeFunction::sine(1.0, 1.0),
                h: poly(&[0.3]),
                profile: TimeFunction::cosine(1.0, 2.0, 0.1),
            },
            sphere_pts.clone(),
        ),
        (FamilySpec::SphereZonalWave { b: 0.8, c: -3.0, v0: 1.0, dv0: 0.2 }, sphere_pts),
    ]
}

#[test]
fn every_family_solves_its_equation() {
    for (spec, pts) in catalogue() {
        let fam = SolutionFamily::new(spec.clone()).unwrap();
        for p in pts {
            let jet = fam.eval_jet(&Jet::point(p)).unwrap();
            let r = residual_from_jet(&fam.equation(), p, &jet);
            let tol = match fam.source() {
                DerivativeSource::Analytic => 1e-11,
                _ => 1e-8,
            };
            assert!(r.abs() < tol, "{} at {p:?}: residual {r:e}", fam.id());
        }
    }
}

#[test]
fn rossby_wave_frequency() {
    let fam = SolutionFamily::new(FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 0.0, beta: 1.0, phase: 0.0 }).unwrap();
    // ω = −βk/(k²+l²) = −1, so ψ(t, x, 0) = sin(x + t)
    assert_eq!(fam.phase_speed(), Some(-1.0));
    assert!((fam.eval([2.0, 0.3, 0.0]).unwrap() - 2.3f64.sin()).abs() < 1e-15);
    let diagonal = SolutionFamily::new(FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 1.0, beta: 1.0, phase: 0.0 }).unwrap();
    assert_eq!(diagonal.phase_speed(), Some(-0.5));
}

#[test]
fn degree_from_separation_constant() {
    let c: f64 = -2.0;
    let n = ((1.0 - 4.0 * c).sqrt() - 1.0) / 2.0;
    assert_eq!(n, 1.0);
}

#[test]
fn cubic_steady_vorticity() {
    let fam = SolutionFamily::new(FamilySpec::CubicSteady { c1: 0.0, c2: 0.0, beta: 2.0 }).unwrap();
    for p in [[0.0, 0.5, 0.3], [1.0, -1.0, 2.0]] {
        let zeta = fam.eval_derivs(p, [0, 2, 0]).unwrap() + fam.eval_derivs(p, [0, 0, 2]).unwrap();
        assert!((zeta + 2.0 * p[2]).abs() < 1e-13);
        let psi = -(p[1] * p[1] + p[2] * p[2]) * p[2] / 4.0;
        assert!((fam.eval(p).unwrap() - psi).abs() < 1e-15);
    }
}

#[test]
fn pi_chi_example() {
    let fam = SolutionFamily::new(FamilySpec::PIChi {
        beta: 1.0,
        chi1: poly(&[0.0, 1.0]),
        chi2: TimeFunction::zero(),
        chi3: TimeFunction::zero(),
    })
    .unwrap();
    let (t, x, y) = (1.7, 0.4, -0.9);
    assert!((fam.eval([t, x, y]).unwrap() - (-2.0 * x + t * y * y)).abs() < 1e-15);
}

#[test]
fn case4_plane_cubic_term() {
    let fam = SolutionFamily::new(FamilySpec::Case4Plane {
        beta: 1.0,
        profile: TimeFunction::zero(),
        f: poly(&[1.0]),
        g: TimeFunction::zero(),
        h1: TimeFunction::zero(),
        h0: TimeFunction::zero(),
        window: None,
    })
    .unwrap();
    let p = [0.5, 0.2, 1.1];
    assert!((fam.eval(p).unwrap() + 1.1f64.powi(3) / 6.0).abs() < 1e-15);
    assert!((fam.eval_derivs(p, [0, 0, 3]).unwrap() + 1.0).abs() < 1e-14);
}

#[test]
fn case4_rejects_vanishing_f() {
    let spec = FamilySpec::Case4Plane {
        beta: 1.0,
        profile: TimeFunction::zero(),
        f: poly(&[-1.0, 1.0]),
        g: TimeFunction::zero(),
        h1: TimeFunction::zero(),
        h0: TimeFunction::zero(),
        window: Some([0.0, 2.0]),
    };
    assert!(SolutionFamily::new(spec).is_err());
}

#[test]
fn rossby_haurwitz_phase_relation() {
    let omega = 1.0;
    let (n, c) = (2u32, -6.0);
    let fam = SolutionFamily::new(FamilySpec::RossbyHaurwitz {
        omega,
        amplitude: 1.0,
        n,
        m: 1,
        a: Some(omega * (c + 2.0) / c),
        phase: 0.0,
    })
    .unwrap();
    let speed = fam.phase_speed().unwrap();
    assert!((speed + omega / 3.0).abs() < 1e-14);
    assert!(fam.zonal_coefficient().unwrap().abs() < 1e-15);
    let dt = 0.37;
    for &(lambda, mu) in &[(0.3, 0.2), (2.0, -0.6)] {
        let later = fam.eval([dt, lambda + speed * dt, mu]).unwrap();
        assert!((later - fam.eval([0.0, lambda, mu]).unwrap()).abs() < 1e-14);
    }
}

#[test]
fn rossby_haurwitz_zonal_coefficient_and_speed() {
    for n in 1..6u32 {
        let c = -((n * (n + 1)) as f64);
        let omega = 0.9;
        let pure = SolutionFamily::new(FamilySpec::RossbyHaurwitz { omega, amplitude: 1.0, n, m: 1, a: None, phase: 0.0 })
            .unwrap();
        assert!((pure.phase_speed().unwrap() + 2.0 * omega / (n * (n + 1)) as f64).abs() < 1e-14);
        assert_eq!(pure.zonal_coefficient(), Some(0.0));
        if n > 1 {
            let a = 0.3;
            let fam = SolutionFamily::new(FamilySpec::RossbyHaurwitz { omega, amplitude: 1.0, n, m: 1, a: Some(a), phase: 0.0 })
                .unwrap();
            assert!((fam.zonal_coefficient().unwrap() - (omega - a * c / (c + 2.0))).abs() < 1e-15);
        }
    }
    let bad = FamilySpec::RossbyHaurwitz { omega: 1.0, amplitude: 1.0, n: 1, m: 0, a: Some(0.2), phase: 0.0 };
    assert!(SolutionFamily::new(bad).is_err());
    let bad = FamilySpec::RossbyHaurwitz { omega: 1.0, amplitude: 1.0, n: 2, m: 3, a: None, phase: 0.0 };
    assert!(SolutionFamily::new(bad).is_err());
}

#[test]
fn zonal_profile_matches_legendre_polynomial() {
    let profile = ZonalProfile::new(0.0, -6.0, 1.0, 0.0).unwrap();
    for mu in [-0.998, -0.5, 0.0, 0.31, 0.9, 0.998] {
        let d = profile.derivs(mu).unwrap();
        let want = [1.0 - 3.0 * mu * mu, -6.0 * mu, -6.0, 0.0];
        // the second and third derivatives divide by (1 − μ²) once and twice
        let w = 1.0 - mu * mu;
        for k in 0..4 {
            let tol = if k < 2 { 1e-10 } else { 1e-10 / (w * w) };
            assert!((d[k] - want[k]).abs() < tol, "μ = {mu}, order {k}: {} vs {}", d[k], want[k]);
        }
    }
    assert!(profile.derivs(0.9995).is_err());
}

#[test]
fn pi_harmonic_laplacian_identity() {
    let (beta, eta) = (1.3, -0.4);
    let psi = Arc::new(FnField::new(Geometry::Plane, |p: &[Jet; 3]| {
        Ok((p[1] * 2.0).exp() * (p[2] * 2.0).sin() * p[0] + p[1] * p[2])
    }));
    let fam = SolutionFamily::pi_harmonic_with(beta, eta, psi).unwrap();
    for p in [[0.1, 0.2, 0.3], [2.0, -1.0, 0.5]] {
        let lap = fam.eval_derivs(p, [0, 2, 0]).unwrap() + fam.eval_derivs(p, [0, 0, 2]).unwrap();
        assert!((lap - (-beta * p[2] + eta)).abs() < 1e-10);
    }
    let not_harmonic = Arc::new(FnField::new(Geometry::Plane, |p: &[Jet; 3]| Ok(p[1] * p[1])));
    assert!(SolutionFamily::pi_harmonic_with(beta, eta, not_harmonic).is_err());
}

#[test]
fn sin_cubed_needs_positive_x() {
    let fam = SolutionFamily::new(FamilySpec::SinCubed { beta: 1.0, branch: SinCubedBranch::Plus }).unwrap();
    assert!(fam.eval([0.0, -0.5, 0.2]).is_err());
}

#[test]
fn sphere_families_stay_off_the_poles() {
    let fam = SolutionFamily::new(FamilySpec::SphereCase3 {
        g: TimeFunction::zero(),
        f: TimeFunction::zero(),
        h: poly(&[1.0]),
        profile: poly(&[1.0]),
    })
    .unwrap();
    assert!(fam.eval([0.0, 0.0, 0.9995]).is_err());
}

#[test]
fn json_descriptors() {
    let fam = SolutionFamily::from_json(r#"{"id":"RossbyWave","amplitude":1,"k":1,"l":0,"beta":1}"#).unwrap();
    assert_eq!(fam.id(), "RossbyWave");
    assert!(SolutionFamily::from_json(r#"{"id":"RossbyWave","amplitude":1,"k":1,"l":0,"beta":1,"extra":2}"#).is_err());
    assert!(SolutionFamily::from_json(r#"{"id":"Nope"}"#).is_err());
    for (spec, _) in catalogue() {
        let text = serde_json::to_string(&spec).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
