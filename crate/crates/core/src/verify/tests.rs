use std::sync::Arc;

use super::*;
use crate::field::{FnField, Geometry, SharedField, StreamFunction};
use crate::generators::{FrameDirection, frame_transform};
use crate::jet::Jet;
use crate::solutions::{FamilySpec, SolutionFamily, legendre_jet, plane_residual, sphere_residual};
use crate::timefn::TimeFunction;

fn plane_grid(n: usize) -> PlaneGrid {
    PlaneGrid::new([0.2, 1.4], n, [-0.6, 0.6], n, vec![0.5, 0.6, 0.7, 0.8, 0.9]).unwrap()
}

fn family(spec: FamilySpec) -> SharedField {
    SolutionFamily::new(spec).unwrap().field()
}

#[test]
fn cubic_steady_has_zero_residual() {
    let psi = family(FamilySpec::CubicSteady { c1: 0.3, c2: -0.2, beta: 1.0 });
    let report = residual_plane(&psi, &plane_grid(17), 1.0, DerivativeMode::Analytic).unwrap();
    assert!(report.max_norm <= 1e-12, "{}", report.max_norm);
    assert!(report.l2_norm <= report.max_norm);
}

#[test]
fn constant_stream_function() {
    let psi: SharedField = Arc::new(FnField::new(Geometry::Plane, |_: &[Jet; 3]| Ok(Jet::constant(2.5))));
    for mode in [DerivativeMode::Analytic, DerivativeMode::FiniteDifference] {
        assert_eq!(residual_plane(&psi, &plane_grid(9), 1.0, mode).unwrap().max_norm, 0.0);
    }
}

#[test]
fn rossby_wave_fd_is_second_order() {
    let psi = family(FamilySpec::RossbyWave { amplitude: 1.0, k: 1.0, l: 1.0, beta: 1.0, phase: 0.3 });
    let grid = PlaneGrid::new([0.0, 2.0], 17, [0.0, 2.0], 17, (0..5).map(|k| 0.125 * k as f64).collect()).unwrap();
    let report = residual_plane_convergence(&psi, &grid, 1.0, DerivativeMode::FiniteDifference).unwrap();
    let ratio = report.convergence_ratio.unwrap();
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

fn rh(n: u32, m: i32, omega: f64) -> SharedField {
    let c = -((n * (n + 1)) as f64);
    let a = if n == 1 { None } else { Some(omega * (c + 2.0) / c) };
    family(FamilySpec::RossbyHaurwitz { omega, amplitude: 1.0, n, m, a, phase: 0.0 })
}

#[test]
fn rossby_haurwitz_sphere_residual() {
    let grid = SphereGrid::new(16, 15, vec![0.0, 0.4, 0.8], 1.0).unwrap();
    let report = residual_sphere(&rh(2, 1, 1.0), &grid, DerivativeMode::Analytic).unwrap();
    assert!(report.max_norm <= 1e-10, "{}", report.max_norm);
}

#[test]
fn solid_body_rotation_is_steady() {
    let omega = 1.0;
    let psi: SharedField = Arc::new(FnField::new(Geometry::Sphere, move |p: &[Jet; 3]| Ok(p[2] * omega)));
    let grid = SphereGrid::new(12, 11, vec![0.0, 0.5, 1.0], omega).unwrap();
    for mode in [DerivativeMode::Analytic, DerivativeMode::FiniteDifference] {
        assert!(residual_sphere(&psi, &grid, mode).unwrap().max_norm < 1e-13);
    }
}

#[test]
fn frame_map_preserves_solutions() {
    let omega = 1.0;
    let rest: SharedField = Arc::new(frame_transform(rh(3, 2, omega), omega, FrameDirection::ToRest));
    let grid = SphereGrid::new(16, 15, vec![0.0, 0.3, 0.9], 0.0).unwrap();
    let report = residual_sphere(&rest, &grid, DerivativeMode::Analytic).unwrap();
    assert!(report.max_norm <= 1e-10, "{}", report.max_norm);
}

#[test]
fn rossby_haurwitz_fd_is_second_order() {
    let mut grid = SphereGrid::new(64, 49, (0..5).map(|k| 0.05 * k as f64).collect(), 1.0).unwrap();
    grid.delta = 0.2;
    let report = residual_sphere_convergence(&rh(2, 1, 1.0), &grid, DerivativeMode::FiniteDifference).unwrap();
    let ratio = report.convergence_ratio.unwrap();
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

fn params() -> ReductionParams {
    ReductionParams {
        beta: Some(1.3),
        c: Some(0.7),
        a: Some(0.4),
        b: Some(0.6),
        f: Some(TimeFunction::polynomial(&[1.0, 0.5])),
        g: Some(TimeFunction::cosine(0.3, 1.0, 0.2)),
    }
}

/// A smooth function that solves none of the reduced equations.
fn generic(case: ReductionCase) -> ReducedFn {
    if case.is_ode() {
        reduced_fn(|p, _| Ok(p.sin() * 0.7 + *p * *p * *p * 0.2 + 1.5))
    } else {
        reduced_fn(|p, q| Ok((*p + *q * 0.3).sin() * (*q * 0.2).exp() + *p * *p * *q))
    }
}

fn full_residual(field: &SharedField, case: ReductionCase, params: &ReductionParams, point: [f64; 3]) -> f64 {
    let jet = field.eval_jet(&Jet::point(point)).unwrap();
    match case.geometry() {
        Geometry::Plane => plane_residual(&jet, params.beta.unwrap_or(0.0)),
        Geometry::Sphere => sphere_residual(&jet, point[2], 0.0, 1.0),
    }
}

#[test]
fn lift_residual_is_proportional_to_reduced_residual() {
    let params = params();
    let points = [[1.2, 0.4, -0.3], [1.7, 0.9, 0.5], [2.3, 0.3, 0.8]];
    for case in ReductionCase::ALL {
        let v = generic(case);
        let field = lift(case, v.clone(), &params).unwrap();
        for &point in &points {
            let full = full_residual(&field, case, &params, point);
            let pq = reduction_point(case, &params, point).unwrap();
            let reduced = reduced_residual_at(case, &v, &params, pq).unwrap();
            let want = lift_factor(case, &params, point) * reduced;
            assert!(reduced.abs() > 1e-3, "{case}: generic v happens to solve the equation");
            assert!((full - want).abs() <= 1e-10 * (1.0 + want.abs()), "{case} at {point:?}: {full} vs {want}");
        }
    }
}

#[test]
fn missing_parameters_and_unknown_cases() {
    assert!("P9".parse::<ReductionCase>().is_err());
    assert_eq!("p2d".parse::<ReductionCase>().unwrap(), ReductionCase::P2D);
    let v = generic(ReductionCase::P2);
    let bare = ReductionParams { beta: Some(1.0), ..Default::default() };
    assert!(reduced_residual_at(ReductionCase::P2, &v, &bare, [0.0, 0.0]).is_err());
    assert!(lift(ReductionCase::S1, v, &bare).is_err());
}

#[test]
fn reduced_rossby_wave() {
    // v = A sin(kp + lq) with ψ(t, x, y) = v(x, y − ct) a Rossby wave
    let (k, l, beta) = (1.0, 2.0, 1.0);
    let omega = -beta * k / (k * k + l * l);
    let params = ReductionParams { beta: Some(beta), c: Some(omega / l), ..Default::default() };
    let v = reduced_fn(move |p, q| Ok((*p * k + *q * l).sin()));
    let grid = ReducedGrid::new([0.0, 3.0], 13, [-1.0, 1.0], 9).unwrap();
    let report = reduced_residual(ReductionCase::P2, &v, &params, &grid).unwrap();
    assert!(report.max_norm <= 1e-12, "{}", report.max_norm);
}

#[test]
fn reduced_zonal_profile_with_constant_vorticity() {
    // v = ln(1 − q²) has ((1 − q²)v_q)_q = −2
    let params = ReductionParams { g: Some(TimeFunction::zero()), ..Default::default() };
    let v = reduced_fn(|_, q| Ok((*q + 1.0).ln() + (1.0 - *q).ln()));
    let grid = ReducedGrid::new([0.0, 1.0], 5, [-0.8, 0.8], 9).unwrap();
    let report = reduced_residual(ReductionCase::S3, &v, &params, &grid).unwrap();
    assert!(report.max_norm <= 1e-12);
}

#[test]
fn reduced_cubic_steady() {
    let (c1, c2, beta) = (0.4, -0.3, 1.0);
    // r³v(φ) = c1(x² − 3y²)x + c2(3x² − y²)y − (β/8)r²y
    let v = reduced_fn(move |phi, _| {
        Ok((*phi * 3.0).cos() * c1 + (*phi * 3.0).sin() * c2 - phi.sin() * (beta / 8.0))
    });
    let params = ReductionParams { beta: Some(beta), ..Default::default() };
    let grid = ReducedGrid::new([-3.0, 3.0], 61, [0.0, 0.0], 1).unwrap();
    let report = reduced_residual(ReductionCase::P2D, &v, &params, &grid).unwrap();
    assert!(report.max_norm <= 1e-10, "{}", report.max_norm);
    let lifted = lift(ReductionCase::P2D, v, &params).unwrap();
    let exact = family(FamilySpec::CubicSteady { c1, c2, beta });
    for p in [[0.0, 0.7, 0.2], [1.0, -0.4, 1.1]] {
        assert!((lifted.eval(p).unwrap() - exact.eval(p).unwrap()).abs() < 1e-13);
    }
}

#[test]
fn lift_of_pure_cubic() {
    let beta = 1.5;
    let params = ReductionParams {
        beta: Some(beta),
        f: Some(TimeFunction::constant(1.0)),
        g: Some(TimeFunction::zero()),
        ..Default::default()
    };
    let v = reduced_fn(move |p, _| Ok(p.powi(3) * (-beta / 6.0)));
    let psi = lift(ReductionCase::P4, v, &params).unwrap();
    assert!((psi.eval([0.3, 0.5, 0.8]).unwrap() + beta * 0.8f64.powi(3) / 6.0).abs() < 1e-15);
    assert!(residual_plane(&psi, &plane_grid(9), beta, DerivativeMode::Analytic).unwrap().max_norm < 1e-13);
}

#[test]
fn travelling_lift_matches_rossby_haurwitz() {
    let (n, m, a) = (3u32, 2i32, 0.35);
    let c = -((n * (n + 1)) as f64);
    let zonal = -a * c / (c + 2.0);
    let params = ReductionParams { a: Some(a), ..Default::default() };
    let wave = reduced_fn(move |p, q| Ok(legendre_jet(n, m, q)? * (*p * m as f64).cos()));
    let with_zonal = {
        let wave = wave.clone();
        reduced_fn(move |p, q| Ok(wave(p, q)? + *q * zonal))
    };
    let grid = ReducedGrid::new([0.0, 6.0], 13, [-0.9, 0.9], 13).unwrap();
    assert!(reduced_residual(ReductionCase::S2, &with_zonal, &params, &grid).unwrap().max_norm < 1e-11);
    let lifted = lift(ReductionCase::S2, wave, &params).unwrap();
    let exact = family(FamilySpec::RossbyHaurwitz { omega: 0.0, amplitude: 1.0, n, m, a: Some(a), phase: 0.0 });
    for p in [[0.2, 0.4, 0.3], [1.5, 2.0, -0.7]] {
        let diff = exact.eval(p).unwrap() - zonal * p[2] - lifted.eval(p).unwrap();
        assert!(diff.abs() < 1e-12, "{diff}");
    }
}

#[test]
fn klein_gordon_roundtrip_and_coordinates() {
    let kg = KleinGordon::new(1.0, TimeFunction::polynomial(&[0.0, 1.0]), TimeFunction::sine(0.5, 1.0)).unwrap();
    for q in [-1.5, 0.0, 0.7, 2.0] {
        assert!((kg.q_tilde(q).unwrap() - q.atan()).abs() < 1e-14);
        assert!((kg.q_of_q_tilde(q.atan()).unwrap() - q).abs() < 1e-12);
    }
    let v = generic(ReductionCase::P3);
    let back = kg.inverse(kg.transform(v.clone()));
    for (p, q) in [(0.3, 0.2), (-1.0, 1.4), (2.0, -0.6)] {
        let (want, got) = (v(&Jet::var(p, 1), &Jet::var(q, 2)).unwrap(), back(&Jet::var(p, 1), &Jet::var(q, 2)).unwrap());
        for alpha in [[0, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 2], [0, 0, 3]] {
            assert!((want.derivative(alpha) - got.derivative(alpha)).abs() < 1e-10, "{alpha:?}");
        }
    }
}

#[test]
fn klein_gordon_harmonics_lift_to_solutions() {
    let beta = 1.0;
    for f in [TimeFunction::zero(), TimeFunction::constant(1.0), TimeFunction::polynomial(&[0.0, 1.0])] {
        let kg = KleinGordon::new(beta, f.clone(), TimeFunction::zero()).unwrap();
        let harmonic = kg_harmonic(beta, 1.5, 0.2).unwrap();
        assert!(kg.residual_at(&harmonic, [0.4, 0.9]).unwrap().abs() < 1e-14);
        let v = kg.inverse(harmonic);
        let params = ReductionParams { beta: Some(beta), f: Some(f), ..Default::default() };
        let psi = lift(ReductionCase::P3, v, &params).unwrap();
        let report = residual_plane(&psi, &plane_grid(9), beta, DerivativeMode::Analytic).unwrap();
        assert!(report.max_norm <= 1e-10, "{}", report.max_norm);
    }
}

#[test]
fn one_dimensional_rossby_wave_from_klein_gordon() {
    let (beta, k) = (1.0, 2.0);
    let kg = KleinGordon::new(beta, TimeFunction::zero(), TimeFunction::zero()).unwrap();
    let v = kg.inverse(kg_harmonic(beta, k, 0.0).unwrap());
    let params = ReductionParams { beta: Some(beta), f: Some(TimeFunction::zero()), ..Default::default() };
    let psi = lift(ReductionCase::P3, v, &params).unwrap();
    let wave = family(FamilySpec::RossbyWave { amplitude: 1.0, k, l: 0.0, beta, phase: 0.0 });
    for p in [[0.3, 0.2, 0.9], [1.1, -0.5, 0.0]] {
        assert!((psi.eval(p).unwrap() - wave.eval(p).unwrap()).abs() < 1e-14);
    }
}

#[test]
fn zero_klein_gordon_field_lifts_to_a_solution() {
    let f = TimeFunction::polynomial(&[0.5, 0.0, 0.3]);
    let kg = KleinGordon::new(1.0, f.clone(), TimeFunction::zero()).unwrap();
    let v = kg.inverse(reduced_fn(|_, _| Ok(Jet::constant(0.0))));
    let params = ReductionParams { beta: Some(1.0), f: Some(f), ..Default::default() };
    let psi = lift(ReductionCase::P3, v, &params).unwrap();
    assert!(residual_plane(&psi, &plane_grid(9), 1.0, DerivativeMode::Analytic).unwrap().max_norm < 1e-12);
}

#[test]
fn report_json_and_csv() {
    let psi = family(FamilySpec::CubicSteady { c1: 0.0, c2: 0.0, beta: 1.0 });
    let grid = plane_grid(9);
    let report = residual_plane(&psi, &grid, 1.0, DerivativeMode::FiniteDifference).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    assert!(text.contains("\"mode\":\"finite-difference\""));
    let back: ResidualReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    let samples = plane_field(&psi, &grid, 1.0, DerivativeMode::Analytic).unwrap();
    let mut out = Vec::new();
    write_csv(&mut out, ["x", "y"], &samples).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), samples.len() + 1);
    assert!(text.starts_with("t,x,y,psi,zeta,residual"));
}

#[test]
fn l2_norm_is_partition_independent() {
    let values: Vec<f64> = (0..1000).map(|i| ((i as f64) * 0.37).sin() * 1e-3).collect();
    let a = ResidualReport::from_residuals(&values, GridMeta::Reduced(ReducedGrid::new([0.0, 1.0], 2, [0.0, 0.0], 1).unwrap()), DerivativeMode::Analytic).unwrap();
    let mut rev = values.clone();
    rev.reverse();
    let b = ResidualReport::from_residuals(&rev, a.grid.clone(), DerivativeMode::Analytic).unwrap();
    assert!((a.l2_norm - b.l2_norm).abs() <= 1e-18);
}
