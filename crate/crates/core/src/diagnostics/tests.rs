use super::*;
use alloc::vec::Vec;
use proptest::prelude::*;
use crate::spectral::SGridFunction;

#[test]
fn hardy_constant_function() {
    // α = 0: T 1 = 1
    assert!((hardy_ratio(0.0, |_| 1.0).unwrap() - 1.0).abs() < 1e-12);
    // α = 3/4: T 1 (y) = 4 (y^{-1/4} - 1), ‖T 1‖² = 16/3
    let r = hardy_ratio(0.75, |_| 1.0).unwrap();
    assert!((r - 4.0 / 3f64.sqrt()).abs() < 1e-8, "{r}");
    assert!(r <= hardy_bound(0.75));
    // α = -1: T 1 = 1/2
    assert!((hardy_ratio(-1.0, |_| 1.0).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn hardy_monomial_closed_form() {
    // α < 1/2, f = x^n: T f = y^n / (n + 1 - α)
    for (alpha, n) in [(0.25, 2), (-0.5, 3), (0.0, 5)] {
        let r = hardy_ratio(alpha, |x: f64| x.powi(n)).unwrap();
        assert!((r - 1.0 / (n as f64 + 1.0 - alpha)).abs() < 1e-12, "{alpha} {n}");
    }
}

#[test]
fn hardy_rejects_critical_exponent() {
    assert!(hardy_ratio(0.5, |_| 1.0).is_err());
    assert!(check_hardy(0.5, 3, 1).is_err());
}

#[test]
fn hardy_suite_respects_bounds() {
    for alpha in [-1.0, -0.5, 0.0, 0.25, 0.75, 1.0] {
        let rep = check_hardy(alpha, 20, 7).unwrap();
        assert!(rep.pass, "{}", rep.line());
        assert_eq!(rep.bound, hardy_bound(alpha));
    }
}

#[test]
fn hardy_worst_ratio_is_running_max() {
    let a = check_hardy(0.75, 5, 3).unwrap();
    let b = check_hardy(0.75, 15, 3).unwrap();
    assert!(b.worst_ratio >= a.worst_ratio);
    assert_eq!(check_hardy(0.75, 5, 3).unwrap(), a);
}

#[test]
fn cokernel_examples() {
    let grid = SGrid::new(8).unwrap();
    assert_eq!(cokernel_moment(&ThetaSeries::constant(32, 1.0), &grid).unwrap(), 0.0);
    let one_cos = ThetaSeries::from_real_fn(32, |t| 1.0 + 0.1 * t.cos());
    assert!(cokernel_moment(&one_cos, &grid).unwrap() < 1e-10);
    let mixed = ThetaSeries::from_real_fn(32, |t| 1.0 + 0.05 * (2.0 * t).cos() + 0.05 * (3.0 * t).sin());
    assert!(cokernel_moment(&mixed, &grid).unwrap() < 1e-10);
    // only the e^{±2iθ} modes vanish; neighbouring modes of Ξ do not
    let vort = xi(&BracketField::from_mode_fn(Order::HALF, &grid, 32, |m, _| mixed.coeff(m)), &EvalOptions::default()).unwrap();
    assert!(vort.mode(2).at_origin().norm() < 1e-10 / (2.0 * PI) * 10.0);
    assert!(vort.mode(1).at_origin().norm() + vort.mode(3).at_origin().norm() > 1e-3);
}

#[test]
fn cokernel_suite() {
    let rep = check_cokernel(20, 0.1, 11).unwrap();
    assert!(rep.pass, "{}", rep.line());
    assert_eq!(rep.samples, 20);
}

#[test]
fn random_perturbation_is_scaled() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = random_analytic_perturbation(&mut rng, 16, 12, 0.1);
    let dev = s.samples().iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
    assert!((dev - 0.1).abs() < 1e-12);
    assert!(s.is_real(1e-15));
}

#[test]
fn isomorphism_unit_boundary_data() {
    let cfg = SolveConfig { k_modes: 8, n_radial: 24, ..SolveConfig::default() };
    let grid = SGrid::new(24).unwrap();
    let f = BracketField::zeros(Order::HALF, &grid, 8);
    let ratio = linear_stability_ratio(f, ThetaSeries::constant(8, 1.0), &cfg).unwrap();
    assert!((ratio - 1.0).abs() < 1e-14);
}

#[test]
fn isomorphism_suite_round_trips() {
    let cfg = SolveConfig { k_modes: 16, n_radial: 48, ..SolveConfig::default() };
    let rep = check_linear_isomorphism(20, &cfg, 2).unwrap();
    assert!(rep.report.pass, "{}", rep.report.line());
    assert!(rep.worst_boundary < 1e-10, "{}", rep.worst_boundary);
    assert!(rep.stability_constant.is_finite() && rep.stability_constant > 0.0);
}

#[test]
fn isomorphism_constant_stable_under_refinement() {
    let coarse = SolveConfig { k_modes: 12, n_radial: 32, ..SolveConfig::default() };
    let fine = SolveConfig { n_radial: 64, ..coarse };
    let a = check_linear_isomorphism(10, &coarse, 9).unwrap();
    let b = check_linear_isomorphism(10, &fine, 9).unwrap();
    assert!(a.report.pass && b.report.pass);
    let rel = (a.stability_constant - b.stability_constant).abs() / a.stability_constant;
    assert!(rel < 0.1, "{} vs {}", a.stability_constant, b.stability_constant);
}

#[test]
fn inverse_does_not_depend_on_gamma() {
    let grid = SGrid::new(24).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_interior_data(&mut rng, &grid, 8, 8);
    let g = random_theta_series(&mut rng, 8);
    let solver = LinearSolver::new(&grid, 8);
    let (data, _) = LinearData::projected(f, g).unwrap();
    let lo = SolveConfig { gamma: 0.6, k_modes: 8, n_radial: 24, ..SolveConfig::default() };
    let hi = SolveConfig { gamma: 0.9, ..lo };
    let a = linear_trial(&solver, data.f.clone(), data.g.clone(), &lo).unwrap();
    let b = linear_trial(&solver, data.f.clone(), data.g.clone(), &hi).unwrap();
    assert_eq!((a.0, a.1), (b.0, b.1));
    assert!(a.2 != b.2);
    assert_eq!(solver.solve(&data).unwrap(), solver.solve(&data).unwrap());
}

fn family_with_trace(grid: &alloc::sync::Arc<SGrid>, trace: &ThetaSeries) -> FlowLineFamily {
    FlowLineFamily {
        r: 1.0,
        p: [0.0, 0.0],
        a: BracketField::from_mode_fn(Order::HALF, grid, trace.k_max(), |k, _| trace.coeff(k)),
    }
}

#[test]
fn strip_of_reference_passes() {
    let grid = SGrid::new(16).unwrap();
    let cfg = SolveConfig::default();
    let sol = FlowLineFamily::reference(&grid, 16);
    let b = BoundaryCurve::circle(16, 1.0, 0.5).unwrap();
    let m = strip_margin_report(&sol, &b, &cfg).unwrap();
    assert!(m.report.pass);
    assert!(m.excursion < 1e-13);
    assert!(m.trace_width.is_infinite() && m.offset_width.is_infinite());
    assert!((m.report.worst_ratio - 0.4).abs() < 1e-12);
}

#[test]
fn strip_of_translated_boundary_passes() {
    // radius about p of the unit circle centred at (0.1, 0): the trace of the translated flow
    let grid = SGrid::new(16).unwrap();
    let cfg = SolveConfig::default();
    let sol = FlowLineFamily {
        r: 1.0,
        p: [0.1, 0.0],
        a: BracketField::radial(Order::HALF, SGridFunction::from_real_fn(grid.clone(), |_| 1.0), 32),
    };
    let b = BoundaryCurve::new(
        ThetaSeries::from_real_fn(32, |t| 0.1 * t.cos() + (1.0 - 0.01 * t.sin().powi(2)).sqrt()),
        0.5,
    )
    .unwrap();
    let m = strip_margin_report(&sol, &b, &cfg).unwrap();
    assert!(m.report.pass, "{}", m.report.line());
    assert!(m.excursion > 0.0 && m.offset_width > 1.0);
}

#[test]
fn strip_flags_slow_decay() {
    let grid = SGrid::new(16).unwrap();
    let cfg = SolveConfig::default();
    let mut trace = ThetaSeries::constant(32, 1.0);
    for k in 1..=32i64 {
        let c = Complex64::new(0.01 * (-0.1 * k as f64).exp(), 0.0);
        trace.set(k, c);
        trace.set(-k, c);
    }
    let sol = family_with_trace(&grid, &trace);
    let b = BoundaryCurve::circle(32, 1.0, 1.0).unwrap();
    let m = strip_margin_report(&sol, &b, &cfg).unwrap();
    assert!((m.trace_width - 0.1).abs() < 1e-6);
    assert!(!m.report.pass);
    assert!(m.report.worst_ratio > 1.9);
}

#[test]
fn report_line_format() {
    let r = PropertyReport::new("x".into(), 3, 10, 0.5, 1.0, 0.05);
    assert_eq!(r.line(), "x seed=3 samples=10 worst_ratio=5.000000e-1 bound=1.000000e0 PASS");
    let r = PropertyReport::new("x".into(), 3, 10, 1.06, 1.0, 0.05);
    assert!(!r.pass);
    let r = PropertyReport::new("x".into(), 3, 10, 1.04, 1.0, 0.05);
    assert!(r.pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hardy_bound_holds_for_random_series(seed in 0u64..1000, alpha in prop::sample::select(Vec::from([-1.0, -0.5, 0.0, 0.25, 0.75, 1.0]))) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = random_chebyshev(&mut rng, 12);
        let r = hardy_ratio(alpha, |x| eval_chebyshev(&coeffs, x)).unwrap();
        prop_assert!(r <= hardy_bound(alpha));
    }

    #[test]
    fn cokernel_moments_vanish(seed in 0u64..1000, amp in 0.0f64..0.1) {
        let grid = SGrid::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_analytic_perturbation(&mut rng, 32, 12, amp);
        prop_assert!(cokernel_moment(&s, &grid).unwrap() < 1e-9);
    }
}
