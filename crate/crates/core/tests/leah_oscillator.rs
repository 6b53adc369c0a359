use std::f64::consts::TAU;

use imani_core::fourier::{analyze_samples, odd_harmonic_defect};
use imani_core::imani::imani_eval;
use imani_core::leah::{
    check_solution, crossing_period, extract_phase, generalized_flow, generalized_flow_sampled,
    integrate_leah, integrate_leah_uniform, leah_period, OscState, Sampling,
};
use imani_core::ImaniParams;
use statrs::function::gamma::gamma;

const START: OscState = OscState::new(1.0, 0.0);

type Gauge<'a> = (&'a str, &'a dyn Fn(f64, f64) -> f64);

/// `3√(2/3) B(3/4, 1/2)` from an independent Gamma implementation.
fn beta_period() -> f64 {
    let beta = gamma(0.75) * gamma(0.5) / gamma(1.25);
    3.0 * (2.0f64 / 3.0).sqrt() * beta
}

#[test]
fn period_matches_beta_identity() {
    let t = leah_period().unwrap();
    let reference = beta_period();
    println!(
        "quadrature {} ± {:e}, beta {}",
        t.value, t.error_estimate, reference
    );
    assert!(((t.value - reference) / reference).abs() < 1e-8);
    assert!(t.error_estimate <= 1e-9);
    // Quarter period times √(3/2) is the bare integral ∫₀¹ (1 - x^{4/3})^{-1/2}.
    let bare = t.value / 4.0 * 1.5f64.sqrt();
    assert!((bare - 0.75 * gamma(0.75) * gamma(0.5) / gamma(1.25)).abs() < 1e-9);
    assert!((bare - 1.7972).abs() < 1e-4);
}

#[test]
fn one_period_returns_to_start() {
    let period = leah_period().unwrap().value;
    let traj = integrate_leah(START, period, 1e-10).unwrap();
    let end = traj.last_state().unwrap();
    println!("after one period: {end:?}");
    assert!((end.x - 1.0).abs() < 1e-6 && end.y.abs() < 1e-6);
}

#[test]
fn energy_conserved_over_ten_periods() {
    let period = leah_period().unwrap().value;
    let traj = integrate_leah(START, 10.0 * period, 1e-10).unwrap();
    let drift = traj.max_energy_drift(0.75);
    println!("10-period drift {drift:e} over {} steps", traj.len());
    assert!(drift <= 1e-8);
}

#[test]
fn every_gauge_conserves_energy() {
    let period = leah_period().unwrap().value;
    let gauges: [Gauge; 4] = [
        ("1", &|_, _| 1.0),
        ("2", &|_, _| 2.0),
        ("1+x^2", &|x, _| 1.0 + x * x),
        ("1/(1+y^2)", &|_, y| 1.0 / (1.0 + y * y)),
    ];
    for (name, phi) in gauges {
        let traj = generalized_flow(phi, START, 3.0 * period, 1e-10).unwrap();
        let drift = traj.max_energy_drift(0.75);
        println!("phi = {name}: drift {drift:e}");
        assert!(drift <= 1e-7, "phi = {name}");
    }
}

#[test]
fn unit_gauge_is_the_oscillator() {
    let a = generalized_flow(|_, _| 1.0, START, 4.0, 1e-10).unwrap();
    let b = integrate_leah(START, 4.0, 1e-10).unwrap();
    assert_eq!(a, b);
}

#[test]
fn doubled_gauge_halves_the_period() {
    let period = leah_period().unwrap().value;
    let traj = generalized_flow(|_, _| 2.0, START, 0.5 * period, 1e-11).unwrap();
    let end = traj.last_state().unwrap();
    assert!((end.x - 1.0).abs() < 1e-6 && end.y.abs() < 1e-6, "{end:?}");

    // Time rescaling: the φ = 2 state at t equals the φ = 1 state at 2t.
    let slow = integrate_leah_uniform(START, 2.0, 10, 1e-11).unwrap();
    let fast =
        generalized_flow_sampled(|_, _| 2.0, START, 1.0, Sampling::Uniform(10), 1e-11).unwrap();
    for (s, f) in slow.states.iter().zip(&fast.states) {
        assert!((s.x - f.x).abs() < 1e-8 && (s.y - f.y).abs() < 1e-8);
    }
}

#[test]
fn orbit_solves_the_functional_equation() {
    let period = leah_period().unwrap().value;
    let traj = integrate_leah(START, 2.0 * period, 1e-10).unwrap();
    let xs: Vec<f64> = traj.states.iter().map(|s| s.x).collect();
    let ys: Vec<f64> = traj.states.iter().map(|s| s.y).collect();
    assert!(check_solution(&xs, &ys).unwrap() <= 1e-7);
}

#[test]
fn orbit_is_even_in_time() {
    let n = 200;
    let forward = integrate_leah_uniform(START, 7.0, n, 1e-11).unwrap();
    let backward =
        generalized_flow_sampled(|_, _| -1.0, START, 7.0, Sampling::Uniform(n), 1e-11).unwrap();
    for (f, b) in forward.states.iter().zip(&backward.states) {
        assert!((f.x - b.x).abs() < 1e-7);
        assert!((f.y + b.y).abs() < 1e-7);
    }
}

#[test]
fn crossing_period_matches_quadrature() {
    let quad = leah_period().unwrap().value;
    let measured = crossing_period(START, 1e-12, 20.0).unwrap();
    println!("crossing period {measured}, quadrature {quad}");
    assert!(((measured - quad) / quad).abs() < 1e-6);
}

#[test]
fn orbit_has_only_odd_harmonics() {
    let period = leah_period().unwrap().value;
    let n = 4096;
    let traj = integrate_leah_uniform(START, period, n, 1e-11).unwrap();
    let xs: Vec<f64> = traj.states[..n].iter().map(|s| s.x).collect();
    let spec = analyze_samples(&xs, period, 12).unwrap();
    let defect = odd_harmonic_defect(&spec);
    println!("defect {defect:e}, largest {}", spec.largest_coefficient());
    println!("cos {:?}", spec.cos_coeffs);
    assert!(defect <= 1e-6);
    assert!(defect / spec.largest_coefficient() <= 1e-6);
}

#[test]
fn leah_phase_round_trip() {
    let period = leah_period().unwrap().value;
    let n = 4096;
    let traj = integrate_leah_uniform(START, period, n, 1e-11).unwrap();
    for order in [4, 8, 16, 32, 64] {
        let fit = extract_phase(&traj, period, order).unwrap();
        let worst = traj
            .t
            .iter()
            .zip(&traj.states)
            .map(|(&t, s)| (imani_eval(&fit.params, t).ics - s.x).abs())
            .fold(0.0, f64::max);
        println!(
            "K = {order}: fit residual {:e}, x reproduction {worst:e}",
            fit.fit_residual
        );
        println!("  coeffs {:?}", &fit.params.coeffs()[..4]);
        assert!(worst <= fit.fit_residual);
    }
}

#[test]
fn imani_round_trip_recovers_coefficients() {
    let params = ImaniParams::new(TAU, vec![0.3, -0.1, 0.05]).unwrap();
    let n = 2048;
    let t: Vec<f64> = (0..=n).map(|j| TAU * j as f64 / n as f64).collect();
    let states = t
        .iter()
        .map(|&s| {
            let p = imani_eval(&params, s);
            OscState::new(p.ics, p.isn)
        })
        .collect();
    let traj = imani_core::Trajectory::from_samples(t, states).unwrap();
    let fit = extract_phase(&traj, TAU, 8).unwrap();
    for (k, expected) in [0.3, -0.1, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0]
        .iter()
        .enumerate()
    {
        assert!((fit.params.coeffs()[k] - expected).abs() < 1e-8);
    }
}
