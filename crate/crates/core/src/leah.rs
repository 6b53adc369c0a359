//! The Leah oscillator `x'' + x^{1/3} = 0` and its Hamiltonian
//! `H(x, y) = y²/2 + (3/4)|x|^{4/3}`.
//!
//! Integration uses an embedded Dormand-Prince 5(4) pair with per-step error
//! control. The restoring force is not Lipschitz at `x = 0`: on a step that
//! crosses it the local error only scales like `h^{4/3}` and the embedded
//! estimate understates it by two to three orders of magnitude, so steps
//! across `x = 0` are held to a tolerance `1e-6` times tighter.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{atan2, cbrt, sin, sqrt};

use crate::error::Error;
use crate::imani::{abs_pow_four_thirds, odd_cube_root, pair_residual};
use crate::ode::{initial_step, State, Stepper};
use crate::phase::ImaniParams;
use crate::quadrature::{self, QuadResult};
use crate::ISN_AMPLITUDE;

/// Default harmonic count for [`extract_phase`].
pub const DEFAULT_ORDER: usize = 16;

const MAX_STEPS: usize = 10_000_000;
const CROSSING_TIME_TOL: f64 = 1e-10;
const CROSSING_TOL_FACTOR: f64 = 1e-6;
/// Samples whose functional-equation residual exceeds this are rejected by
/// [`extract_phase`].
pub const SOLUTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub x: f64,
    /// Velocity `dx/dt`.
    pub y: f64,
}

impl OscState {
    pub const fn new(x: f64, y: f64) -> Self {
        OscState { x, y }
    }
}

/// Time samples of an orbit together with `H` at each sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<OscState>,
    pub energy: Vec<f64>,
}

impl Trajectory {
    /// Builds a trajectory from externally produced samples. Times must be
    /// strictly increasing and match the states one to one.
    pub fn from_samples(t: Vec<f64>, states: Vec<OscState>) -> Result<Self, Error> {
        if t.len() != states.len() {
            return Err(Error::InvalidArgument("times and states differ in length"));
        }
        if t.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("times must be strictly increasing"));
        }
        let energy = states.iter().map(|&s| hamiltonian(s)).collect();
        Ok(Trajectory { t, states, energy })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn push(&mut self, t: f64, s: OscState) {
        self.t.push(t);
        self.states.push(s);
        self.energy.push(hamiltonian(s));
    }

    pub fn last_state(&self) -> Option<OscState> {
        self.states.last().copied()
    }

    /// `max |H - reference|` over the samples.
    pub fn max_energy_drift(&self, reference: f64) -> f64 {
        self.energy
            .iter()
            .map(|e| (e - reference).abs())
            .fold(0.0, f64::max)
    }

    /// `max |H - H(first sample)|`.
    pub fn energy_drift(&self) -> f64 {
        self.energy
            .first()
            .map_or(0.0, |&h0| self.max_energy_drift(h0))
    }
}

/// Where [`generalized_flow_sampled`] records states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Every accepted integrator step.
    Steps,
    /// `t_end·j/n` for `j = 0..=n`.
    Uniform(usize),
}

pub fn hamiltonian(s: OscState) -> f64 {
    0.5 * s.y * s.y + 0.75 * abs_pow_four_thirds(s.x)
}

/// Period of the `H = 3/4` orbit, `T = 4√(2/3) ∫₀¹ (1 - x^{4/3})^{-1/2} dx`.
///
/// The quarter-period integrand has an inverse square-root singularity at
/// `x = 1`; the returned error estimate is at most `1e-9`.
pub fn leah_period() -> Result<QuadResult, Error> {
    let scale = 4.0 / ISN_AMPLITUDE;
    let quarter = quadrature::adaptive_singular(
        |x| 1.0 / sqrt(1.0 - abs_pow_four_thirds(x)),
        0.0,
        1.0,
        1e-10,
    )?;
    Ok(QuadResult {
        value: scale * quarter.value,
        error_estimate: scale * quarter.error_estimate,
        evaluations: quarter.evaluations,
    })
}

/// Integrates `x' = y, y' = -x^{1/3}` from `ic` over `[0, t_end]`, recording
/// every accepted step.
pub fn integrate_leah(ic: OscState, t_end: f64, step_tol: f64) -> Result<Trajectory, Error> {
    generalized_flow_sampled(|_, _| 1.0, ic, t_end, Sampling::Steps, step_tol)
}

/// As [`integrate_leah`], but recorded on the uniform grid `t_end·j/n`.
pub fn integrate_leah_uniform(
    ic: OscState,
    t_end: f64,
    intervals: usize,
    step_tol: f64,
) -> Result<Trajectory, Error> {
    generalized_flow_sampled(
        |_, _| 1.0,
        ic,
        t_end,
        Sampling::Uniform(intervals),
        step_tol,
    )
}

/// Integrates `x' = φ ∂H/∂y`, `y' = -φ ∂H/∂x` for a gauge field `φ(x, y)`.
/// Every such flow keeps `H` constant; `φ ≡ 1` is the Leah oscillator and
/// `φ ≡ -1` runs it backwards in time.
pub fn generalized_flow<P: Fn(f64, f64) -> f64>(
    phi: P,
    ic: OscState,
    t_end: f64,
    step_tol: f64,
) -> Result<Trajectory, Error> {
    generalized_flow_sampled(phi, ic, t_end, Sampling::Steps, step_tol)
}

pub fn generalized_flow_sampled<P: Fn(f64, f64) -> f64>(
    phi: P,
    ic: OscState,
    t_end: f64,
    sampling: Sampling,
    step_tol: f64,
) -> Result<Trajectory, Error> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument("t_end must be positive and finite"));
    }
    if !(step_tol > 0.0) {
        return Err(Error::InvalidArgument("step tolerance must be positive"));
    }
    if !(ic.x.is_finite() && ic.y.is_finite()) {
        return Err(Error::InvalidArgument("initial state must be finite"));
    }
    if sampling == Sampling::Uniform(0) {
        return Err(Error::InvalidArgument(
            "need at least one sampling interval",
        ));
    }

    let rhs = move |s: State| {
        let g = phi(s[0], s[1]);
        [g * s[1], -g * odd_cube_root(s[0])]
    };
    let mut stepper = Stepper::new(
        rhs,
        0.0,
        [ic.x, ic.y],
        step_tol,
        initial_step(t_end, step_tol),
    )
    .with_crossing_factor(CROSSING_TOL_FACTOR);
    let mut traj = Trajectory::default();
    traj.push(0.0, ic);

    let targets = match sampling {
        Sampling::Steps => 1,
        Sampling::Uniform(n) => n,
    };
    let mut steps = 0;
    for j in 1..=targets {
        let target = match sampling {
            Sampling::Steps => t_end,
            Sampling::Uniform(n) => t_end * j as f64 / n as f64,
        };
        while stepper.t < target {
            if steps == MAX_STEPS {
                return Err(Error::Integration {
                    reason: "step budget exhausted",
                    partial: traj,
                });
            }
            if let Err(reason) = stepper.step(target) {
                return Err(Error::Integration {
                    reason,
                    partial: traj,
                });
            }
            steps += 1;
            if sampling == Sampling::Steps {
                traj.push(stepper.t, OscState::new(stepper.y[0], stepper.y[1]));
            }
        }
        if let Sampling::Uniform(_) = sampling {
            traj.push(target, OscState::new(stepper.y[0], stepper.y[1]));
        }
    }
    Ok(traj)
}

/// Period measured from the integrated orbit: the time between two
/// successive upward (`y` from negative to positive) velocity crossings, each
/// located by bisection to `1e-10` in `t`. Searches up to `max_time`.
pub fn crossing_period(ic: OscState, step_tol: f64, max_time: f64) -> Result<f64, Error> {
    if !(step_tol > 0.0 && max_time > 0.0) {
        return Err(Error::InvalidArgument(
            "tolerance and search window must be positive",
        ));
    }
    let rhs = |s: State| [s[1], -odd_cube_root(s[0])];
    let mut stepper = Stepper::new(
        rhs,
        0.0,
        [ic.x, ic.y],
        step_tol,
        initial_step(max_time, step_tol),
    )
    .with_crossing_factor(CROSSING_TOL_FACTOR);
    let mut crossings: Vec<f64> = Vec::with_capacity(2);
    let mut prev = (stepper.t, stepper.y);
    let mut steps = 0;
    while crossings.len() < 2 {
        if stepper.t >= max_time || steps == MAX_STEPS {
            return Err(Error::NoCrossing);
        }
        stepper
            .step(max_time)
            .map_err(|reason| Error::Integration {
                reason,
                partial: Trajectory::default(),
            })?;
        steps += 1;
        let now = (stepper.t, stepper.y);
        if prev.1[1] < 0.0 && now.1[1] >= 0.0 {
            crossings.push(refine_crossing(prev, now.0, step_tol)?);
        }
        prev = now;
    }
    Ok(crossings[1] - crossings[0])
}

/// Bisects for `y = 0` in `(t_lo, t_hi)` given the state at `t_lo` with
/// `y < 0`, re-integrating from `t_lo` for each probe.
fn refine_crossing(lo: (f64, State), t_hi: f64, step_tol: f64) -> Result<f64, Error> {
    let (t0, s0) = lo;
    let rhs = |s: State| [s[1], -odd_cube_root(s[0])];
    let y_at = |t: f64| -> Result<f64, Error> {
        let mut stepper = Stepper::new(rhs, t0, s0, step_tol, initial_step(t - t0, step_tol))
            .with_crossing_factor(CROSSING_TOL_FACTOR);
        while stepper.t < t {
            stepper.step(t).map_err(|reason| Error::Integration {
                reason,
                partial: Trajectory::default(),
            })?;
        }
        Ok(stepper.y[1])
    };
    let (mut a, mut b) = (t0, t_hi);
    let (mut ya, mut yb) = (s0[1], y_at(t_hi)?);
    while b - a > CROSSING_TIME_TOL {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            break;
        }
        let ym = y_at(m)?;
        if ym < 0.0 {
            (a, ya) = (m, ym);
        } else {
            (b, yb) = (m, ym);
        }
    }
    // Secant step inside the final bracket.
    Ok(if yb > ya {
        a - ya * (b - a) / (yb - ya)
    } else {
        0.5 * (a + b)
    })
}

/// `max |(2/3)y² + |x|^{4/3} - 1|` over paired samples.
pub fn check_solution(xs: &[f64], ys: &[f64]) -> Result<f64, Error> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument("x and y samples differ in length"));
    }
    if xs.is_empty() {
        return Err(Error::InvalidArgument("need at least one sample"));
    }
    Ok(xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| pair_residual(x, y).abs())
        .fold(0.0, f64::max))
}

/// Phase parameters recovered from a sampled solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFit {
    pub params: ImaniParams,
    /// `max |A(t_j) - Σ_{k≤K} a_k sin(2πk t_j/T)|` over one period of samples.
    pub fit_residual: f64,
    /// The samples traverse the level set clockwise (`y` is `-Isn` of the
    /// recovered phase rather than `Isn`). Oscillator orbits with
    /// `y = dx/dt` do this.
    pub reversed: bool,
}

/// Recovers `ψ` from a solution `(x(t), y(t))` of the functional equation and
/// projects `A(t) = ψ(t) - 2πt/T` onto `sin(2πkt/T)`, `k = 1..=order`.
///
/// With `u = sgn(x)|x|^{2/3} = cos ψ` and `v = √(2/3) y = sin ψ`, the angle of
/// `(u, v)` is unwrapped by adding `±2π` whenever consecutive raw angles jump
/// by more than `π`. A clockwise traversal is mirrored and flagged in
/// [`PhaseFit::reversed`]; `Ics` is even in `ψ`, so `x` is reproduced either
/// way. Samples must sit on a uniform grid whose spacing divides
/// `period`; the first full period of samples is projected with the periodic
/// trapezoid rule.
pub fn extract_phase(traj: &Trajectory, period: f64, order: usize) -> Result<PhaseFit, Error> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument("period must be positive and finite"));
    }
    if order == 0 {
        return Err(Error::InvalidArgument("need at least one harmonic"));
    }
    if traj.len() < 2 || traj.states.len() != traj.len() {
        return Err(Error::InvalidArgument(
            "trajectory needs at least two samples",
        ));
    }
    let dt = traj.t[1] - traj.t[0];
    if traj
        .t
        .windows(2)
        .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * period)
    {
        return Err(Error::InvalidArgument("samples must be uniformly spaced"));
    }
    let ratio = period / dt;
    let n = libm::round(ratio) as usize;
    if n == 0 || (ratio - n as f64).abs() > 1e-6 * ratio {
        return Err(Error::InvalidArgument(
            "sample spacing must divide the period",
        ));
    }
    if traj.len() < n {
        return Err(Error::InvalidArgument("trajectory must span a full period"));
    }
    // The carrier alone advances 2π/n per sample; at n ≤ 2 that is a half
    // turn or more and the unwrap direction is undetermined.
    if n <= 2 {
        return Err(Error::Undersampled { index: 0 });
    }

    let used = (n + 1).min(traj.len());
    let samples = &traj.states[..used];
    let max_residual = samples
        .iter()
        .map(|s| pair_residual(s.x, s.y).abs())
        .fold(0.0, f64::max);
    if !(max_residual <= SOLUTION_TOL) {
        return Err(Error::NotASolution { max_residual });
    }

    let omega = TAU / period;
    let raw: Vec<f64> = samples
        .iter()
        .map(|s| {
            let r = cbrt(s.x);
            atan2(s.y / ISN_AMPLITUDE, r * r.abs())
        })
        .collect();
    let mut psi = Vec::with_capacity(used);
    psi.push(raw[0]);
    for j in 0..used - 1 {
        let mut d = raw[j + 1] - raw[j];
        if ((d.abs() - PI).abs()) < 1e-9 {
            return Err(Error::Undersampled { index: j });
        }
        while d > PI {
            d -= TAU;
        }
        while d < -PI {
            d += TAU;
        }
        psi.push(psi[j] + d);
    }
    // A solution with y = dx/dt from a maximum of x winds clockwise; flip it
    // so the recovered phase advances and Isn reproduces -y.
    let reversed = psi[used - 1] < psi[0];
    if reversed {
        psi.iter_mut().for_each(|p| *p = -*p);
    }
    // Branch of the whole sequence: first sample nearest the carrier phase.
    let shift = TAU * libm::round((omega * traj.t[0] - psi[0]) / TAU);
    psi.iter_mut().for_each(|p| *p += shift);
    // One period later ψ must have gained exactly one turn.
    if used == n + 1 && (psi[n] - psi[0] - TAU).abs() > PI {
        return Err(Error::Undersampled { index: n - 1 });
    }

    let modulation: Vec<f64> = (0..n).map(|j| psi[j] - omega * traj.t[j]).collect();
    let mut coeffs = Vec::with_capacity(order);
    let mut projected = Vec::with_capacity(n);
    for k in 1..=order {
        let kw = k as f64 * omega;
        projected.clear();
        projected.extend((0..n).map(|j| modulation[j] * sin(kw * traj.t[j])));
        let integral = quadrature::periodic_trapezoid_samples(&projected, period)?;
        coeffs.push(2.0 / period * integral.value);
    }
    let params = ImaniParams::new(period, coeffs)?;
    let fit_residual = (0..n)
        .map(|j| (modulation[j] - params.modulation(traj.t[j])).abs())
        .fold(0.0, f64::max);
    Ok(PhaseFit {
        params,
        fit_residual,
        reversed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imani::imani_eval;
    use alloc::vec;

    #[test]
    fn hamiltonian_values() {
        assert_eq!(hamiltonian(OscState::new(1.0, 0.0)), 0.75);
        assert!((hamiltonian(OscState::new(0.0, ISN_AMPLITUDE)) - 0.75).abs() < 1e-15);
        assert_eq!(hamiltonian(OscState::new(0.0, 0.0)), 0.0);
        assert_eq!(hamiltonian(OscState::new(-8.0, 0.0)), 12.0);
    }

    #[test]
    fn period_bounds() {
        let t = leah_period().unwrap();
        assert!(t.error_estimate <= 1e-9);
        assert!(t.value > 4.0);
        assert!((t.value - 5.8697).abs() < 1e-4, "{t:?}");
    }

    #[test]
    fn fixed_point_stays_put() {
        let traj = integrate_leah(OscState::new(0.0, 0.0), 3.0, 1e-10).unwrap();
        assert!(traj.states.iter().all(|s| s.x == 0.0 && s.y == 0.0));
        assert_eq!(*traj.t.last().unwrap(), 3.0);
    }

    #[test]
    fn zero_gauge_is_stationary() {
        let ic = OscState::new(0.3, -0.4);
        let traj = generalized_flow(|_, _| 0.0, ic, 2.0, 1e-10).unwrap();
        assert!(traj.states.iter().all(|&s| s == ic));
    }

    #[test]
    fn uniform_sampling_hits_grid() {
        let traj = integrate_leah_uniform(OscState::new(1.0, 0.0), 2.0, 8, 1e-10).unwrap();
        assert_eq!(traj.len(), 9);
        for (j, t) in traj.t.iter().enumerate() {
            assert_eq!(*t, 2.0 * j as f64 / 8.0);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let ic = OscState::new(1.0, 0.0);
        assert!(integrate_leah(ic, 0.0, 1e-10).is_err());
        assert!(integrate_leah(ic, 1.0, 0.0).is_err());
        assert!(integrate_leah(OscState::new(f64::NAN, 0.0), 1.0, 1e-10).is_err());
        assert!(integrate_leah_uniform(ic, 1.0, 0, 1e-10).is_err());
    }

    #[test]
    fn nonfinite_gauge_fails_with_partial_trajectory() {
        let ic = OscState::new(1.0, 0.0);
        let err = generalized_flow(|_, _| f64::NAN, ic, 1.0, 1e-10).unwrap_err();
        match err {
            Error::Integration { partial, .. } => assert_eq!(partial.states, vec![ic]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn no_crossing_at_rest() {
        assert_eq!(
            crossing_period(OscState::new(0.0, 0.0), 1e-10, 50.0),
            Err(Error::NoCrossing)
        );
    }

    #[test]
    fn check_solution_fixtures() {
        assert_eq!(check_solution(&[1.0; 4], &[0.0; 4]).unwrap(), 0.0);
        assert!(check_solution(&[0.0; 4], &[ISN_AMPLITUDE; 4]).unwrap() <= 1e-15);
        let expected = 1.0 - libm::pow(0.5, 4.0 / 3.0);
        assert!((check_solution(&[0.5], &[0.0]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.603_150).abs() < 1e-6);
        assert!(check_solution(&[1.0], &[]).is_err());
        assert!(check_solution(&[], &[]).is_err());
    }

    fn imani_trajectory(params: &ImaniParams, n: usize) -> Trajectory {
        let t: Vec<f64> = (0..=n)
            .map(|j| params.period() * j as f64 / n as f64)
            .collect();
        let states = t
            .iter()
            .map(|&s| {
                let p = imani_eval(params, s);
                OscState::new(p.ics, p.isn)
            })
            .collect();
        Trajectory::from_samples(t, states).unwrap()
    }

    #[test]
    fn extract_single_term() {
        let params = ImaniParams::new(TAU, vec![0.3]).unwrap();
        let fit = extract_phase(&imani_trajectory(&params, 2048), TAU, 4).unwrap();
        let got = fit.params.coeffs();
        assert!((got[0] - 0.3).abs() < 1e-8);
        assert!(got[1..].iter().all(|a| a.abs() < 1e-8));
        assert!(fit.fit_residual < 1e-8);
    }

    #[test]
    fn extract_unmodulated() {
        let params = ImaniParams::unmodulated(3.0).unwrap();
        let fit = extract_phase(&imani_trajectory(&params, 512), 3.0, 6).unwrap();
        assert!(fit.params.coeffs().iter().all(|a| a.abs() <= 1e-10));
    }

    #[test]
    fn extract_rejects_non_solutions() {
        let t: Vec<f64> = (0..=16).map(|j| j as f64 / 16.0).collect();
        let states = vec![OscState::new(0.5, 0.0); 17];
        let traj = Trajectory::from_samples(t, states).unwrap();
        assert!(matches!(
            extract_phase(&traj, 1.0, 4),
            Err(Error::NotASolution { .. })
        ));
    }

    #[test]
    fn extract_rejects_undersampling() {
        let params = ImaniParams::unmodulated(1.0).unwrap();
        let traj = imani_trajectory(&params, 2);
        assert!(matches!(
            extract_phase(&traj, 1.0, 1),
            Err(Error::Undersampled { .. })
        ));
    }

    #[test]
    fn extract_rejects_misaligned_grid() {
        let params = ImaniParams::unmodulated(1.0).unwrap();
        let traj = imani_trajectory(&params, 64);
        assert!(matches!(
            extract_phase(&traj, 1.01, 4),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn trajectory_validation() {
        assert!(
            Trajectory::from_samples(vec![0.0, 0.0], vec![OscState::new(1.0, 0.0); 2]).is_err()
        );
        assert!(Trajectory::from_samples(vec![0.0], vec![]).is_err());
    }
}
