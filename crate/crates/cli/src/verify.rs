//! The invariant suite behind `imani verify`.

use std::fmt;

use imani_core::fourier::{analyze_samples, odd_harmonic_defect};
use imani_core::imani::{imani_derivatives, imani_eval, residual};
use imani_core::leah::{
    extract_phase, integrate_leah, integrate_leah_uniform, leah_period, OscState,
};
use imani_core::phase::{check_phase_laws, is_monotone, phase_eval};
use imani_core::{ImaniParams, Trajectory};

pub const RESIDUAL_TOL: f64 = 1e-12;
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const DERIVATIVE_TOL: f64 = 1e-5;
/// Looser bound where `|cos ψ| ≤ CUSP_BAND` and `Ics` has unbounded curvature.
pub const DERIVATIVE_CUSP_TOL: f64 = 1e-3;
pub const CUSP_BAND: f64 = 1e-3;
pub const FD_STEP: f64 = 1e-6;
pub const ENERGY_TOL: f64 = 1e-8;
pub const ENERGY_PERIODS: f64 = 10.0;
pub const ODD_HARMONIC_TOL: f64 = 1e-6;
pub const ODD_HARMONIC_ORDER: usize = 12;
pub const ROUND_TRIP_TOL: f64 = 1e-8;
/// Samples per period for spectra and phase extraction.
pub const ORBIT_SAMPLES: usize = 4096;
const ROUND_TRIP_MIN_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// Largest deviation observed; for the derivative check, the largest
    /// ratio of deviation to its local tolerance.
    pub max_violation: f64,
    pub tolerance: f64,
    pub note: String,
}

impl Check {
    fn measured(name: &'static str, max_violation: f64, tolerance: f64) -> Self {
        let status = if max_violation <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name,
            status,
            max_violation,
            tolerance,
            note: String::new(),
        }
    }

    fn failed(name: &'static str, tolerance: f64, note: impl Into<String>) -> Self {
        Check {
            name,
            status: Status::Fail,
            max_violation: f64::NAN,
            tolerance,
            note: note.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(
            f,
            "{tag} {:<16} max {:.3e} tol {:.0e}",
            self.name, self.max_violation, self.tolerance
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// `points` times spread evenly over `[-2T, 2T]`.
fn check_times(params: &ImaniParams, points: usize) -> impl Iterator<Item = f64> + '_ {
    let span = 4.0 * params.period();
    let n = points.max(2);
    (0..n).map(move |j| -0.5 * span + span * j as f64 / (n - 1) as f64)
}

fn max_over(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m: f64, v| {
        if m.is_nan() || v.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

pub fn residual_check(params: &ImaniParams, points: usize) -> Check {
    let worst = max_over(check_times(params, points).map(|t| residual(params, t).abs()));
    Check::measured("residual", worst, RESIDUAL_TOL)
}

/// `Ics` even and `Isn` odd.
pub fn parity_check(params: &ImaniParams, points: usize) -> Check {
    let worst = max_over(check_times(params, points).map(|t| {
        let (a, b) = (imani_eval(params, t), imani_eval(params, -t));
        (a.ics - b.ics).abs().max((a.isn + b.isn).abs())
    }));
    Check::measured("parity", worst, SYMMETRY_TOL)
}

pub fn periodicity_check(params: &ImaniParams, points: usize) -> Check {
    let worst = max_over(check_times(params, points).map(|t| {
        let (a, b) = (
            imani_eval(params, t),
            imani_eval(params, t + params.period()),
        );
        (a.ics - b.ics).abs().max((a.isn - b.isn).abs())
    }));
    Check::measured("periodicity", worst, SYMMETRY_TOL)
}

pub fn phase_law_check(params: &ImaniParams, points: usize) -> Check {
    match check_phase_laws(params, points.max(8)) {
        Ok(v) => Check::measured("phase laws", v, SYMMETRY_TOL),
        Err(e) => Check::failed("phase laws", SYMMETRY_TOL, e.to_string()),
    }
}

/// Central differences against the analytic derivatives. Passes when every
/// point is within its local tolerance.
pub fn derivative_check(params: &ImaniParams, points: usize) -> Check {
    let ratio = max_over(check_times(params, points).map(|t| derivative_ratio(params, t)));
    Check::measured("derivatives", ratio, 1.0)
}

/// Deviation of the analytic derivatives from central differences at `t`,
/// divided by the tolerance that applies there.
pub fn derivative_ratio(params: &ImaniParams, t: f64) -> f64 {
    let (plus, minus) = (
        imani_eval(params, t + FD_STEP),
        imani_eval(params, t - FD_STEP),
    );
    let (dics, disn) = imani_derivatives(params, t);
    let fd_ics = (plus.ics - minus.ics) / (2.0 * FD_STEP);
    let fd_isn = (plus.isn - minus.isn) / (2.0 * FD_STEP);
    let tol = if phase_eval(params, t).psi.cos().abs() > CUSP_BAND {
        DERIVATIVE_TOL
    } else {
        DERIVATIVE_CUSP_TOL
    };
    (dics - fd_ics).abs().max((disn - fd_isn).abs()) / tol
}

/// `|H - 3/4|` along ten periods of the Leah orbit through `(1, 0)`.
pub fn energy_check(tol: f64) -> Check {
    let run = || -> Result<f64, imani_core::Error> {
        let period = leah_period()?.value;
        let traj = integrate_leah(OscState::new(1.0, 0.0), ENERGY_PERIODS * period, tol)?;
        Ok(traj.max_energy_drift(0.75))
    };
    match run() {
        Ok(drift) => Check::measured("energy", drift, ENERGY_TOL),
        Err(e) => Check::failed("energy", ENERGY_TOL, e.to_string()),
    }
}

/// One period of the Leah orbit through `(1, 0)` on `samples` uniform intervals.
pub fn leah_orbit(samples: usize, tol: f64) -> Result<(f64, Trajectory), imani_core::Error> {
    let period = leah_period()?.value;
    let traj = integrate_leah_uniform(OscState::new(1.0, 0.0), period, samples, tol)?;
    Ok((period, traj))
}

/// Defect of the Leah orbit's spectrum relative to its largest coefficient.
pub fn odd_harmonic_check(tol: f64) -> Check {
    let run = || -> Result<f64, imani_core::Error> {
        let (period, traj) = leah_orbit(ORBIT_SAMPLES, tol)?;
        let xs: Vec<f64> = traj.states[..ORBIT_SAMPLES].iter().map(|s| s.x).collect();
        let spec = analyze_samples(&xs, period, ODD_HARMONIC_ORDER)?;
        Ok(odd_harmonic_defect(&spec) / spec.largest_coefficient())
    };
    match run() {
        Ok(v) => Check::measured("odd harmonics", v, ODD_HARMONIC_TOL),
        Err(e) => Check::failed("odd harmonics", ODD_HARMONIC_TOL, e.to_string()),
    }
}

/// Samples `params` over one period and recovers its coefficients. Skipped
/// when the phase is not monotone, since the samples then do not determine
/// `ψ` uniquely.
pub fn round_trip_check(params: &ImaniParams) -> Check {
    let name = "phase round trip";
    let report = is_monotone(params);
    if !report.monotone {
        return Check {
            name,
            status: Status::Skip,
            max_violation: f64::NAN,
            tolerance: ROUND_TRIP_TOL,
            note: format!("phase not monotone, min dpsi {:.3e}", report.min_dpsi),
        };
    }
    match round_trip_error(params, ORBIT_SAMPLES) {
        Ok(v) => Check::measured(name, v, ROUND_TRIP_TOL),
        Err(e) => Check::failed(name, ROUND_TRIP_TOL, e.to_string()),
    }
}

/// Largest coefficient error of `extract_phase` applied to samples of `params`.
pub fn round_trip_error(params: &ImaniParams, samples: usize) -> Result<f64, imani_core::Error> {
    let period = params.period();
    let t: Vec<f64> = (0..=samples)
        .map(|j| period * j as f64 / samples as f64)
        .collect();
    let states = t
        .iter()
        .map(|&s| {
            let p = imani_eval(params, s);
            OscState::new(p.ics, p.isn)
        })
        .collect();
    let traj = Trajectory::from_samples(t, states)?;
    let order = params.coeffs().len().max(ROUND_TRIP_MIN_ORDER);
    let fit = extract_phase(&traj, period, order)?;
    let worst = (0..order)
        .map(|k| {
            let expected = params.coeffs().get(k).copied().unwrap_or(0.0);
            (fit.params.coeffs()[k] - expected).abs()
        })
        .fold(0.0, f64::max);
    Ok(if fit.reversed { f64::INFINITY } else { worst })
}

/// Every check, in report order.
pub fn run_suite(params: &ImaniParams, points: usize, tol: f64) -> Vec<Check> {
    vec![
        residual_check(params, points),
        parity_check(params, points),
        periodicity_check(params, points),
        phase_law_check(params, points),
        derivative_check(params, points),
        energy_check(tol),
        odd_harmonic_check(tol),
        round_trip_check(params),
    ]
}
