//! Dormand-Prince 5(4) stepper for planar autonomous systems.

use libm::pow;

pub(crate) type State = [f64; 2];

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
// Fifth-order weights; also the last stage row (FSAL).
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Fifth minus embedded fourth order.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

pub(crate) struct Stepper<F> {
    rhs: F,
    pub t: f64,
    pub y: State,
    h: f64,
    tol: f64,
    k1: State,
    /// Tolerance multiplier for steps across which the first component
    /// changes sign.
    crossing_factor: f64,
}

fn axpy(y: &State, h: f64, coeffs: &[f64], ks: &[State]) -> State {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks) {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

impl<F: Fn(State) -> State> Stepper<F> {
    pub fn new(rhs: F, t: f64, y: State, tol: f64, h0: f64) -> Self {
        let k1 = rhs(y);
        Stepper {
            rhs,
            t,
            y,
            h: h0,
            tol,
            k1,
            crossing_factor: 1.0,
        }
    }

    pub fn with_crossing_factor(mut self, factor: f64) -> Self {
        self.crossing_factor = factor;
        self
    }

    /// Takes one accepted step that does not pass `t_limit`. Lands exactly on
    /// `t_limit` when the remaining distance fits in the step.
    pub fn step(&mut self, t_limit: f64) -> Result<(), &'static str> {
        let remaining = t_limit - self.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        let mut h = self.h.min(remaining);
        loop {
            let clamped = h >= remaining;
            let k1 = self.k1;
            let y = self.y;
            let f = &self.rhs;
            let k2 = f(axpy(&y, h, &A2, &[k1]));
            let k3 = f(axpy(&y, h, &A3, &[k1, k2]));
            let k4 = f(axpy(&y, h, &A4, &[k1, k2, k3]));
            let k5 = f(axpy(&y, h, &A5, &[k1, k2, k3, k4]));
            let k6 = f(axpy(&y, h, &A6, &[k1, k2, k3, k4, k5]));
            let y_new = axpy(&y, h, &B, &[k1, k2, k3, k4, k5, k6]);
            let k7 = f(y_new);
            let ks = [k1, k2, k3, k4, k5, k6, k7];

            let tol = if y[0] * y_new[0] <= 0.0 && y != y_new {
                self.tol * self.crossing_factor
            } else {
                self.tol
            };
            let mut err: f64 = 0.0;
            for i in 0..2 {
                let e: f64 = E.iter().zip(&ks).map(|(c, k)| c * k[i]).sum::<f64>() * h;
                let scale = tol * y[i].abs().max(y_new[i].abs()).max(1.0);
                err = err.max(e.abs() / scale);
            }
            if !(err.is_finite() && y_new.iter().all(|v| v.is_finite())) {
                err = f64::INFINITY;
            }

            if err <= 1.0 {
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * pow(err, -0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                self.t = if clamped { t_limit } else { self.t + h };
                self.y = y_new;
                self.k1 = k7;
                let proposal = h * factor;
                self.h = if clamped {
                    self.h.max(proposal)
                } else {
                    proposal
                };
                return Ok(());
            }

            let factor = if err.is_finite() {
                (SAFETY * pow(err, -0.2)).max(MIN_FACTOR)
            } else {
                MIN_FACTOR
            };
            h *= factor;
            if h <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err("step size underflow");
            }
        }
    }
}

/// Initial step guess: a fraction of the span, shrunk for tight tolerances.
pub(crate) fn initial_step(span: f64, tol: f64) -> f64 {
    (0.1 * pow(tol, 0.2)).min(0.01 * span.abs()).max(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_returns_after_two_pi() {
        let mut s = Stepper::new(|y: State| [y[1], -y[0]], 0.0, [1.0, 0.0], 1e-12, 1e-3);
        let end = core::f64::consts::TAU;
        while s.t < end {
            s.step(end).unwrap();
        }
        assert_eq!(s.t, end);
        assert!((s.y[0] - 1.0).abs() < 1e-10 && s.y[1].abs() < 1e-10);
    }

    #[test]
    fn exponential_decay() {
        let mut s = Stepper::new(|y: State| [-y[0], 0.0], 0.0, [1.0, 0.0], 1e-11, 1e-3);
        while s.t < 3.0 {
            s.step(3.0).unwrap();
        }
        assert!((s.y[0] - libm::exp(-3.0)).abs() < 1e-10);
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y², y(0) = 1 blows up at t = 1.
        let mut s = Stepper::new(|y: State| [y[0] * y[0], 0.0], 0.0, [1.0, 0.0], 1e-10, 1e-3);
        let mut failed = false;
        for _ in 0..100_000 {
            if s.step(2.0).is_err() {
                failed = true;
                break;
            }
        }
        assert!(failed);
        assert!(s.t < 1.0);
    }
}
