//! The phase `ψ(t) = A(t) + 2πt/T` with `A(t) = Σ_{k≥1} a_k sin(2πkt/T)`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{cos, sin};

use crate::error::Error;

/// Period `T` and the sine coefficients `a_1, a_2, …` of the phase modulation.
///
/// There is no constant or cosine term, so `A` is odd and `ψ(-t) = -ψ(t)` by
/// construction. An empty coefficient list means `A ≡ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaniParams {
    period: f64,
    coeffs: Vec<f64>,
}

/// `ψ(t)` and `ψ'(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseValue {
    pub psi: f64,
    pub dpsi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneReport {
    pub monotone: bool,
    pub min_dpsi: f64,
}

impl ImaniParams {
    pub fn new(period: f64, coeffs: Vec<f64>) -> Result<Self, Error> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidArgument("period must be positive and finite"));
        }
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("phase coefficients must be finite"));
        }
        Ok(Self { period, coeffs })
    }

    /// Pure linear phase `ψ(t) = 2πt/T`.
    pub fn unmodulated(period: f64) -> Result<Self, Error> {
        Self::new(period, Vec::new())
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `a_1, a_2, …`; index `i` holds harmonic `k = i + 1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn angular_frequency(&self) -> f64 {
        TAU / self.period
    }

    pub fn phase(&self, t: f64) -> PhaseValue {
        phase_eval(self, t)
    }

    /// `A(t)` alone.
    pub fn modulation(&self, t: f64) -> f64 {
        let w = self.angular_frequency();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * sin(w * (i + 1) as f64 * t))
            .sum()
    }
}

pub fn phase_eval(params: &ImaniParams, t: f64) -> PhaseValue {
    let w = params.angular_frequency();
    let mut a = 0.0;
    let mut da = 0.0;
    for (i, &ak) in params.coeffs.iter().enumerate() {
        let kw = w * (i + 1) as f64;
        a += ak * sin(kw * t);
        da += ak * kw * cos(kw * t);
    }
    PhaseValue {
        psi: a + w * t,
        dpsi: da + w,
    }
}

/// Largest violation of `ψ(-t) = -ψ(t)` and `ψ(t+T) = ψ(t) + 2π` on a
/// `grid_size`-point grid spanning `[-T, T]`.
pub fn check_phase_laws(params: &ImaniParams, grid_size: usize) -> Result<f64, Error> {
    if grid_size < 8 {
        return Err(Error::InvalidArgument("grid_size must be at least 8"));
    }
    let period = params.period;
    let mut worst: f64 = 0.0;
    for j in 0..grid_size {
        let t = -period + 2.0 * period * j as f64 / (grid_size - 1) as f64;
        let here = phase_eval(params, t).psi;
        let odd = (phase_eval(params, -t).psi + here).abs();
        let wind = (phase_eval(params, t + period).psi - here - 2.0 * PI).abs();
        worst = worst.max(odd).max(wind);
    }
    Ok(worst)
}

/// Scans `ψ'` over one period. The grid has `max(4096, 64K)` points, which
/// resolves the `K`-th harmonic with 64 samples per cycle.
pub fn is_monotone(params: &ImaniParams) -> MonotoneReport {
    let n = (64 * params.coeffs.len()).max(4096);
    let min_dpsi = (0..n)
        .map(|j| phase_eval(params, params.period * j as f64 / n as f64).dpsi)
        .fold(f64::INFINITY, f64::min);
    MonotoneReport {
        monotone: min_dpsi > 0.0,
        min_dpsi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params(period: f64, coeffs: &[f64]) -> ImaniParams {
        ImaniParams::new(period, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn linear_phase() {
        let p = params(TAU, &[]);
        assert_eq!(
            phase_eval(&p, 1.0),
            PhaseValue {
                psi: 1.0,
                dpsi: 1.0
            }
        );
    }

    #[test]
    fn zero_at_origin() {
        for p in [
            params(TAU, &[0.3]),
            params(5.0, &[0.1, -0.2, 0.7]),
            params(0.1, &[]),
        ] {
            assert_eq!(phase_eval(&p, 0.0).psi, 0.0);
        }
    }

    #[test]
    fn full_turn_after_one_period() {
        let p = params(TAU, &[0.3]);
        assert!((phase_eval(&p, TAU).psi - TAU).abs() < 1e-15);
    }

    #[test]
    fn phase_laws_hold() {
        assert!(check_phase_laws(&params(TAU, &[0.3]), 101).unwrap() <= 1e-12);
        assert!(check_phase_laws(&params(5.0, &[0.1, -0.2]), 101).unwrap() <= 1e-12);
        assert!(check_phase_laws(&params(3.0, &[]), 101).unwrap() <= 1e-14);
        assert!(check_phase_laws(&params(3.0, &[]), 7).is_err());
    }

    #[test]
    fn monotone_detection() {
        // Independent dense scan of 1 + a cos t at 10^5 points.
        let scan = |a: f64| {
            (0..100_000)
                .map(|j| 1.0 + a * libm::cos(TAU * j as f64 / 100_000.0))
                .fold(f64::INFINITY, f64::min)
        };
        let r = is_monotone(&params(TAU, &[0.5]));
        assert!(r.monotone);
        assert!((r.min_dpsi - scan(0.5)).abs() < 1e-12);
        assert!((r.min_dpsi - 0.5).abs() < 1e-12);

        let r = is_monotone(&params(TAU, &[1.5]));
        assert!(!r.monotone);
        assert!(scan(1.5) < 0.0);

        let r = is_monotone(&params(4.0, &[]));
        assert!(r.monotone);
        assert!((r.min_dpsi - TAU / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ImaniParams::new(0.0, vec![]).is_err());
        assert!(ImaniParams::new(-1.0, vec![]).is_err());
        assert!(ImaniParams::new(1.0, vec![f64::NAN]).is_err());
        assert!(ImaniParams::new(f64::INFINITY, vec![]).is_err());
    }

    #[test]
    fn modulation_matches_phase_minus_carrier() {
        let p = params(3.0, &[0.2, -0.1, 0.05]);
        for t in [-2.0, -0.3, 0.0, 0.7, 4.1] {
            let diff = phase_eval(&p, t).psi - p.angular_frequency() * t;
            assert!((p.modulation(t) - diff).abs() < 1e-14);
        }
    }
}
