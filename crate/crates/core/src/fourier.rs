//! Trapezoid-rule Fourier analysis of periodic functions.
//!
//! `f(t) ≈ a₀ + Σ_{k=1}^{K} (a_k cos(2πkt/T) + b_k sin(2πkt/T))`, with the
//! coefficients projected by the periodic trapezoid rule on a uniform grid.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use libm::{cos, sin};

use crate::quadrature::{self, QuadError};

/// Smallest sample count [`default_samples`] will pick.
pub const MIN_DEFAULT_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub period: f64,
    /// `a₀..=a_K`; `a₀` is the mean.
    pub cos_coeffs: Vec<f64>,
    /// `b₁..=b_K`, stored from index 0.
    pub sin_coeffs: Vec<f64>,
    /// Mean power not captured by the partial sum, clamped at zero.
    pub tail_energy: f64,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.sin_coeffs.len()
    }

    /// Largest absolute coefficient of either kind.
    pub fn largest_coefficient(&self) -> f64 {
        self.cos_coeffs
            .iter()
            .chain(&self.sin_coeffs)
            .map(|c| c.abs())
            .fold(0.0, f64::max)
    }

    /// Mean power of the truncated series, `a₀² + ½Σ(a_k² + b_k²)`.
    pub fn partial_power(&self) -> f64 {
        let a0 = self.cos_coeffs.first().copied().unwrap_or(0.0);
        let rest: f64 = self
            .cos_coeffs
            .iter()
            .skip(1)
            .chain(&self.sin_coeffs)
            .map(|c| c * c)
            .sum();
        a0 * a0 + 0.5 * rest
    }
}

/// `max(4K + 4, 4096)`.
pub fn default_samples(order: usize) -> usize {
    (4 * order + 4).max(MIN_DEFAULT_SAMPLES)
}

/// Samples `f` at `n` uniform points over one period and projects it.
pub fn analyze<F: Fn(f64) -> f64>(
    f: F,
    period: f64,
    order: usize,
    n: usize,
) -> Result<Spectrum, QuadError> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(QuadError::InvalidInput(
            "period must be positive and finite",
        ));
    }
    let samples: Vec<f64> = (0..n).map(|j| f(period * j as f64 / n as f64)).collect();
    analyze_samples(&samples, period, order)
}

/// Projects values already sampled at `t_j = j·period/n`, `n = samples.len()`.
pub fn analyze_samples(samples: &[f64], period: f64, order: usize) -> Result<Spectrum, QuadError> {
    let n = samples.len();
    if n < 4 * order + 4 {
        return Err(QuadError::InvalidInput("need at least 4K + 4 samples"));
    }
    let omega = TAU / period;
    let mut buf = Vec::with_capacity(n);
    let mut project = |basis: &dyn Fn(f64) -> f64| -> Result<f64, QuadError> {
        buf.clear();
        buf.extend(
            samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * basis(period * j as f64 / n as f64)),
        );
        Ok(quadrature::periodic_trapezoid_samples(&buf, period)?.value / period)
    };

    let mut cos_coeffs = Vec::with_capacity(order + 1);
    let mut sin_coeffs = Vec::with_capacity(order);
    cos_coeffs.push(project(&|_| 1.0)?);
    for k in 1..=order {
        let kw = k as f64 * omega;
        cos_coeffs.push(2.0 * project(&|t| cos(kw * t))?);
        sin_coeffs.push(2.0 * project(&|t| sin(kw * t))?);
    }
    let mean_power = samples.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let mut spec = Spectrum {
        period,
        cos_coeffs,
        sin_coeffs,
        tail_energy: 0.0,
    };
    spec.tail_energy = (mean_power - spec.partial_power()).max(0.0);
    Ok(spec)
}

/// Largest coefficient that a function with only odd harmonics
/// (`f(t + T/2) = -f(t)`) would have as zero: the mean, every even-order
/// cosine term, and every sine term.
pub fn odd_harmonic_defect(spec: &Spectrum) -> f64 {
    let even_cos = spec.cos_coeffs.iter().step_by(2);
    even_cos
        .chain(&spec.sin_coeffs)
        .map(|c| c.abs())
        .fold(0.0, f64::max)
}

/// Partial sum of `spec` at `t`.
pub fn synthesize(spec: &Spectrum, t: f64) -> f64 {
    let omega = TAU / spec.period;
    let mut acc = spec.cos_coeffs.first().copied().unwrap_or(0.0);
    for (i, a) in spec.cos_coeffs.iter().enumerate().skip(1) {
        acc += a * cos(i as f64 * omega * t);
    }
    for (i, b) in spec.sin_coeffs.iter().enumerate() {
        acc += b * sin((i + 1) as f64 * omega * t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imani::imani_eval;
    use crate::phase::ImaniParams;

    #[test]
    fn pure_cosine() {
        let spec = analyze(|t| cos(TAU * t / 3.0), 3.0, 5, 64).unwrap();
        assert!((spec.cos_coeffs[1] - 1.0).abs() < 1e-12);
        for (k, a) in spec.cos_coeffs.iter().enumerate() {
            if k != 1 {
                assert!(a.abs() < 1e-12);
            }
        }
        assert!(spec.sin_coeffs.iter().all(|b| b.abs() < 1e-12));
        assert!(odd_harmonic_defect(&spec) < 1e-12);
        assert!(spec.tail_energy < 1e-12);
    }

    #[test]
    fn constant() {
        let spec = analyze(|_| 1.0, 2.0, 3, 16).unwrap();
        assert!((spec.cos_coeffs[0] - 1.0).abs() < 1e-15);
        assert!(spec.cos_coeffs[1..].iter().all(|a| a.abs() < 1e-15));
    }

    #[test]
    fn sine_has_unit_defect() {
        let spec = analyze(sin, TAU, 4, 64).unwrap();
        assert!((odd_harmonic_defect(&spec) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn synthesize_cosine_at_origin() {
        let spec = analyze(cos, TAU, 4, 64).unwrap();
        assert!((synthesize(&spec, 0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        assert!(analyze(cos, TAU, 4, 19).is_err());
        assert!(analyze(cos, TAU, 4, 20).is_ok());
    }

    #[test]
    fn unmodulated_ics_has_odd_harmonics_only() {
        let params = ImaniParams::unmodulated(TAU).unwrap();
        let ics = |t: f64| imani_eval(&params, t).ics;
        // Half-period antisymmetry forces the odd-harmonic structure.
        for j in 0..100 {
            let t = 0.0628 * j as f64;
            assert!((ics(t + core::f64::consts::PI) + ics(t)).abs() < 1e-14);
        }
        let spec = analyze(ics, TAU, 9, default_samples(9)).unwrap();
        assert!(odd_harmonic_defect(&spec) <= 1e-10);
        let odd: alloc::vec::Vec<f64> =
            spec.cos_coeffs.iter().skip(1).step_by(2).copied().collect();
        // Reference values from 30-digit adaptive quadrature of (2/π)∫₀^π Ics cos(kt).
        // Signs alternate from k = 5 on; magnitudes decrease.
        let reference = [
            0.915_311_716_202_176,
            0.101_701_301_800_242,
            -0.023_469_531_184_671_2,
            0.009_663_924_605_452_84,
            -0.005_062_055_745_713_39,
        ];
        for (a, r) in odd.iter().zip(reference) {
            assert!((a - r).abs() < 1e-10, "{odd:?}");
        }
        assert!(odd.windows(2).all(|w| w[1].abs() < w[0].abs()), "{odd:?}");
    }
}
