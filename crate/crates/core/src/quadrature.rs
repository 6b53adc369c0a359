//! Numerical integration primitives.
//!
//! Three entry points:
//!
//! * [`periodic_trapezoid`] / [`periodic_trapezoid_samples`]: the composite
//!   trapezoid rule over one period, spectrally accurate for smooth periodic
//!   integrands. The error estimate compares the full grid with the grid of
//!   half the size.
//! * [`adaptive`]: globally adaptive 7/15-point Gauss-Kronrod bisection for
//!   integrands that are finite on the closed interval.
//! * [`adaptive_singular`]: integrands that may be unbounded (but integrable)
//!   at either endpoint. Each half of the interval is cut into panels that
//!   halve in width towards its endpoint, each panel is integrated with
//!   [`adaptive`], and the sequence of partial sums is accelerated with Wynn's
//!   epsilon algorithm. Gauss-Kronrod nodes are interior, so `f` is never
//!   evaluated at `a` or `b`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Default absolute tolerance for the adaptive rules.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Maximum bisection depth for any subinterval, and maximum number of
/// endpoint panels.
pub const MAX_DEPTH: u32 = 60;

const MAX_SEGMENTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate, never negative.
    pub error_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    InvalidInput(&'static str),
    /// The integrand returned a non-finite value at `at`.
    EvaluationFailure {
        at: f64,
        value: f64,
    },
    /// Tolerance not met within the subdivision limits. `best` holds the
    /// estimate reached so far.
    ConvergenceFailure {
        best: QuadResult,
    },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            QuadError::EvaluationFailure { at, value } => {
                write!(f, "integrand is {value} at t = {at}")
            }
            QuadError::ConvergenceFailure { best } => write!(
                f,
                "no convergence: best estimate {} with error {:e}",
                best.value, best.error_estimate
            ),
        }
    }
}

impl core::error::Error for QuadError {}

fn checked<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64, QuadError> {
    let value = f(t);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::EvaluationFailure { at: t, value })
    }
}

/// Composite trapezoid rule `(period/n) Σ f(j·period/n)`, `j = 0..n`.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(
    f: F,
    period: f64,
    n: usize,
) -> Result<QuadResult, QuadError> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(QuadError::InvalidInput(
            "period must be positive and finite",
        ));
    }
    if n < 2 {
        return Err(QuadError::InvalidInput("need at least two nodes"));
    }
    let h = period / n as f64;
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        values.push(checked(&f, j as f64 * h)?);
    }
    if n.is_multiple_of(2) {
        return periodic_trapezoid_samples(&values, period);
    }
    // Odd n: the half-size grid is not nested and needs its own nodes.
    let fine = h * values.iter().sum::<f64>();
    let m = n / 2;
    let hc = period / m as f64;
    let mut coarse = 0.0;
    for j in 0..m {
        coarse += checked(&f, j as f64 * hc)?;
    }
    coarse *= hc;
    Ok(QuadResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        evaluations: n + m,
    })
}

/// Trapezoid rule on values already sampled at `j·period/n`, `n = values.len()`.
pub fn periodic_trapezoid_samples(values: &[f64], period: f64) -> Result<QuadResult, QuadError> {
    let n = values.len();
    if !(period > 0.0 && period.is_finite()) {
        return Err(QuadError::InvalidInput(
            "period must be positive and finite",
        ));
    }
    if n < 2 {
        return Err(QuadError::InvalidInput("need at least two nodes"));
    }
    let h = period / n as f64;
    let mut fine = 0.0;
    let mut even = 0.0;
    for (j, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(QuadError::EvaluationFailure {
                at: j as f64 * h,
                value: v,
            });
        }
        fine += v;
        if j % 2 == 0 {
            even += v;
        }
    }
    let fine = h * fine;
    let error_estimate = if n.is_multiple_of(2) {
        (fine - 2.0 * h * even).abs()
    } else {
        // Not nested; fall back to the stride-2 subset with its own spacing.
        let m = n.div_ceil(2);
        (fine - period / m as f64 * even).abs()
    };
    Ok(QuadResult {
        value: fine,
        error_estimate,
        evaluations: n,
    })
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]. Odd indices of
// `XGK` are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel. Returns the Kronrod value and `|K - G|`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = checked(f, center - dx)? + checked(f, center + dx)?;
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn validate_interval(a: f64, b: f64, tol: f64) -> Result<(), QuadError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(QuadError::InvalidInput("interval endpoints must be finite"));
    }
    if !(a < b) {
        return Err(QuadError::InvalidInput("need a < b"));
    }
    if !(tol > 0.0) {
        return Err(QuadError::InvalidInput("tolerance must be positive"));
    }
    Ok(())
}

/// Globally adaptive Gauss-Kronrod integration over `[a, b]`: the segment with
/// the largest error is bisected until the summed error is at most `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    validate_interval(a, b, tol)?;
    adaptive_unchecked(&f, a, b, tol)
}

fn adaptive_unchecked<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    let (value, error) = gk15(f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    });
    let mut total_value = value;
    let mut total_error = error;

    while total_error > tol {
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = worst.a + 0.5 * (worst.b - worst.a);
        if worst.depth >= MAX_DEPTH
            || heap.len() + 2 > MAX_SEGMENTS
            || !(worst.a < mid && mid < worst.b)
        {
            heap.push(worst);
            let (v, e) = resum(&heap);
            return Err(QuadError::ConvergenceFailure {
                best: QuadResult {
                    value: v,
                    error_estimate: e,
                    evaluations,
                },
            });
        }
        let (lv, le) = gk15(f, worst.a, mid)?;
        let (rv, re) = gk15(f, mid, worst.b)?;
        evaluations += 30;
        total_value += lv + rv - worst.value;
        total_error += le + re - worst.error;
        let depth = worst.depth + 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            depth,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            depth,
        });
        // Running sums drift; recompute once they claim convergence.
        if total_error <= tol {
            (total_value, total_error) = resum(&heap);
        }
    }
    Ok(QuadResult {
        value: total_value,
        error_estimate: total_error,
        evaluations,
    })
}

fn resum(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    heap.iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Integrates `f` over `[a, b]` where `f` may blow up at either endpoint.
///
/// The interval is split at its midpoint. Each half is covered by panels
/// whose widths halve towards the outer endpoint, and the running panel sums
/// are extrapolated to the limit with Wynn's epsilon algorithm. Panels stop
/// once their width drops below `1e-7` of the interval (closer than that the
/// abscissae themselves lose relative precision near a nonzero endpoint),
/// after [`MAX_DEPTH`] panels, or when the extrapolated value settles.
pub fn adaptive_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    validate_interval(a, b, tol)?;
    let mid = a + 0.5 * (b - a);
    let left = endpoint_half(&f, a, mid, 0.5 * tol, b - a);
    let right = endpoint_half(&f, b, mid, 0.5 * tol, b - a);
    match (left, right) {
        (Ok(l), Ok(r)) => Ok(combine(l, r)),
        (Err(QuadError::ConvergenceFailure { best: l }), Ok(r))
        | (Ok(l), Err(QuadError::ConvergenceFailure { best: r }))
        | (
            Err(QuadError::ConvergenceFailure { best: l }),
            Err(QuadError::ConvergenceFailure { best: r }),
        ) => Err(QuadError::ConvergenceFailure {
            best: combine(l, r),
        }),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn combine(l: QuadResult, r: QuadResult) -> QuadResult {
    QuadResult {
        value: l.value + r.value,
        error_estimate: l.error_estimate + r.error_estimate,
        evaluations: l.evaluations + r.evaluations,
    }
}

/// `∫` between `inner` and the possibly singular `end`, signed so that the
/// result is the integral over the interval in increasing direction.
fn endpoint_half<F: Fn(f64) -> f64>(
    f: &F,
    end: f64,
    inner: f64,
    tol: f64,
    length: f64,
) -> Result<QuadResult, QuadError> {
    const MIN_PANELS: usize = 6;
    let width0 = (inner - end).abs();
    let toward = if inner > end { 1.0 } else { -1.0 };
    let floor = 1e-7 * length;
    let panel_tol = tol / (8.0 * MAX_DEPTH as f64);

    let mut sums: Vec<f64> = Vec::with_capacity(MAX_DEPTH as usize);
    let mut panel_error = 0.0;
    let mut evaluations = 0;
    let mut running = 0.0;
    let mut history: Vec<f64> = Vec::new();
    let mut best = QuadResult {
        value: 0.0,
        error_estimate: f64::INFINITY,
        evaluations: 0,
    };

    let mut outer = width0;
    for _ in 0..MAX_DEPTH {
        let near = 0.5 * outer;
        let (lo, hi) = if toward > 0.0 {
            (end + near, end + outer)
        } else {
            (end - outer, end - near)
        };
        if !(lo < hi) {
            break;
        }
        let panel = adaptive_unchecked(f, lo, hi, panel_tol)?;
        evaluations += panel.evaluations;
        panel_error += panel.error_estimate;
        running += panel.value;
        sums.push(running);
        outer = near;

        let (estimate, spread) = epsilon_limit(&sums);
        history.push(estimate);
        let n = history.len();
        let drift = if n >= 3 {
            (history[n - 1] - history[n - 2])
                .abs()
                .max((history[n - 1] - history[n - 3]).abs())
        } else {
            f64::INFINITY
        };
        let error_estimate = spread.max(drift) + panel_error;
        if error_estimate <= best.error_estimate || !best.error_estimate.is_finite() {
            best = QuadResult {
                value: estimate,
                error_estimate,
                evaluations,
            };
        }
        best.evaluations = evaluations;
        if sums.len() >= MIN_PANELS && best.error_estimate <= tol {
            return Ok(best);
        }
        if outer < floor {
            break;
        }
    }
    if best.error_estimate <= tol {
        Ok(best)
    } else {
        Err(QuadError::ConvergenceFailure { best })
    }
}

/// Wynn's epsilon table for `seq`. Returns the even-column entry whose two
/// most recent values agree best, together with that disagreement.
fn epsilon_limit(seq: &[f64]) -> (f64, f64) {
    let n = seq.len();
    let last = seq[n - 1];
    if n < 3 {
        let spread = if n == 2 {
            (seq[1] - seq[0]).abs()
        } else {
            f64::INFINITY
        };
        return (last, spread);
    }
    let mut best = (last, (seq[n - 1] - seq[n - 2]).abs());

    // prev = column k-1, cur = column k.
    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut k = 0;
    loop {
        if cur.len() < 2 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                break;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if next.len() < cur.len() - 1 || next.iter().any(|v| !v.is_finite()) {
            break;
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 && cur.len() >= 2 {
            let m = cur.len();
            let spread = (cur[m - 1] - cur[m - 2]).abs();
            if spread < best.1 {
                best = (cur[m - 1], spread);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn trapezoid_sin_squared_is_pi() {
        let r = periodic_trapezoid(|t| libm::sin(t).powi(2), 2.0 * PI, 64).unwrap();
        assert!((r.value - PI).abs() < 1e-12);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
    }

    #[test]
    fn trapezoid_constant() {
        let r = periodic_trapezoid(|_| 1.0, 5.0, 2).unwrap();
        assert_eq!(r.value, 5.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn trapezoid_signed_power_cosine_vanishes() {
        let f = |t: f64| {
            let c = libm::cos(t);
            c.signum() * c.abs().powf(1.5)
        };
        let r = periodic_trapezoid(f, 2.0 * PI, 4096).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn trapezoid_odd_node_count() {
        let r = periodic_trapezoid(|t| 2.0 + libm::cos(t), 2.0 * PI, 7).unwrap();
        assert!((r.value - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_reports_bad_node() {
        let err = periodic_trapezoid(|t| if t > 1.0 { f64::NAN } else { 0.0 }, 4.0, 4).unwrap_err();
        match err {
            QuadError::EvaluationFailure { at, value } => {
                assert_eq!(at, 2.0);
                assert!(value.is_nan());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trapezoid_rejects_bad_input() {
        assert!(matches!(
            periodic_trapezoid(|_| 0.0, 0.0, 8),
            Err(QuadError::InvalidInput(_))
        ));
        assert!(matches!(
            periodic_trapezoid(|_| 0.0, 1.0, 1),
            Err(QuadError::InvalidInput(_))
        ));
    }

    #[test]
    fn singular_inverse_sqrt() {
        let r = adaptive_singular(|x| 1.0 / libm::sqrt(1.0 - x), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
        assert!(r.error_estimate <= 1e-10);
    }

    #[test]
    fn singular_inverse_sqrt_at_left_end() {
        let r = adaptive_singular(|x| 1.0 / libm::sqrt(x), 0.0, 4.0, 1e-10).unwrap();
        assert!((r.value - 4.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn singular_constant() {
        let r = adaptive_singular(|_| 1.0, 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_log_endpoint() {
        // ∫₀¹ ln x dx = -1
        let r = adaptive_singular(libm::log, 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn singular_never_touches_endpoints() {
        let f = |x: f64| {
            assert!(x > 0.0 && x < 1.0);
            1.0 / libm::sqrt(x * (1.0 - x))
        };
        let r = adaptive_singular(f, 0.0, 1.0, 1e-9).unwrap();
        assert!((r.value - PI).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn singular_nonintegrable_fails_to_converge() {
        match adaptive_singular(|x| 1.0 / (1.0 - x), 0.0, 1.0, 1e-10) {
            Err(QuadError::ConvergenceFailure { best }) => assert!(best.error_estimate > 1e-10),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn adaptive_polynomial() {
        let r = adaptive(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-12).unwrap();
        assert!((r.value - 9.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_rejects_reversed_interval() {
        assert!(matches!(
            adaptive(|x| x, 1.0, 0.0, 1e-10),
            Err(QuadError::InvalidInput(_))
        ));
        assert!(matches!(
            adaptive_singular(|x| x, 0.0, 1.0, 0.0),
            Err(QuadError::InvalidInput(_))
        ));
    }

    #[test]
    fn epsilon_sums_geometric_series_exactly() {
        let mut s = 0.0;
        let seq: Vec<f64> = (0..6)
            .map(|j| {
                s += 0.7f64.powi(j);
                s
            })
            .collect();
        let (limit, _) = epsilon_limit(&seq);
        assert!((limit - 1.0 / 0.3).abs() < 1e-12);
    }
}
