//! The Imani cosine and sine.
//!
//! `Ics = sgn(cos ψ)|cos ψ|^{3/2}` and `Isn = √(3/2) sin ψ` satisfy
//! `(2/3) Isn² + |Ics|^{4/3} = 1` for every phase `ψ`. Both are `C¹` in `t`:
//! the second derivative of `Ics` is unbounded wherever `cos ψ = 0`, so only
//! first derivatives are provided.

use libm::{cbrt, cos, pow, sin, sqrt};

use crate::error::Error;
use crate::phase::{phase_eval, ImaniParams};
use crate::quadrature;
use crate::ISN_AMPLITUDE;

/// `(Ics(t), Isn(t))`, which play the roles of `x(t)` and `y(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaniPair {
    pub ics: f64,
    pub isn: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Ics,
    Isn,
}

/// A rational exponent `num/den`, stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent {
    num: i32,
    den: u32,
}

impl Exponent {
    pub const ONE_THIRD: Exponent = Exponent { num: 1, den: 3 };
    pub const TWO_THIRDS: Exponent = Exponent { num: 2, den: 3 };
    pub const FOUR_THIRDS: Exponent = Exponent { num: 4, den: 3 };
    pub const THREE_HALVES: Exponent = Exponent { num: 3, den: 2 };

    pub fn new(num: i32, den: u32) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::InvalidArgument(
                "exponent denominator must be nonzero",
            ));
        }
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ok(Exponent {
            num: num / g as i32,
            den: den / g,
        })
    }

    pub fn num(self) -> i32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `+1`, `0` or `-1`. Unlike `f64::signum`, zero maps to zero.
pub fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Real power with the odd-root convention.
///
/// With an odd denominator the real root exists for negative `x`:
/// `x^{1/3} = sgn(x)|x|^{1/3}`, `x^{4/3} = |x|^{4/3}`, `x^{2/3} = |x|^{2/3}`
/// (odd numerator gives an odd function, even numerator an even one). An even
/// denominator has no real value at negative `x` and is rejected there.
pub fn real_pow(x: f64, p: Exponent) -> Result<f64, Error> {
    if x < 0.0 && p.den.is_multiple_of(2) {
        return Err(Error::UnsupportedExponent {
            num: p.num,
            den: p.den,
            base: x,
        });
    }
    let ax = x.abs();
    let magnitude = match p.den {
        1 => ipow(ax, p.num),
        2 => ipow(sqrt(ax), p.num),
        3 => ipow(cbrt(ax), p.num),
        _ => pow(ax, p.num as f64 / p.den as f64),
    };
    Ok(if x < 0.0 && p.num % 2 != 0 {
        -magnitude
    } else {
        magnitude
    })
}

/// `|x|^{4/3}`.
pub(crate) fn abs_pow_four_thirds(x: f64) -> f64 {
    let r = cbrt(x.abs());
    let r2 = r * r;
    r2 * r2
}

/// `x^n` by repeated squaring.
fn ipow(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `sgn(x)|x|^{1/3}`.
pub(crate) fn odd_cube_root(x: f64) -> f64 {
    cbrt(x)
}

pub fn imani_eval(params: &ImaniParams, t: f64) -> ImaniPair {
    let psi = phase_eval(params, t).psi;
    from_phase(psi)
}

/// `Ics`/`Isn` at a given phase angle.
pub fn from_phase(psi: f64) -> ImaniPair {
    let c = cos(psi);
    ImaniPair {
        ics: c * sqrt(c.abs()),
        isn: ISN_AMPLITUDE * sin(psi),
    }
}

/// `(2/3) y² + |x|^{4/3} - 1` for a candidate pair.
pub fn pair_residual(x: f64, y: f64) -> f64 {
    y * y / 1.5 + abs_pow_four_thirds(x) - 1.0
}

/// Functional-equation residual of the published values `Ics(t)`, `Isn(t)`.
pub fn residual(params: &ImaniParams, t: f64) -> f64 {
    let p = imani_eval(params, t);
    pair_residual(p.ics, p.isn)
}

/// `(dIcs/dt, dIsn/dt)` by the chain rule:
/// `-(3/2)|cos ψ|^{1/2} sin ψ ψ'` and `√(3/2) cos ψ ψ'`.
pub fn imani_derivatives(params: &ImaniParams, t: f64) -> (f64, f64) {
    let phase = phase_eval(params, t);
    let (s, c) = (sin(phase.psi), cos(phase.psi));
    let dics = -1.5 * sqrt(c.abs()) * s * phase.dpsi;
    let disn = ISN_AMPLITUDE * c * phase.dpsi;
    (dics, disn)
}

/// `∫₀ᵗ Ics` or `∫₀ᵗ Isn` by adaptive quadrature to absolute tolerance `tol`.
pub fn imani_antiderivative(
    params: &ImaniParams,
    which: Which,
    t: f64,
    tol: f64,
) -> Result<f64, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t must be finite"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = |s: f64| {
        let p = imani_eval(params, s);
        match which {
            Which::Ics => p.ics,
            Which::Isn => p.isn,
        }
    };
    let (lo, hi, sign) = if t > 0.0 {
        (0.0, t, 1.0)
    } else {
        (t, 0.0, -1.0)
    };
    Ok(sign * quadrature::adaptive(f, lo, hi, tol)?.value)
}
