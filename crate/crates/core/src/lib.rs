//! Imani periodic functions and the Leah oscillator.
//!
//! The Imani cosine and sine are the family of periodic solutions
//!
//! ```text
//! Ics(t) = sgn(cos ψ(t)) |cos ψ(t)|^{3/2},   Isn(t) = √(3/2) sin ψ(t)
//! ```
//!
//! of the functional equation `(2/3) y² + |x|^{4/3} = 1`, where the phase
//! `ψ(t) = A(t) + 2πt/T` carries an odd, `T`-periodic sine-series modulation
//! `A(t) = Σ a_k sin(2πkt/T)`. The same level set is the `H = 3/4` orbit of the
//! Leah oscillator `x'' + x^{1/3} = 0`.
//!
//! Modules:
//!
//! * [`quadrature`]: periodic trapezoid rule and adaptive Gauss-Kronrod
//!   integration, including integrands with endpoint singularities.
//! * [`phase`]: the phase function `ψ` and its parameters.
//! * [`imani`]: `Ics`/`Isn`, the real fractional-power convention, residuals,
//!   derivatives and antiderivatives.
//! * [`leah`]: the oscillator, its Hamiltonian, period, generalized flows and
//!   phase extraction from sampled solutions.
//! * [`fourier`]: trapezoid-rule spectra and odd-harmonic diagnostics.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fourier;
pub mod imani;
pub mod leah;
pub mod phase;
pub mod quadrature;

mod ode;

pub use error::Error;
pub use fourier::Spectrum;
pub use imani::{Exponent, ImaniPair, Which};
pub use leah::{OscState, PhaseFit, Trajectory};
pub use phase::{ImaniParams, PhaseValue};
pub use quadrature::{QuadError, QuadResult};

/// `√(3/2)`, the amplitude of `Isn` and the speed at `x = 0` on the `H = 3/4` orbit.
pub const ISN_AMPLITUDE: f64 = 1.224_744_871_391_589;
