use core::fmt;

use crate::leah::Trajectory;
use crate::quadrature::QuadError;

/// Errors raised outside the quadrature primitives.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's contract.
    InvalidArgument(&'static str),
    /// A fractional power whose real branch is undefined for the given base.
    UnsupportedExponent {
        num: i32,
        den: u32,
        base: f64,
    },
    Quadrature(QuadError),
    /// The step size collapsed or the step budget ran out. Carries everything
    /// integrated up to that point.
    Integration {
        reason: &'static str,
        partial: Trajectory,
    },
    /// Consecutive phase samples are too far apart to unwrap unambiguously.
    Undersampled {
        index: usize,
    },
    /// The samples do not lie on the `(2/3)y² + |x|^{4/3} = 1` level set.
    NotASolution {
        max_residual: f64,
    },
    /// Oscillation crossings could not be found within the search window.
    NoCrossing,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::UnsupportedExponent { num, den, base } => {
                write!(f, "exponent {num}/{den} has no real value at base {base}")
            }
            Error::Quadrature(e) => write!(f, "quadrature failed: {e}"),
            Error::Integration { reason, partial } => write!(
                f,
                "integration failed ({reason}) at t = {}",
                partial.t.last().copied().unwrap_or(0.0)
            ),
            Error::Undersampled { index } => {
                write!(
                    f,
                    "phase jump between samples {index} and {} is ambiguous",
                    index + 1
                )
            }
            Error::NotASolution { max_residual } => write!(
                f,
                "samples violate the functional equation (max residual {max_residual:e})"
            ),
            Error::NoCrossing => f.write_str("no velocity sign change found"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Quadrature(e) => Some(e),
            _ => None,
        }
    }
}

impl From<QuadError> for Error {
    fn from(e: QuadError) -> Self {
        Error::Quadrature(e)
    }
}
