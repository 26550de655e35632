use thiserror::Error;

use crate::voronoi::VoronoiReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    ZeroArgument,

    #[error("{a} has no inverse modulo {m}")]
    NotInvertible { a: i128, m: u64 },

    #[error("degenerate shift: h = r1*f2 - r2*f1 = 0 (the theorems require h != 0)")]
    DegenerateShift,

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("sieve window of {len} entries exceeds the cap of {cap}")]
    WindowTooLarge { len: u64, cap: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("character modulus {modulus} does not divide {c}")]
    ModulusMismatch { modulus: u64, c: u64 },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("quadrature did not converge (best estimate {best}, error estimate {error})")]
    Quadrature { best: f64, error: f64 },

    #[error("series truncation cap {cap} reached before convergence")]
    TruncationCap { cap: u64, partial: Box<VoronoiReport> },

    #[error("argument r*n + f = {value} is not positive inside the summation range")]
    NonPositiveArgument { value: i128 },

    #[error("need at least {need} rows with nonzero residual, got {got}")]
    TooFewRows { need: usize, got: usize },
}
