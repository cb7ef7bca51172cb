//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at byte {offset} must be an integer literal")]
    NonIntegerExponent { offset: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("invalid interval: need a < b, got a = {a}, b = {b}")]
    InvalidInterval { a: String, b: String },
    #[error("invalid piecewise function: {0}")]
    InvalidPiecewise(String),
    #[error("invalid bounded-variation function: {0}")]
    InvalidBv(String),
    #[error("point {x} lies outside [{a}, {b}]")]
    OutsideInterval { x: String, a: String, b: String },
    #[error("interval [{lo}, {hi}] does not intersect the function span")]
    EmptySpan { lo: String, hi: String },
    #[error("weight is not zero-mean: its integral is {integral}")]
    NonZeroMean { integral: String },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("integrand is discontinuous at integrator jump t = {0}")]
    DiscontinuousAtJump(String),
    #[error("degenerate integrator: u(b) = u(a)")]
    DegenerateIntegrator,
    #[error("invalid range bound: {0}")]
    InvalidRange(String),
    #[error("order must be at least 1")]
    OrderTooSmall,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("non-rigorous ranges (rigor = Sampled) refused; set the best-effort flag to force")]
    NonRigorousRange,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unknown inequality id `{0}`")]
    UnknownInequality(String),
    #[error("oracle did not converge: {0}")]
    NonConvergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
