//! Validated evaluation of sharp integral inequalities and certified
//! quadrature.
//!
//! The library measures both sides of a catalog of integral inequalities —
//! classic sup-norm forms and their half-spread perturbations obtained by
//! subtracting the midpoint of a derivative range — with exact rational
//! arithmetic on piecewise-polynomial inputs and outward-rounded floating
//! point on symbolic ones. On top of the evaluators sit certified composite
//! quadrature rules (estimate ± rigorous radius), deterministic randomized
//! soundness sweeps, and executable extremal instances that achieve every
//! sharp constant exactly.

pub mod error;
pub mod expr;
pub mod funcmodel;
pub mod inequalities;
pub mod numquad;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use funcmodel::{
    BVFunction, Function, Interval, JumpRecord, PiecewisePoly, Poly, RangeBound, Rigor,
};
pub use inequalities::{BoundReport, InequalityId};
pub use scalar::{NumericMode, Rat, Scalar};
