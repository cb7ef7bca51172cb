//! Exact function representations and the rigorous measurements every bound
//! consumes: piecewise rational polynomials, bounded-variation functions,
//! derivative ranges, exact integrals, total variation, and
//! Riemann-Stieltjes integrals.

pub mod bv;
pub mod finterval;
pub mod function;
pub mod literal;
pub mod piecewise;
pub mod poly;
pub mod range;
pub mod roots;

pub use bv::{BVFunction, JumpRecord};
pub use function::Function;
pub use piecewise::PiecewisePoly;
pub use poly::Poly;
pub use range::{derivative_range, range_enclosure, sampled_range, sup_norm, RangeBound, Rigor};

use crate::error::{Error, Result};
use crate::scalar::Rat;
use num_traits::Zero;
use std::fmt;

/// Closed interval [a, b] with rational endpoints, a < b strictly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    a: Rat,
    b: Rat,
}

impl Interval {
    pub fn new(a: Rat, b: Rat) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInterval {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok(Interval { a, b })
    }

    pub fn unit() -> Self {
        Interval {
            a: Rat::zero(),
            b: Rat::from_integer(1.into()),
        }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn length(&self) -> Rat {
        &self.b - &self.a
    }

    pub fn midpoint(&self) -> Rat {
        (&self.a + &self.b) / Rat::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.a <= x && x <= &self.b
    }

    pub fn require_contains(&self, x: &Rat) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideInterval {
                x: x.to_string(),
                a: self.a.to_string(),
                b: self.b.to_string(),
            })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}
