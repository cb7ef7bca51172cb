//! Exact-or-float scalars.
//!
//! Every measurement in the crate flows through [`Scalar`]: the exact path
//! carries arbitrary-precision rationals, the float path IEEE doubles. Mixing
//! the two demotes to float, so an all-rational pipeline stays provably exact
//! and any symbolic (transcendental) input switches the whole report to
//! float mode.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// Parses "p/q", "p", or a plain decimal ("1.25", "-0.5") into an exact rational.
/// Decimals convert by their literal digits, so "0.1" becomes exactly 1/10.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        if frac_part.is_empty() {
            return Some(Rat::from_integer(int_digits));
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(frac, scale);
        let int = Rat::from_integer(int_digits);
        return Some(if neg { int - frac } else { int + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Nearest-f64 approximation of a rational (a few ulps at worst).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Tight guaranteed bracket lo <= r <= hi in f64 (exact when representable).
pub fn rat_to_f64_bracket(r: &Rat) -> (f64, f64) {
    let v = rat_to_f64(r);
    if !v.is_finite() {
        return (v, v);
    }
    let mut lo = v;
    let mut hi = v;
    let mut guard = 0;
    while &Rat::from_float(lo).unwrap() > r {
        lo = lo.next_down();
        guard += 1;
        if guard > 64 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
    }
    guard = 0;
    while &Rat::from_float(hi).unwrap() < r {
        hi = hi.next_up();
        guard += 1;
        if guard > 64 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
    }
    (lo, hi)
}

/// Which arithmetic produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NumericMode {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(rat_int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rat_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Exact rational view of the value; floats convert by their binary
    /// expansion, so the comparison semantics stay exact.
    pub fn to_rat(&self) -> Option<Rat> {
        match self {
            Scalar::Exact(r) => Some(r.clone()),
            Scalar::Float(x) => Rat::from_float(*x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        if self.partial_cmp(other) == Some(Ordering::Less) {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Scalar) -> Scalar {
        if self.partial_cmp(other) == Some(Ordering::Greater) {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// lhs <= rhs with the float-mode tolerance 1e-9 * max(1, rhs); the exact
    /// path compares rationals with zero tolerance.
    pub fn le_with_mode_tolerance(&self, rhs: &Scalar) -> bool {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a <= b,
            _ => {
                let l = self.to_f64();
                let r = rhs.to_f64();
                l <= r + 1e-9 * r.abs().max(1.0)
            }
        }
    }

    pub fn mode(&self) -> NumericMode {
        if self.is_exact() {
            NumericMode::Exact
        } else {
            NumericMode::Float
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => {
                let a = self.to_rat()?;
                let b = other.to_rat()?;
                a.partial_cmp(&b)
            }
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.clone().$method(rhs.clone())
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Scalar::Float(if a.is_zero() {
                        f64::NAN
                    } else if a.is_negative() {
                        f64::NEG_INFINITY
                    } else {
                        f64::INFINITY
                    })
                } else {
                    Scalar::Exact(a / b)
                }
            }
            (a, b) => Scalar::Float(a.to_f64() / b.to_f64()),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.clone().div(rhs.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}

/// Serializes as `{"decimal": "...", "exact": "p/q" | null}`; the exact field
/// is present exactly when the exact path produced the number.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Scalar", 2)?;
        st.serialize_field("decimal", &format!("{}", self.to_f64()))?;
        match self {
            Scalar::Exact(r) => st.serialize_field("exact", &format!("{}", r))?,
            Scalar::Float(_) => st.serialize_field("exact", &Option::<String>::None)?,
        }
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rat("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rat("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("1e3"), None);
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn bracket_contains_value() {
        let r = ratio(1, 3);
        let (lo, hi) = rat_to_f64_bracket(&r);
        assert!(Rat::from_float(lo).unwrap() <= r);
        assert!(Rat::from_float(hi).unwrap() >= r);
        assert!(hi - lo <= f64::EPSILON);
        // representable values bracket to themselves
        let half = ratio(1, 2);
        assert_eq!(rat_to_f64_bracket(&half), (0.5, 0.5));
    }

    #[test]
    fn exact_float_comparison_is_exact() {
        let a = Scalar::Exact(ratio(1, 2));
        let b = Scalar::Float(0.5);
        assert_eq!(a, b);
        let c = Scalar::Float(0.5000000000000001);
        assert!(a < c);
    }

    #[test]
    fn mixing_demotes_to_float() {
        let a = Scalar::Exact(ratio(1, 3));
        let b = Scalar::Float(1.0);
        assert!(!(a + b).is_exact());
    }
}
