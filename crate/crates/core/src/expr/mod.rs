//! Closed-form expression trees: parsing, symbolic differentiation, and
//! floating-point evaluation. This is the ingestion front-end for every
//! non-polynomial function; purely polynomial expressions lower to exact
//! piecewise-polynomial form instead.

mod parse;

pub use parse::parse;

use crate::error::{Error, Result};
use crate::funcmodel::poly::Poly;
use crate::scalar::{rat_to_f64, Rat};
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rat),
    Var,
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Abs(Box<Expr>),
    Sqrt(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

// folding constructors: literal constant arithmetic and unit/zero identities
// collapse so repeated differentiation reaches fixed points like exp(x)

fn c_int(n: i64) -> Expr {
    Expr::Const(crate::scalar::rat_int(n))
}

fn is_const(e: &Expr, v: i64) -> bool {
    matches!(e, Expr::Const(c) if *c == crate::scalar::rat_int(v))
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (a, b) if is_const(&a, 0) => b,
        (a, b) if is_const(&b, 0) => a,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, b) if is_const(&b, 0) => a,
        (a, b) if is_const(&a, 0) => neg(b),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (a, _) if is_const(&a, 0) => c_int(0),
        (_, b) if is_const(&b, 0) => c_int(0),
        (a, b) if is_const(&a, 1) => b,
        (a, b) if is_const(&b, 1) => a,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) if !y.is_zero() => Expr::Const(x / y),
        (a, b) if is_const(&b, 1) => a,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn powc(a: Expr, n: i32) -> Expr {
    match (a, n) {
        (_, 0) => c_int(1),
        (a, 1) => a,
        (Expr::Const(x), n) if n > 0 || !x.is_zero() => {
            let p = x.pow(n);
            Expr::Const(p)
        }
        (a, n) => Expr::Pow(Box::new(a), n),
    }
}

impl Expr {
    /// Derivative with respect to x. Standard rules; no simplification
    /// beyond constant folding. abs differentiates to x/abs(x), which the
    /// evaluator treats as having a removable singularity at the kink —
    /// rigorous range analysis refuses intervals across it.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) => c_int(0),
            Expr::Var => c_int(1),
            Expr::Neg(a) => neg(a.differentiate()),
            Expr::Add(a, b) => add(a.differentiate(), b.differentiate()),
            Expr::Sub(a, b) => sub(a.differentiate(), b.differentiate()),
            Expr::Mul(a, b) => add(
                mul(a.differentiate(), (**b).clone()),
                mul((**a).clone(), b.differentiate()),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.differentiate(), (**b).clone()),
                    mul((**a).clone(), b.differentiate()),
                ),
                powc((**b).clone(), 2),
            ),
            Expr::Pow(a, n) => mul(
                mul(c_int(*n as i64), powc((**a).clone(), n - 1)),
                a.differentiate(),
            ),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.differentiate()),
            Expr::Cos(a) => mul(neg(Expr::Sin(a.clone())), a.differentiate()),
            Expr::Exp(a) => mul(Expr::Exp(a.clone()), a.differentiate()),
            Expr::Log(a) => div(a.differentiate(), (**a).clone()),
            Expr::Sqrt(a) => div(
                a.differentiate(),
                mul(c_int(2), Expr::Sqrt(a.clone())),
            ),
            Expr::Abs(a) => mul(
                div((**a).clone(), Expr::Abs(a.clone())),
                a.differentiate(),
            ),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> Expr {
        let mut d = self.clone();
        for _ in 0..n {
            d = d.differentiate();
        }
        d
    }

    /// IEEE double evaluation. Domain violations (log of a nonpositive,
    /// sqrt of a negative, division by zero) are errors; overflow passes
    /// through as an infinity the caller can flag.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => rat_to_f64(c),
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(Error::Domain(format!("division by zero at x = {}", x)));
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, n) => {
                let v = a.eval(x)?;
                if *n < 0 && v == 0.0 {
                    return Err(Error::Domain(format!(
                        "negative power of zero at x = {}",
                        x
                    )));
                }
                v.powi(*n)
            }
            Expr::Sin(a) => a.eval(x)?.sin(),
            Expr::Cos(a) => a.eval(x)?.cos(),
            Expr::Exp(a) => a.eval(x)?.exp(),
            Expr::Log(a) => {
                let v = a.eval(x)?;
                if v <= 0.0 {
                    return Err(Error::Domain(format!("log of {} at x = {}", v, x)));
                }
                v.ln()
            }
            Expr::Abs(a) => a.eval(x)?.abs(),
            Expr::Sqrt(a) => {
                let v = a.eval(x)?;
                if v < 0.0 {
                    return Err(Error::Domain(format!("sqrt of {} at x = {}", v, x)));
                }
                v.sqrt()
            }
        })
    }

    /// Exact lowering of a purely polynomial expression (constants, x,
    /// +, -, *, nonnegative integer pow) to rational coefficients.
    pub fn lower_to_poly(&self) -> Result<Poly> {
        match self {
            Expr::Const(c) => Ok(Poly::constant(c.clone())),
            Expr::Var => Ok(Poly::identity()),
            Expr::Neg(a) => Ok(-&a.lower_to_poly()?),
            Expr::Add(a, b) => Ok(&a.lower_to_poly()? + &b.lower_to_poly()?),
            Expr::Sub(a, b) => Ok(&a.lower_to_poly()? - &b.lower_to_poly()?),
            Expr::Mul(a, b) => Ok(&a.lower_to_poly()? * &b.lower_to_poly()?),
            Expr::Pow(a, n) => {
                if *n < 0 {
                    return Err(Error::NotPolynomial("negative exponent".into()));
                }
                Ok(a.lower_to_poly()?.pow(*n as usize))
            }
            Expr::Div(_, _) => Err(Error::NotPolynomial("division".into())),
            Expr::Sin(_) => Err(Error::NotPolynomial("sin".into())),
            Expr::Cos(_) => Err(Error::NotPolynomial("cos".into())),
            Expr::Exp(_) => Err(Error::NotPolynomial("exp".into())),
            Expr::Log(_) => Err(Error::NotPolynomial("log".into())),
            Expr::Abs(_) => Err(Error::NotPolynomial("abs".into())),
            Expr::Sqrt(_) => Err(Error::NotPolynomial("sqrt".into())),
        }
    }

    /// Builds an expression equal to a polynomial (used by the median shift
    /// on the symbolic path).
    pub fn from_poly(p: &Poly) -> Expr {
        let mut acc = c_int(0);
        for (k, coeff) in p.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let term = match k {
                0 => Expr::Const(coeff.clone()),
                _ => mul(Expr::Const(coeff.clone()), powc(Expr::Var, k as i32)),
            };
            acc = add(acc, term);
        }
        acc
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if c.is_negative() => 3,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "(")?;
        write!(f, "{}", e)?;
        write!(f, ")")
    } else {
        write!(f, "{}", e)
    }
}

/// Text form that re-parses to a structurally identical tree (for trees the
/// grammar can produce).
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", c),
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_operand(f, a, 4)
            }
            Expr::Add(a, b) => {
                write_operand(f, a, 1)?;
                write!(f, " + ")?;
                write_operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                write!(f, " - ")?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 2)?;
                write!(f, " * ")?;
                write_operand(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                write!(f, " / ")?;
                write_operand(f, b, 3)
            }
            Expr::Pow(a, n) => {
                write_operand(f, a, 5)?;
                write!(f, "^{}", n)
            }
            Expr::Sin(a) => write!(f, "sin({})", a),
            Expr::Cos(a) => write!(f, "cos({})", a),
            Expr::Exp(a) => write!(f, "exp({})", a),
            Expr::Log(a) => write!(f, "log({})", a),
            Expr::Abs(a) => write!(f, "abs({})", a),
            Expr::Sqrt(a) => write!(f, "sqrt({})", a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, ratio};

    #[test]
    fn differentiate_textbook_cases() {
        assert_eq!(parse("5").unwrap().differentiate(), c_int(0));
        let d = parse("x^2 - sin(x)").unwrap().differentiate();
        assert_eq!(d, parse("2*x - cos(x)").unwrap());
        let mut e = parse("exp(x)").unwrap();
        for _ in 0..3 {
            e = e.differentiate();
        }
        assert_eq!(e, parse("exp(x)").unwrap());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(parse("x^2 - x").unwrap().eval(1.0).unwrap(), 0.0);
        assert_eq!(parse("exp(x)").unwrap().eval(0.0).unwrap(), 1.0);
        let e1 = parse("exp(x)").unwrap().eval(1.0).unwrap();
        assert!((e1 - std::f64::consts::E).abs() <= f64::EPSILON * std::f64::consts::E);
    }

    #[test]
    fn eval_domain_errors() {
        assert!(parse("log(x)").unwrap().eval(0.0).is_err());
        assert!(parse("sqrt(x)").unwrap().eval(-1.0).is_err());
        assert!(parse("1 / x").unwrap().eval(0.0).is_err());
        // overflow is not an error, it saturates to infinity
        let big = parse("exp(x)").unwrap().eval(1e4).unwrap();
        assert!(big.is_infinite());
    }

    #[test]
    fn lowering_examples() {
        let p = parse("x^2 - x").unwrap().lower_to_poly().unwrap();
        assert_eq!(p.coeffs(), &[rat_int(0), rat_int(-1), rat_int(1)]);
        let p = parse("(x-1)*(x+1)").unwrap().lower_to_poly().unwrap();
        assert_eq!(p.coeffs(), &[rat_int(-1), rat_int(0), rat_int(1)]);
        assert!(matches!(
            parse("sin(x)").unwrap().lower_to_poly(),
            Err(Error::NotPolynomial(_))
        ));
    }

    #[test]
    fn poly_to_expr_round_trip_by_value() {
        let p = Poly::new(vec![ratio(1, 2), rat_int(-2), rat_int(0), rat_int(3)]);
        let e = Expr::from_poly(&p);
        let q = e.lower_to_poly().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn abs_derivative_sign_convention() {
        let d = parse("abs(x)").unwrap().differentiate();
        assert_eq!(d.eval(2.0).unwrap(), 1.0);
        assert_eq!(d.eval(-2.0).unwrap(), -1.0);
        assert!(d.eval(0.0).is_err());
    }
}
