//! A function under measurement: either an exact piecewise polynomial or a
//! symbolic expression. Every measurement the bound evaluators consume
//! dispatches here, so each inequality has exactly one formula path and the
//! numeric mode follows from the inputs.

use super::bv::BVFunction;
use super::literal;
use super::piecewise::PiecewisePoly;
use super::poly::Poly;
use super::range::{derivative_range, range_enclosure, RangeBound};
use super::Interval;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numquad;
use crate::scalar::{rat_to_f64, Rat, Scalar};

/// Absolute tolerance driven into the adaptive quadrature on the float path;
/// far below the 1e-9 float-mode comparison tolerance.
const QUAD_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Function {
    Poly(PiecewisePoly),
    Sym(Expr),
}

impl Function {
    /// Expression text becomes exact whenever it lowers to a polynomial;
    /// transcendental content falls back to the symbolic float path.
    pub fn from_expr(e: Expr, interval: &Interval) -> Function {
        match e.lower_to_poly() {
            Ok(p) => Function::Poly(PiecewisePoly::from_poly(p, interval)),
            Err(_) => Function::Sym(e),
        }
    }

    pub fn is_exact_path(&self) -> bool {
        matches!(self, Function::Poly(_))
    }

    pub fn as_poly(&self) -> Option<&PiecewisePoly> {
        match self {
            Function::Poly(p) => Some(p),
            Function::Sym(_) => None,
        }
    }

    /// Serialized form accepted back by the CLI and reproducer tooling.
    pub fn literal(&self) -> String {
        match self {
            Function::Poly(p) => literal::piecewise_literal(p),
            Function::Sym(e) => e.to_string(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Result<Scalar> {
        match self {
            Function::Poly(p) => Ok(Scalar::Exact(p.eval(x)?)),
            Function::Sym(e) => Ok(Scalar::Float(e.eval(rat_to_f64(x))?)),
        }
    }

    pub fn derivative(&self) -> Function {
        match self {
            Function::Poly(p) => Function::Poly(p.derivative()),
            Function::Sym(e) => Function::Sym(e.differentiate()),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> Function {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    pub fn integral(&self, interval: &Interval) -> Result<Scalar> {
        match self {
            Function::Poly(p) => Ok(Scalar::Exact(p.integrate(interval)?)),
            Function::Sym(e) => {
                let a = rat_to_f64(interval.a());
                let b = rat_to_f64(interval.b());
                Ok(Scalar::Float(numquad::integrate(
                    &|x| e.eval(x),
                    a,
                    b,
                    QUAD_TOL,
                )?))
            }
        }
    }

    pub fn mean(&self, interval: &Interval) -> Result<Scalar> {
        Ok(self.integral(interval)? / Scalar::Exact(interval.length()))
    }

    /// ∫ f*g over I: exact when both sides are polynomial.
    pub fn integral_product(&self, g: &Function, interval: &Interval) -> Result<Scalar> {
        match (self, g) {
            (Function::Poly(p), Function::Poly(q)) => {
                let p = p.restrict(interval)?;
                let q = q.restrict(interval)?;
                Ok(Scalar::Exact(p.mul(&q)?.integrate(interval)?))
            }
            _ => {
                let a = rat_to_f64(interval.a());
                let b = rat_to_f64(interval.b());
                let fa = self.float_eval();
                let fb = g.float_eval();
                Ok(Scalar::Float(numquad::integrate(
                    &|x| Ok(fa(x)? * fb(x)?),
                    a,
                    b,
                    QUAD_TOL,
                )?))
            }
        }
    }

    /// ∫ f * w over I for an exact polynomial weight.
    pub fn integral_times_poly(&self, w: &Poly, interval: &Interval) -> Result<Scalar> {
        match self {
            Function::Poly(p) => Ok(Scalar::Exact(
                p.restrict(interval)?.mul_poly(w).integrate(interval)?,
            )),
            Function::Sym(e) => {
                let a = rat_to_f64(interval.a());
                let b = rat_to_f64(interval.b());
                Ok(Scalar::Float(numquad::integrate(
                    &|x| {
                        let wx = rat_to_f64(&w.eval(&Rat::from_float(x).unwrap()));
                        Ok(e.eval(x)? * wx)
                    },
                    a,
                    b,
                    QUAD_TOL,
                )?))
            }
        }
    }

    /// Certified-upper ∫|f| on the exact path; adaptive quadrature of |f|
    /// on the float path.
    pub fn abs_integral(&self, interval: &Interval) -> Result<Scalar> {
        match self {
            Function::Poly(p) => Ok(Scalar::Exact(p.abs_integral(interval)?.0)),
            Function::Sym(e) => {
                let a = rat_to_f64(interval.a());
                let b = rat_to_f64(interval.b());
                Ok(Scalar::Float(numquad::integrate(
                    &|x| Ok(e.eval(x)?.abs()),
                    a,
                    b,
                    QUAD_TOL,
                )?))
            }
        }
    }

    /// Range of the k-th derivative over I: exact analysis for polynomials,
    /// outward enclosure for expressions.
    pub fn range(&self, k: usize, interval: &Interval) -> Result<RangeBound> {
        match self {
            Function::Poly(p) => derivative_range(p, k, interval),
            Function::Sym(e) => range_enclosure(e, k, interval),
        }
    }

    pub fn sup_norm(&self, k: usize, interval: &Interval) -> Result<Scalar> {
        Ok(self.range(k, interval)?.sup_norm())
    }

    /// f - c (pointwise constant shift).
    pub fn sub_scalar(&self, c: &Scalar) -> Result<Function> {
        match (self, c) {
            (Function::Poly(p), Scalar::Exact(r)) => Ok(Function::Poly(p.sub_const(r))),
            (f, c) => {
                let e = f.to_expr();
                let cr = c
                    .to_rat()
                    .ok_or_else(|| Error::Domain("non-finite shift".into()))?;
                Ok(Function::Sym(Expr::Sub(
                    Box::new(e),
                    Box::new(Expr::Const(cr)),
                )))
            }
        }
    }

    /// f - c*p: the median shift. Exact path stays exact when c is exact.
    pub fn sub_scaled_poly(&self, c: &Scalar, p: &Poly) -> Result<Function> {
        match (self, c) {
            (Function::Poly(f), Scalar::Exact(r)) => Ok(Function::Poly(f.sub_scaled_poly(r, p))),
            (f, c) => {
                let cr = c
                    .to_rat()
                    .ok_or_else(|| Error::Domain("non-finite shift".into()))?;
                let shift = Expr::from_poly(&p.scale(&cr));
                Ok(Function::Sym(Expr::Sub(
                    Box::new(f.to_expr()),
                    Box::new(shift),
                )))
            }
        }
    }

    /// Symbolic view. Multi-piece polynomials have no single expression;
    /// callers only reach this on the single-piece or symbolic paths.
    fn to_expr(&self) -> Expr {
        match self {
            Function::Sym(e) => e.clone(),
            Function::Poly(p) => match p.single_piece() {
                Some(poly) => Expr::from_poly(poly),
                None => unreachable!("median shift keeps the polynomial path exact"),
            },
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            Function::Poly(p) => p.is_continuous(),
            Function::Sym(_) => true,
        }
    }

    pub fn continuous_at(&self, t: &Rat) -> bool {
        match self {
            Function::Poly(p) => p.continuous_at(t),
            Function::Sym(_) => true,
        }
    }

    fn float_eval(&self) -> impl Fn(f64) -> Result<f64> + '_ {
        move |x| match self {
            Function::Sym(e) => e.eval(x),
            Function::Poly(p) => {
                let xr = Rat::from_float(x)
                    .ok_or_else(|| Error::Domain(format!("non-finite sample {}", x)))?;
                let span = p.span();
                let xr = xr.clamp(span.a().clone(), span.b().clone());
                Ok(rat_to_f64(&p.eval(&xr)?))
            }
        }
    }

    /// ∫ f du against a bounded-variation integrator.
    pub fn stieltjes(&self, u: &BVFunction) -> Result<Scalar> {
        match self {
            Function::Poly(p) => Ok(Scalar::Exact(u.stieltjes_poly(p)?)),
            Function::Sym(e) => {
                let span = u.span();
                let weight = u.base().derivative();
                let a = rat_to_f64(span.a());
                let b = rat_to_f64(span.b());
                let smooth = numquad::integrate(
                    &|x| {
                        let xr = Rat::from_float(x)
                            .ok_or_else(|| Error::Domain(format!("non-finite sample {}", x)))?;
                        let xr = xr.clamp(span.a().clone(), span.b().clone());
                        Ok(e.eval(x)? * rat_to_f64(&weight.eval(&xr)?))
                    },
                    a,
                    b,
                    QUAD_TOL,
                )?;
                Ok(Scalar::Float(u.stieltjes_with(smooth, |t| {
                    e.eval(rat_to_f64(t))
                })?))
            }
        }
    }

    /// ∫ f*l du (the weighted Stieltjes form).
    pub fn stieltjes_product(&self, l: &Function, u: &BVFunction) -> Result<Scalar> {
        match (self, l) {
            (Function::Poly(p), Function::Poly(q)) => {
                Ok(Scalar::Exact(u.stieltjes_poly(&p.mul(q)?)?))
            }
            _ => {
                let span = u.span();
                let weight = u.base().derivative();
                let fa = self.float_eval();
                let fl = l.float_eval();
                let a = rat_to_f64(span.a());
                let b = rat_to_f64(span.b());
                let smooth = numquad::integrate(
                    &|x| {
                        let xr = Rat::from_float(x)
                            .ok_or_else(|| Error::Domain(format!("non-finite sample {}", x)))?;
                        let xr = xr.clamp(span.a().clone(), span.b().clone());
                        Ok(fa(x)? * fl(x)? * rat_to_f64(&weight.eval(&xr)?))
                    },
                    a,
                    b,
                    QUAD_TOL,
                )?;
                Ok(Scalar::Float(u.stieltjes_with(smooth, |t| {
                    let tf = rat_to_f64(t);
                    Ok(fa(tf)? * fl(tf)?)
                })?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::scalar::{rat_int, ratio};

    fn unit() -> Interval {
        Interval::new(rat_int(0), rat_int(1)).unwrap()
    }

    #[test]
    fn polynomial_text_takes_exact_path() {
        let f = Function::from_expr(parse("x^2 - x").unwrap(), &unit());
        assert!(f.is_exact_path());
        assert_eq!(f.integral(&unit()).unwrap(), Scalar::Exact(ratio(-1, 6)));
    }

    #[test]
    fn transcendental_takes_float_path() {
        let f = Function::from_expr(parse("exp(x)").unwrap(), &unit());
        assert!(!f.is_exact_path());
        let v = f.integral(&unit()).unwrap();
        assert!((v.to_f64() - (std::f64::consts::E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn product_integral_exact() {
        let f = Function::from_expr(parse("x").unwrap(), &unit());
        let g = Function::from_expr(parse("x").unwrap(), &unit());
        assert_eq!(
            f.integral_product(&g, &unit()).unwrap(),
            Scalar::Exact(ratio(1, 3))
        );
    }

    #[test]
    fn median_shift_stays_exact() {
        let f = Function::from_expr(parse("x^2").unwrap(), &unit());
        let shifted = f
            .sub_scaled_poly(&Scalar::Exact(rat_int(1)), &Poly::identity())
            .unwrap();
        assert!(shifted.is_exact_path());
        let r = shifted.range(1, &unit()).unwrap();
        assert_eq!(r.lo, Scalar::Exact(rat_int(-1)));
        assert_eq!(r.hi, Scalar::Exact(rat_int(1)));
    }
}
