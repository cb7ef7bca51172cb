//! The range-midpoint transformation: subtracting ((γ+Γ)/2) · p from a
//! function whose n-th derivative lies in [γ, Γ] yields one whose n-th
//! derivative lies in [-(Γ-γ)/2, (Γ-γ)/2], so any nondecreasing sup-norm
//! bound tightens to the half-spread. The shift polynomial is normalized so
//! its n-th derivative is identically 1; the monic view scales by n!.

use super::super::funcmodel::{Function, Poly, RangeBound};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Rat};
use num_traits::One;

#[derive(Clone, Debug)]
pub struct ShiftPolynomial {
    n: usize,
    lower: Poly,
}

impl ShiftPolynomial {
    /// x^n/n! plus user lower-order terms (degree < n).
    pub fn new(n: usize, lower: Poly) -> Result<Self> {
        if n == 0 {
            return Err(Error::OrderTooSmall);
        }
        if lower.degree().is_some_and(|d| d >= n) {
            return Err(Error::Precondition(format!(
                "lower-order part has degree {} >= n = {}",
                lower.degree().unwrap(),
                n
            )));
        }
        Ok(ShiftPolynomial { n, lower })
    }

    /// x^n/n! with no lower-order terms.
    pub fn canonical(n: usize) -> Self {
        ShiftPolynomial {
            n,
            lower: Poly::zero(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// The polynomial p with p^(n) ≡ 1.
    pub fn poly(&self) -> Poly {
        let lead = Poly::monomial(self.n, Rat::one() / factorial(self.n));
        &lead + &self.lower
    }

    /// The monic member of the class: n! * p = x^n + ...
    pub fn monic(&self) -> Poly {
        self.poly().scale(&factorial(self.n))
    }
}

/// f = g - ((lo+hi)/2) * p. When `r` bounds g^(n), the n-th derivative of
/// the result has sup-norm at most (hi-lo)/2.
pub fn median_shift(
    g: &Function,
    n: usize,
    r: &RangeBound,
    p: &ShiftPolynomial,
) -> Result<Function> {
    if p.order() != n {
        return Err(Error::Precondition(format!(
            "shift polynomial has order {}, expected {}",
            p.order(),
            n
        )));
    }
    g.sub_scaled_poly(&r.median(), &p.poly())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{derivative_range, Interval, Rigor};
    use crate::scalar::{rat_int, ratio, Scalar};

    fn unit() -> Interval {
        Interval::new(rat_int(0), rat_int(1)).unwrap()
    }

    fn poly_fn(coeffs: &[i64]) -> Function {
        Function::Poly(crate::funcmodel::PiecewisePoly::from_poly(
            Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect()),
            &unit(),
        ))
    }

    #[test]
    fn normalization_invariant() {
        for n in 1..6 {
            let p = ShiftPolynomial::canonical(n);
            assert_eq!(p.poly().nth_derivative(n), Poly::constant(rat_int(1)));
            assert_eq!(p.monic().coeff(n), rat_int(1));
        }
        let with_lower =
            ShiftPolynomial::new(2, Poly::new(vec![rat_int(5), rat_int(-3)])).unwrap();
        assert_eq!(
            with_lower.poly().nth_derivative(2),
            Poly::constant(rat_int(1))
        );
    }

    #[test]
    fn square_shift_gives_half_spread() {
        // g = x^2, n = 1, range of g' on [0,1] is [0,2]; f = x^2 - x
        let g = poly_fn(&[0, 0, 1]);
        let r = RangeBound::new(
            Scalar::Exact(rat_int(0)),
            Scalar::Exact(rat_int(2)),
            Rigor::Exact,
        )
        .unwrap();
        let f = median_shift(&g, 1, &r, &ShiftPolynomial::canonical(1)).unwrap();
        let fp = f.as_poly().unwrap();
        let rng = derivative_range(fp, 1, &unit()).unwrap();
        assert_eq!(rng.lo, Scalar::Exact(rat_int(-1)));
        assert_eq!(rng.hi, Scalar::Exact(rat_int(1)));
        assert_eq!(rng.sup_norm(), Scalar::Exact(rat_int(1)));
    }

    #[test]
    fn symmetric_range_is_identity() {
        let g = poly_fn(&[1, -2, 0, 1]);
        let r = RangeBound::new(
            Scalar::Exact(rat_int(-3)),
            Scalar::Exact(rat_int(3)),
            Rigor::Exact,
        )
        .unwrap();
        let f = median_shift(&g, 1, &r, &ShiftPolynomial::canonical(1)).unwrap();
        assert_eq!(f.as_poly().unwrap(), g.as_poly().unwrap());
    }

    #[test]
    fn cubic_second_order_shift() {
        // g = x^3, n = 2, range of g'' on [0,1] is [0,6], p = x^2/2
        let g = poly_fn(&[0, 0, 0, 1]);
        let r = RangeBound::new(
            Scalar::Exact(rat_int(0)),
            Scalar::Exact(rat_int(6)),
            Rigor::Exact,
        )
        .unwrap();
        let f = median_shift(&g, 2, &r, &ShiftPolynomial::canonical(2)).unwrap();
        // f = x^3 - (3/2) x^2
        assert_eq!(
            f.as_poly().unwrap().pieces()[0],
            Poly::new(vec![rat_int(0), rat_int(0), ratio(-3, 2), rat_int(1)])
        );
        let rng = derivative_range(f.as_poly().unwrap(), 2, &unit()).unwrap();
        assert_eq!(rng.lo, Scalar::Exact(rat_int(-3)));
        assert_eq!(rng.hi, Scalar::Exact(rat_int(3)));
    }
}
