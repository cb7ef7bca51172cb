//! Dense univariate polynomials with exact rational coefficients.

use crate::scalar::{rat_int, Rat};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending degree, no trailing zeros. The zero polynomial
/// has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn identity() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// c * x^k
    pub fn monomial(k: usize, c: Rat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// (x - r)^n expanded.
    pub fn shifted_power(r: &Rat, n: usize) -> Self {
        let lin = Poly::new(vec![-r.clone(), Rat::one()]);
        lin.pow(n)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Exact interval Horner: encloses {p(x) : lo <= x <= hi} with rationals.
    pub fn eval_interval(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        debug_assert!(lo <= hi);
        let mut acc_lo = Rat::zero();
        let mut acc_hi = Rat::zero();
        for c in self.coeffs.iter().rev() {
            let cands = [
                acc_lo.clone() * lo,
                acc_lo.clone() * hi,
                acc_hi.clone() * lo,
                acc_hi.clone() * hi,
            ];
            let mut mn = cands[0].clone();
            let mut mx = cands[0].clone();
            for v in &cands[1..] {
                if v < &mn {
                    mn = v.clone();
                }
                if v > &mx {
                    mx = v.clone();
                }
            }
            acc_lo = mn + c;
            acc_hi = mx + c;
        }
        (acc_lo, acc_hi)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_int(k as i64))
            .collect();
        Poly::new(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Rat::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat_int((k + 1) as i64));
        }
        Poly::new(coeffs)
    }

    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn pow(&self, n: usize) -> Poly {
        let mut acc = Poly::constant(Rat::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let dl = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut q = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading().unwrap() / &dl;
            let shift = rd - dd;
            q[shift] = f.clone();
            let sub = d.scale(&f);
            let mut new = rem.coeffs.clone();
            for (i, c) in sub.coeffs.iter().enumerate() {
                new[i + shift] = &new[i + shift] - c;
            }
            rem = Poly::new(new);
        }
        (Poly::new(q), rem)
    }

    /// Monic gcd via Euclid's algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// self / gcd(self, self'): same roots, all simple.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) <= 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let (q, _) = self.divrem(&g);
        q
    }

    /// Removes the factor (x - r), assuming r is a root.
    pub fn deflate(&self, r: &Rat) -> Poly {
        let lin = Poly::new(vec![-r.clone(), Rat::one()]);
        let (q, rem) = self.divrem(&lin);
        debug_assert!(rem.is_zero());
        q
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::new(coeffs)
    }
}

/// Renders as expression text ("1/2 - x + 3*x^2") parseable by the
/// expression grammar.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}
