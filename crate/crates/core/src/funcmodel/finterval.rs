//! Self-validating f64 intervals with outward rounding.
//!
//! Exact operations (two-sum / FMA error terms) keep representable results
//! tight — adding zero or doubling does not widen — while anything that may
//! have rounded gets bumped one ulp outward. Library transcendentals are
//! not correctly rounded, so their results are padded by a few ulps; the
//! enclosure stays a superset of the truth, only wider.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{rat_to_f64_bracket, Rat};

/// Ulps of padding around libm results (documented accuracy is ~1 ulp;
/// padding by 4 leaves a wide margin).
const LIBM_PAD: u32 = 4;

pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    let bp = s - a;
    let err = (a - (s - bp)) + (b - bp);
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    let bp = s - a;
    let err = (a - (s - bp)) + (b - bp);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    let err = a.mul_add(b, -p);
    if err > 0.0 {
        p.next_up()
    } else {
        p
    }
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    let err = a.mul_add(b, -p);
    if err < 0.0 {
        p.next_down()
    } else {
        p
    }
}

fn bump_up(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

fn bump_down(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FInterval {
    lo: f64,
    hi: f64,
}

impl FInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        FInterval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        FInterval { lo: x, hi: x }
    }

    pub fn from_rat(r: &Rat) -> Self {
        let (lo, hi) = rat_to_f64_bracket(r);
        FInterval { lo, hi }
    }

    pub fn from_rats(lo: &Rat, hi: &Rat) -> Self {
        let (l, _) = rat_to_f64_bracket(lo);
        let (_, h) = rat_to_f64_bracket(hi);
        FInterval { lo: l, hi: h }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn half_width(&self) -> f64 {
        mul_up(0.5, self.width()).max(0.0)
    }

    pub fn hull(&self, other: &FInterval) -> FInterval {
        FInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(&self, other: &FInterval) -> FInterval {
        FInterval {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(&self, other: &FInterval) -> FInterval {
        FInterval {
            lo: sub_down(self.lo, other.hi),
            hi: sub_up(self.hi, other.lo),
        }
    }

    pub fn neg(&self) -> FInterval {
        FInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(&self, other: &FInterval) -> FInterval {
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        FInterval { lo, hi }
    }

    pub fn div(&self, other: &FInterval) -> Result<FInterval> {
        if other.lo <= 0.0 && other.hi >= 0.0 {
            return Err(Error::Domain(format!(
                "division by interval [{}, {}] containing zero",
                other.lo, other.hi
            )));
        }
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            let q = a / b;
            let check = q.mul_add(b, -a);
            let (qd, qu) = if check == 0.0 {
                (q, q)
            } else if (check < 0.0) == (b > 0.0) {
                (q, q.next_up())
            } else {
                (q.next_down(), q)
            };
            lo = lo.min(qd);
            hi = hi.max(qu);
        }
        Ok(FInterval { lo, hi })
    }

    pub fn abs(&self) -> FInterval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            FInterval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    pub fn powi(&self, n: i32) -> Result<FInterval> {
        if n < 0 {
            let pos = self.powi(-n)?;
            return FInterval::point(1.0).div(&pos);
        }
        let mut acc = FInterval::point(1.0);
        if n == 0 {
            return Ok(acc);
        }
        // even powers of mixed-sign intervals clamp below at zero
        if n % 2 == 0 && self.lo < 0.0 && self.hi > 0.0 {
            let m = self.abs();
            let mut hi_acc = FInterval::point(1.0);
            for _ in 0..n {
                hi_acc = hi_acc.mul(&m);
            }
            return Ok(FInterval {
                lo: 0.0,
                hi: hi_acc.hi,
            });
        }
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<FInterval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!(
                "sqrt of interval reaching {}",
                self.lo
            )));
        }
        // f64 sqrt is correctly rounded
        Ok(FInterval {
            lo: self.lo.sqrt().next_down().max(0.0),
            hi: self.hi.sqrt().next_up(),
        })
    }

    pub fn exp(&self) -> FInterval {
        FInterval {
            lo: bump_down(self.lo.exp(), LIBM_PAD).max(0.0),
            hi: bump_up(self.hi.exp(), LIBM_PAD),
        }
    }

    pub fn ln(&self) -> Result<FInterval> {
        if self.lo <= 0.0 {
            return Err(Error::Domain(format!(
                "log of interval reaching {}",
                self.lo
            )));
        }
        Ok(FInterval {
            lo: bump_down(self.lo.ln(), LIBM_PAD),
            hi: bump_up(self.hi.ln(), LIBM_PAD),
        })
    }

    /// Enclosure of sin: monotone pieces from endpoint values, clamped to
    /// ±1 when a critical point pi/2 + k*pi may lie inside. The candidate
    /// test is widened, so false positives only loosen the bound.
    pub fn sin(&self) -> FInterval {
        self.trig(f64::sin, std::f64::consts::FRAC_PI_2)
    }

    pub fn cos(&self) -> FInterval {
        self.trig(f64::cos, 0.0)
    }

    fn trig(&self, f: fn(f64) -> f64, max_offset: f64) -> FInterval {
        if self.width() >= 2.0 * std::f64::consts::PI {
            return FInterval { lo: -1.0, hi: 1.0 };
        }
        let va = f(self.lo);
        let vb = f(self.hi);
        let mut lo = va.min(vb);
        let mut hi = va.max(vb);
        // maxima at max_offset + 2k*pi, minima at max_offset + pi + 2k*pi
        let two_pi = 2.0 * std::f64::consts::PI;
        let slack = 1e-9 * (1.0 + self.lo.abs().max(self.hi.abs()));
        let k_min = ((self.lo - slack - max_offset) / two_pi).floor() as i64;
        let k_max = ((self.hi + slack - max_offset) / two_pi).ceil() as i64;
        for k in k_min..=k_max {
            let peak = max_offset + two_pi * k as f64;
            if peak >= self.lo - slack && peak <= self.hi + slack {
                hi = 1.0;
            }
            let trough = peak + std::f64::consts::PI;
            for t in [trough, trough - two_pi] {
                if t >= self.lo - slack && t <= self.hi + slack {
                    lo = -1.0;
                }
            }
        }
        FInterval {
            lo: bump_down(lo, LIBM_PAD).max(-1.0),
            hi: bump_up(hi, LIBM_PAD).min(1.0),
        }
    }
}

/// Natural interval extension of an expression over an interval for x.
pub fn eval_expr_interval(e: &Expr, x: FInterval) -> Result<FInterval> {
    Ok(match e {
        Expr::Const(c) => FInterval::from_rat(c),
        Expr::Var => x,
        Expr::Neg(a) => eval_expr_interval(a, x)?.neg(),
        Expr::Add(a, b) => eval_expr_interval(a, x)?.add(&eval_expr_interval(b, x)?),
        Expr::Sub(a, b) => eval_expr_interval(a, x)?.sub(&eval_expr_interval(b, x)?),
        Expr::Mul(a, b) => eval_expr_interval(a, x)?.mul(&eval_expr_interval(b, x)?),
        Expr::Div(a, b) => eval_expr_interval(a, x)?.div(&eval_expr_interval(b, x)?)?,
        Expr::Pow(a, n) => eval_expr_interval(a, x)?.powi(*n)?,
        Expr::Sin(a) => eval_expr_interval(a, x)?.sin(),
        Expr::Cos(a) => eval_expr_interval(a, x)?.cos(),
        Expr::Exp(a) => eval_expr_interval(a, x)?.exp(),
        Expr::Log(a) => eval_expr_interval(a, x)?.ln()?,
        Expr::Abs(a) => eval_expr_interval(a, x)?.abs(),
        Expr::Sqrt(a) => eval_expr_interval(a, x)?.sqrt()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ops_stay_tight() {
        let a = FInterval::point(0.5);
        let b = FInterval::point(0.25);
        let s = a.add(&b);
        assert_eq!((s.lo, s.hi), (0.75, 0.75));
        let p = a.mul(&b);
        assert_eq!((p.lo, p.hi), (0.125, 0.125));
        let z = a.sub(&a);
        assert_eq!((z.lo, z.hi), (0.0, 0.0));
    }

    #[test]
    fn rounded_ops_widen_outward() {
        let third = FInterval::point(1.0 / 3.0);
        let s = third.add(&third).add(&third);
        assert!(s.lo <= 1.0 && 1.0 <= s.hi || s.contains(3.0 * (1.0 / 3.0)));
        // 0.1 + 0.2 must enclose the real 0.3
        let r = FInterval::point(0.1).add(&FInterval::point(0.2));
        assert!(r.lo <= 0.3 && 0.3 <= r.hi + 1e-16);
    }

    #[test]
    fn sin_enclosure_covers_peak() {
        let x = FInterval::new(1.0, 2.0); // contains pi/2
        let s = x.sin();
        assert!(s.hi >= 1.0);
        assert!(s.lo <= 1.0_f64.sin().min(2.0_f64.sin()));

        let x = FInterval::new(0.0, 0.5); // monotone stretch
        let s = x.sin();
        assert!(s.lo <= 0.0 && s.hi >= 0.5_f64.sin());
        assert!(s.hi <= 0.5_f64.sin() + 1e-12);
    }

    #[test]
    fn division_by_zero_interval_fails() {
        let a = FInterval::point(1.0);
        assert!(a.div(&FInterval::new(-1.0, 1.0)).is_err());
        let q = a.div(&FInterval::new(2.0, 4.0)).unwrap();
        assert!(q.lo <= 0.25 && q.hi >= 0.5);
    }

    #[test]
    fn even_power_of_mixed_interval() {
        let x = FInterval::new(-2.0, 1.0);
        let p = x.powi(2).unwrap();
        assert_eq!(p.lo, 0.0);
        assert!(p.hi >= 4.0);
    }
}
