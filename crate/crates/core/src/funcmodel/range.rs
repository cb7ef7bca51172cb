//! Certified ranges of derivatives: the (m, M) / (γ, Γ) pairs every bound
//! consumes. Polynomial inputs get exact rational analysis via root
//! isolation; symbolic inputs get outward-rounded interval enclosures.

use super::finterval::{eval_expr_interval, FInterval};
use super::piecewise::PiecewisePoly;
use super::roots::{isolate_roots, RootLoc};
use super::Interval;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{rat_to_f64, Scalar};
use serde::Serialize;

/// How trustworthy a range is. `Exact` comes from exact polynomial analysis,
/// `IntervalEnclosure` from outward-rounded interval arithmetic (a superset
/// of the true range), `Sampled` from finite sampling (no guarantee).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rigor {
    Exact,
    IntervalEnclosure,
    Sampled,
}

impl Rigor {
    /// The weaker of two rigor levels.
    pub fn weakest(self, other: Rigor) -> Rigor {
        use Rigor::*;
        match (self, other) {
            (Sampled, _) | (_, Sampled) => Sampled,
            (IntervalEnclosure, _) | (_, IntervalEnclosure) => IntervalEnclosure,
            _ => Exact,
        }
    }

    pub fn is_rigorous(self) -> bool {
        !matches!(self, Rigor::Sampled)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeBound {
    pub lo: Scalar,
    pub hi: Scalar,
    pub rigor: Rigor,
}

impl RangeBound {
    pub fn new(lo: Scalar, hi: Scalar, rigor: Rigor) -> Result<Self> {
        if lo.partial_cmp(&hi).map_or(true, |o| o.is_gt()) {
            return Err(Error::InvalidRange(format!("lo {} > hi {}", lo, hi)));
        }
        Ok(RangeBound { lo, hi, rigor })
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    /// (lo + hi) / 2: the shift the median transformation subtracts.
    pub fn median(&self) -> Scalar {
        (&self.lo + &self.hi) * Scalar::from(crate::scalar::ratio(1, 2))
    }

    /// max(|lo|, |hi|): the sup-norm bound this range implies.
    pub fn sup_norm(&self) -> Scalar {
        self.lo.abs().max(&self.hi.abs())
    }

    pub fn is_exact(&self) -> bool {
        self.lo.is_exact() && self.hi.is_exact()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo.to_f64() <= x && x <= self.hi.to_f64()
    }
}

/// Exact min/max of the k-th derivative of a piecewise polynomial over I.
///
/// Pieces are treated as independent closed intervals (one-sided derivative
/// values at breakpoints), matching almost-everywhere hypotheses. Extrema at
/// rational critical points are exact; irrational critical points contribute
/// a certified outward bound of at most ~2^-60 slack.
pub fn derivative_range(f: &PiecewisePoly, k: usize, interval: &Interval) -> Result<RangeBound> {
    let mut lo: Option<crate::scalar::Rat> = None;
    let mut hi: Option<crate::scalar::Rat> = None;
    let mut consider = |v: crate::scalar::Rat| {
        if lo.as_ref().map_or(true, |m| &v < m) {
            lo = Some(v.clone());
        }
        if hi.as_ref().map_or(true, |m| &v > m) {
            hi = Some(v);
        }
    };
    for (plo, phi, piece) in f.clipped(interval)? {
        let p = piece.nth_derivative(k);
        consider(p.eval(&plo));
        if plo == phi {
            continue;
        }
        consider(p.eval(&phi));
        for loc in isolate_roots(&p.derivative(), &plo, &phi) {
            match loc {
                RootLoc::Exact(c) => consider(p.eval(&c)),
                RootLoc::Bracket { lo: bl, hi: bh } => {
                    let (vlo, vhi) = p.eval_interval(&bl, &bh);
                    consider(vlo);
                    consider(vhi);
                }
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => RangeBound::new(Scalar::Exact(l), Scalar::Exact(h), Rigor::Exact),
        _ => Err(Error::EmptySpan {
            lo: interval.a().to_string(),
            hi: interval.b().to_string(),
        }),
    }
}

/// ess sup |f^(k)| over I, from the exact range.
pub fn sup_norm(f: &PiecewisePoly, k: usize, interval: &Interval) -> Result<Scalar> {
    Ok(derivative_range(f, k, interval)?.sup_norm())
}

/// Stabilization threshold for enclosure refinement: stop when one more
/// bisection level shrinks the width by less than this relative amount.
const STABLE_REL: f64 = 1e-3;
const MAX_DEPTH: u32 = 20;

/// Outward interval enclosure of the k-th derivative of a symbolic
/// expression over I, refined by uniform bisection until the width
/// stabilizes. Always a superset of the true range.
pub fn range_enclosure(e: &Expr, k: usize, interval: &Interval) -> Result<RangeBound> {
    let mut d = e.clone();
    for _ in 0..k {
        d = d.differentiate();
    }
    let a = interval.a().clone();
    let len = interval.length();
    let mut prev: Option<FInterval> = None;
    for depth in 0..=MAX_DEPTH {
        let parts = 1u64 << depth;
        let mut hull: Option<FInterval> = None;
        for i in 0..parts {
            let lo = &a + &len * crate::scalar::Rat::new((i as i64).into(), (parts as i64).into());
            let hi =
                &a + &len * crate::scalar::Rat::new(((i + 1) as i64).into(), (parts as i64).into());
            let cell = FInterval::from_rats(&lo, &hi);
            let v = eval_expr_interval(&d, cell)?;
            hull = Some(match hull {
                None => v,
                Some(h) => h.hull(&v),
            });
        }
        let hull = hull.unwrap();
        if let Some(p) = prev {
            let pw = p.width();
            let w = hull.width();
            if pw.is_finite() && (pw - w) <= STABLE_REL * pw.max(f64::MIN_POSITIVE) {
                return RangeBound::new(
                    Scalar::Float(hull.lo()),
                    Scalar::Float(hull.hi()),
                    Rigor::IntervalEnclosure,
                );
            }
        }
        prev = Some(hull);
    }
    let hull = prev.unwrap();
    RangeBound::new(
        Scalar::Float(hull.lo()),
        Scalar::Float(hull.hi()),
        Rigor::IntervalEnclosure,
    )
}

/// Min/max over uniform samples: a cheap estimate with no guarantee, tagged
/// accordingly and quarantined from rigorous paths.
pub fn sampled_range(e: &Expr, k: usize, interval: &Interval, samples: usize) -> Result<RangeBound> {
    let mut d = e.clone();
    for _ in 0..k {
        d = d.differentiate();
    }
    let a = rat_to_f64(interval.a());
    let b = rat_to_f64(interval.b());
    let n = samples.max(2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let x = a + (b - a) * (i as f64) / ((n - 1) as f64);
        let v = d.eval(x)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    RangeBound::new(Scalar::Float(lo), Scalar::Float(hi), Rigor::Sampled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::poly::Poly;
    use crate::scalar::{rat_int, ratio, Rat};

    fn ival(a: i64, b: i64) -> Interval {
        Interval::new(rat_int(a), rat_int(b)).unwrap()
    }

    #[test]
    fn cubic_first_derivative_range() {
        // f = x^3 - x on [0,2], k=1: range of 3x^2 - 1 is [-1, 11]
        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(1)]),
            &ival(0, 2),
        );
        let r = derivative_range(&f, 1, &ival(0, 2)).unwrap();
        assert_eq!(r.lo, Scalar::Exact(rat_int(-1)));
        assert_eq!(r.hi, Scalar::Exact(rat_int(11)));
        assert_eq!(r.rigor, Rigor::Exact);
        assert_eq!(sup_norm(&f, 1, &ival(0, 2)).unwrap(), Scalar::Exact(rat_int(11)));
    }

    #[test]
    fn constant_and_vanishing_orders() {
        let c = PiecewisePoly::constant(ratio(7, 3), &ival(0, 1));
        let r = derivative_range(&c, 0, &ival(0, 1)).unwrap();
        assert_eq!(r.lo, Scalar::Exact(ratio(7, 3)));
        assert_eq!(r.hi, Scalar::Exact(ratio(7, 3)));

        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(1), rat_int(2), rat_int(3)]),
            &ival(0, 1),
        );
        let r = derivative_range(&f, 3, &ival(0, 1)).unwrap();
        assert!(r.lo.is_zero() && r.hi.is_zero());
    }

    #[test]
    fn interior_rational_extremum_is_exact() {
        // f = x^2 - x: minimum -1/4 at x = 1/2
        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(0), rat_int(-1), rat_int(1)]),
            &ival(0, 1),
        );
        let r = derivative_range(&f, 0, &ival(0, 1)).unwrap();
        assert_eq!(r.lo, Scalar::Exact(ratio(-1, 4)));
        assert_eq!(r.hi, Scalar::Exact(rat_int(0)));
    }

    #[test]
    fn irrational_extremum_is_enclosed() {
        // f = x^3 - x on [0,1]: min at 1/sqrt(3), value -2/(3 sqrt 3)
        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(1)]),
            &ival(0, 1),
        );
        let r = derivative_range(&f, 0, &ival(0, 1)).unwrap();
        let truth = -2.0 / (3.0 * 3.0_f64.sqrt());
        let lo = r.lo.to_f64();
        assert!(lo <= truth && truth - lo < 1e-12);
        assert_eq!(r.hi, Scalar::Exact(rat_int(0)));
    }

    #[test]
    fn sup_norm_of_negated_square() {
        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(0), rat_int(0), rat_int(-1)]),
            &ival(0, 1),
        );
        assert_eq!(sup_norm(&f, 0, &ival(0, 1)).unwrap(), Scalar::Exact(rat_int(1)));
    }

    #[test]
    fn range_soundness_spot_checks() {
        // lo <= f^(k)(x) <= hi at rational sample points, per piece
        let f = PiecewisePoly::new(
            vec![rat_int(-1), rat_int(0), rat_int(2)],
            vec![
                Poly::new(vec![rat_int(1), rat_int(3), rat_int(-2)]),
                Poly::new(vec![ratio(1, 2), rat_int(0), rat_int(0), rat_int(1)]),
            ],
        )
        .unwrap();
        let iv = Interval::new(rat_int(-1), rat_int(2)).unwrap();
        for k in 0..3usize {
            let r = derivative_range(&f, k, &iv).unwrap();
            let dk = f.nth_derivative(k);
            for j in 0..=20i64 {
                let x: Rat = rat_int(-1) + ratio(3, 20) * rat_int(j);
                let v = Scalar::Exact(dk.eval(&x).unwrap());
                assert!(r.lo <= v && v <= r.hi, "k={} x={}", k, x);
            }
        }
    }
}
