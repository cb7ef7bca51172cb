//! Piecewise polynomials over rationals: the exact ground truth every
//! verification path evaluates against. Continuity is computed, never
//! assumed — step functions are first-class citizens here.

use super::poly::Poly;
use super::roots::abs_integral;
use super::Interval;
use crate::error::{Error, Result};
use crate::scalar::{rat_int, Rat};
use num_traits::Zero;

/// `breaks[i] < breaks[i+1]`; piece `i` is valid on `[breaks[i], breaks[i+1]]`.
/// Point evaluation at an interior breakpoint uses the left piece.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<Rat>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<Rat>, pieces: Vec<Poly>) -> Result<Self> {
        if breaks.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints cannot delimit {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewisePoly { breaks, pieces })
    }

    pub fn from_poly(p: Poly, span: &Interval) -> Self {
        PiecewisePoly {
            breaks: vec![span.a().clone(), span.b().clone()],
            pieces: vec![p],
        }
    }

    pub fn constant(c: Rat, span: &Interval) -> Self {
        Self::from_poly(Poly::constant(c), span)
    }

    pub fn identity(span: &Interval) -> Self {
        Self::from_poly(Poly::identity(), span)
    }

    pub fn span(&self) -> Interval {
        Interval {
            a: self.breaks[0].clone(),
            b: self.breaks.last().unwrap().clone(),
        }
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn single_piece(&self) -> Option<&Poly> {
        if self.pieces.len() == 1 {
            Some(&self.pieces[0])
        } else {
            None
        }
    }

    fn require_in_span(&self, x: &Rat) -> Result<()> {
        if x < &self.breaks[0] || x > self.breaks.last().unwrap() {
            return Err(Error::OutsideInterval {
                x: x.to_string(),
                a: self.breaks[0].to_string(),
                b: self.breaks.last().unwrap().to_string(),
            });
        }
        Ok(())
    }

    /// Index of the piece owning x under the left-piece convention.
    fn piece_index(&self, x: &Rat) -> usize {
        // first piece whose upper breakpoint is >= x; x == a maps to piece 0
        match self.breaks[1..].binary_search_by(|t| t.cmp(x)) {
            Ok(i) => i,
            Err(i) => i.min(self.pieces.len() - 1),
        }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        self.require_in_span(x)?;
        Ok(self.pieces[self.piece_index(x)].eval(x))
    }

    /// Left limit at x (x > a).
    pub fn eval_left(&self, x: &Rat) -> Result<Rat> {
        self.require_in_span(x)?;
        if x == &self.breaks[0] {
            return Err(Error::Domain(format!("no left limit at span start {}", x)));
        }
        Ok(self.pieces[self.piece_index(x)].eval(x))
    }

    /// Right limit at x (x < b).
    pub fn eval_right(&self, x: &Rat) -> Result<Rat> {
        self.require_in_span(x)?;
        if x == self.breaks.last().unwrap() {
            return Err(Error::Domain(format!("no right limit at span end {}", x)));
        }
        // first piece whose LOWER breakpoint is <= x with upper > x
        let idx = match self.breaks[1..].binary_search_by(|t| t.cmp(x)) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        Ok(self.pieces[idx].eval(x))
    }

    pub fn is_continuous(&self) -> bool {
        self.interior_breaks()
            .all(|t| self.eval_left(t).unwrap() == self.eval_right(t).unwrap())
    }

    pub fn continuous_at(&self, x: &Rat) -> bool {
        if x == &self.breaks[0] || x == self.breaks.last().unwrap() {
            return true;
        }
        match (self.eval_left(x), self.eval_right(x)) {
            (Ok(l), Ok(r)) => l == r,
            _ => false,
        }
    }

    fn interior_breaks(&self) -> impl Iterator<Item = &Rat> {
        self.breaks[1..self.breaks.len() - 1].iter()
    }

    /// True when all derivatives up to `order` match across interior
    /// breakpoints, i.e. the function is C^order.
    pub fn is_smooth(&self, order: usize) -> bool {
        let mut ders = vec![self.clone()];
        for _ in 0..order {
            ders.push(ders.last().unwrap().derivative());
        }
        ders.iter().all(|d| d.is_continuous())
    }

    /// Per-piece a.e. derivative; breakpoint values stay one-sided.
    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.derivative()).collect(),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> PiecewisePoly {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    /// Clipped piece list over I: (lo, hi, piece), lo <= hi.
    pub(crate) fn clipped(&self, interval: &Interval) -> Result<Vec<(Rat, Rat, &Poly)>> {
        let span = self.span();
        if interval.a() < span.a() || interval.b() > span.b() {
            return Err(Error::EmptySpan {
                lo: interval.a().to_string(),
                hi: interval.b().to_string(),
            });
        }
        let mut out = vec![];
        for (i, piece) in self.pieces.iter().enumerate() {
            let lo = self.breaks[i].clone().max(interval.a().clone());
            let hi = self.breaks[i + 1].clone().min(interval.b().clone());
            if lo <= hi {
                out.push((lo, hi, piece));
            }
        }
        Ok(out)
    }

    /// Exact integral over I (I within span).
    pub fn integrate(&self, interval: &Interval) -> Result<Rat> {
        let mut total = Rat::zero();
        for (lo, hi, piece) in self.clipped(interval)? {
            if lo < hi {
                total += piece.integrate(&lo, &hi);
            }
        }
        Ok(total)
    }

    pub fn mean(&self, interval: &Interval) -> Result<Rat> {
        Ok(self.integrate(interval)? / interval.length())
    }

    /// Certified upper bound for the integral of |f| over I; exact unless an
    /// irrational sign change had to be bracketed.
    pub fn abs_integral(&self, interval: &Interval) -> Result<(Rat, bool)> {
        let mut total = Rat::zero();
        let mut exact = true;
        for (lo, hi, piece) in self.clipped(interval)? {
            if lo < hi {
                let (v, ex) = abs_integral(piece, &lo, &hi);
                total += v;
                exact &= ex;
            }
        }
        Ok((total, exact))
    }

    fn zip_with(&self, other: &PiecewisePoly, op: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self> {
        if self.span() != other.span() {
            return Err(Error::InvalidPiecewise(format!(
                "span mismatch: {} vs {}",
                self.span(),
                other.span()
            )));
        }
        let mut breaks: Vec<Rat> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        breaks.sort();
        breaks.dedup();
        let mut pieces = vec![];
        for w in breaks.windows(2) {
            let mid = (&w[0] + &w[1]) / rat_int(2);
            let a = &self.pieces[self.piece_index(&mid)];
            let b = &other.pieces[other.piece_index(&mid)];
            pieces.push(op(a, b));
        }
        Ok(PiecewisePoly { breaks, pieces })
    }

    pub fn add(&self, other: &PiecewisePoly) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PiecewisePoly) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &PiecewisePoly) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// f - c, applied to every piece.
    pub fn sub_const(&self, c: &Rat) -> Self {
        let shift = Poly::constant(c.clone());
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p - &shift).collect(),
        }
    }

    /// f - c * p for a global polynomial p (the median shift).
    pub fn sub_scaled_poly(&self, c: &Rat, p: &Poly) -> Self {
        let scaled = p.scale(c);
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|q| q - &scaled).collect(),
        }
    }

    /// f * p for a global polynomial p.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|q| q * p).collect(),
        }
    }

    pub fn restrict(&self, interval: &Interval) -> Result<Self> {
        let clipped = self.clipped(interval)?;
        let mut breaks = vec![];
        let mut pieces = vec![];
        for (lo, hi, piece) in clipped {
            if lo < hi {
                if breaks.is_empty() {
                    breaks.push(lo.clone());
                }
                breaks.push(hi.clone());
                pieces.push(piece.clone());
            }
        }
        PiecewisePoly::new(breaks, pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn ival(a: i64, b: i64) -> Interval {
        Interval::new(rat_int(a), rat_int(b)).unwrap()
    }

    /// The recurring extremal step: -1 on [0,1/2], +1 on (1/2,1].
    pub(crate) fn step() -> PiecewisePoly {
        PiecewisePoly::new(
            vec![rat_int(0), ratio(1, 2), rat_int(1)],
            vec![Poly::constant(rat_int(-1)), Poly::constant(rat_int(1))],
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_breaks() {
        assert!(PiecewisePoly::new(vec![rat_int(0), rat_int(0)], vec![Poly::zero()]).is_err());
        assert!(PiecewisePoly::new(vec![rat_int(1), rat_int(0)], vec![Poly::zero()]).is_err());
    }

    #[test]
    fn step_evaluation_left_convention() {
        let s = step();
        assert_eq!(s.eval(&ratio(1, 4)).unwrap(), rat_int(-1));
        assert_eq!(s.eval(&ratio(1, 2)).unwrap(), rat_int(-1));
        assert_eq!(s.eval(&ratio(3, 4)).unwrap(), rat_int(1));
        assert_eq!(s.eval_right(&ratio(1, 2)).unwrap(), rat_int(1));
        assert!(!s.is_continuous());
        assert!(!s.continuous_at(&ratio(1, 2)));
    }

    #[test]
    fn step_integrates_to_zero() {
        assert_eq!(step().integrate(&ival(0, 1)).unwrap(), rat_int(0));
        let (abs, exact) = step().abs_integral(&ival(0, 1)).unwrap();
        assert!(exact);
        assert_eq!(abs, rat_int(1));
    }

    #[test]
    fn product_merges_breakpoints() {
        let s = step();
        let x = PiecewisePoly::identity(&ival(0, 1));
        let prod = s.mul(&x).unwrap();
        assert_eq!(prod.breaks().len(), 3);
        // ∫ x*step = -1/8 + 3/8 = 1/4
        assert_eq!(prod.integrate(&ival(0, 1)).unwrap(), ratio(1, 4));
    }

    #[test]
    fn smoothness_detection() {
        // x^2 glued to 2x - 1 at 1: C^1 but not C^2
        let f = PiecewisePoly::new(
            vec![rat_int(0), rat_int(1), rat_int(2)],
            vec![
                Poly::new(vec![rat_int(0), rat_int(0), rat_int(1)]),
                Poly::new(vec![rat_int(-1), rat_int(2)]),
            ],
        )
        .unwrap();
        assert!(f.is_smooth(1));
        assert!(!f.is_smooth(2));
    }

    #[test]
    fn restrict_clips_exactly() {
        let s = step();
        let left = s.restrict(&Interval::new(rat_int(0), ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(left.pieces().len(), 1);
        assert_eq!(left.integrate(&Interval::new(rat_int(0), ratio(1, 2)).unwrap()).unwrap(), ratio(-1, 2));
    }
}
