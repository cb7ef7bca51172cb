//! Bounded-variation functions: a piecewise-polynomial base (the absolutely
//! continuous part per piece, with genuine jumps at base breakpoints) plus
//! point-value overrides at finitely many locations.
//!
//! Conventions, chosen so the printed extremal constructions compute exactly:
//! jump mass and variation at the left endpoint use (right-limit - value at
//! a), at the right endpoint (value at b - left-limit), and interior jumps
//! use the one-sided limits of the base with the overridden point value in
//! the middle.

use super::piecewise::PiecewisePoly;
use super::Interval;
use crate::error::{Error, Result};
use crate::scalar::Rat;
use num_traits::Signed;

/// (location, left-limit, point-value, right-limit). The limits must agree
/// with the base one-sided limits; the field is ignored on the closed side
/// of the span boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpRecord {
    pub at: Rat,
    pub left: Rat,
    pub point: Rat,
    pub right: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BVFunction {
    base: PiecewisePoly,
    jumps: Vec<JumpRecord>,
}

impl BVFunction {
    pub fn new(base: PiecewisePoly, mut jumps: Vec<JumpRecord>) -> Result<Self> {
        jumps.sort_by(|p, q| p.at.cmp(&q.at));
        if jumps.windows(2).any(|w| w[0].at == w[1].at) {
            return Err(Error::InvalidBv("duplicate jump locations".into()));
        }
        let span = base.span();
        for j in &jumps {
            if !span.contains(&j.at) {
                return Err(Error::InvalidBv(format!(
                    "jump at {} outside span {}",
                    j.at, span
                )));
            }
            if j.at != *span.a() && j.left != base.eval_left(&j.at)? {
                return Err(Error::InvalidBv(format!(
                    "left limit {} at t = {} disagrees with base",
                    j.left, j.at
                )));
            }
            if j.at != *span.b() && j.right != base.eval_right(&j.at)? {
                return Err(Error::InvalidBv(format!(
                    "right limit {} at t = {} disagrees with base",
                    j.right, j.at
                )));
            }
        }
        Ok(BVFunction { base, jumps })
    }

    pub fn from_base(base: PiecewisePoly) -> Self {
        BVFunction { base, jumps: vec![] }
    }

    pub fn base(&self) -> &PiecewisePoly {
        &self.base
    }

    pub fn jumps(&self) -> &[JumpRecord] {
        &self.jumps
    }

    pub fn span(&self) -> Interval {
        self.base.span()
    }

    fn jump_at(&self, t: &Rat) -> Option<&JumpRecord> {
        self.jumps.iter().find(|j| &j.at == t)
    }

    /// Point value: the override when present, otherwise the base value
    /// (left-piece convention at breakpoints).
    pub fn value(&self, t: &Rat) -> Result<Rat> {
        if let Some(j) = self.jump_at(t) {
            return Ok(j.point.clone());
        }
        self.base.eval(t)
    }

    pub fn value_at_a(&self) -> Rat {
        let a = self.span().a().clone();
        self.value(&a).unwrap()
    }

    pub fn value_at_b(&self) -> Rat {
        let b = self.span().b().clone();
        self.value(&b).unwrap()
    }

    /// Locations where u may be discontinuous: base breakpoints with
    /// mismatched one-sided values, plus every override location.
    pub fn discontinuities(&self) -> Vec<Rat> {
        let span = self.span();
        let mut locs: Vec<Rat> = self.jumps.iter().map(|j| j.at.clone()).collect();
        for t in self.base.breaks() {
            if t == span.a() || t == span.b() {
                continue;
            }
            if self.base.eval_left(t).unwrap() != self.base.eval_right(t).unwrap()
                && !locs.contains(t)
            {
                locs.push(t.clone());
            }
        }
        locs.sort();
        locs
    }

    /// Mass right-limit minus left-limit (one-sided at the span endpoints).
    /// Zero-mass locations are legitimate (pure point overrides do not move
    /// the Stieltjes integral of a continuous integrand).
    fn mass(&self, t: &Rat) -> Result<Rat> {
        let span = self.span();
        if t == span.a() {
            Ok(self.base.eval_right(t)? - self.value(t)?)
        } else if t == span.b() {
            Ok(self.value(t)? - self.base.eval_left(t)?)
        } else {
            Ok(self.base.eval_right(t)? - self.base.eval_left(t)?)
        }
    }

    /// Total variation: exact per-piece ∫|base'| (certified upper bound when
    /// a sign change is irrational) plus the jump terms.
    pub fn total_variation(&self) -> Result<Rat> {
        let span = self.span();
        let (smooth, _) = self.base.derivative().abs_integral(&span)?;
        let mut total = smooth;
        for t in self.discontinuities() {
            if &t == span.a() {
                total += (self.base.eval_right(&t)? - self.value(&t)?).abs();
            } else if &t == span.b() {
                total += (self.value(&t)? - self.base.eval_left(&t)?).abs();
            } else {
                let point = self.value(&t)?;
                total += (&point - self.base.eval_left(&t)?).abs();
                total += (self.base.eval_right(&t)? - &point).abs();
            }
        }
        Ok(total)
    }

    /// Exact ∫ f du for a piecewise-polynomial integrand: smooth part
    /// ∫ f * base' plus Σ f(t) * mass(t) over discontinuities.
    ///
    /// Requires f continuous at every discontinuity of u (the integral is
    /// ill-defined otherwise) and the spans to coincide.
    pub fn stieltjes_poly(&self, f: &PiecewisePoly) -> Result<Rat> {
        if f.span() != self.span() {
            return Err(Error::InvalidBv(format!(
                "integrand span {} differs from integrator span {}",
                f.span(),
                self.span()
            )));
        }
        let locs = self.discontinuities();
        for t in &locs {
            if !f.continuous_at(t) {
                return Err(Error::DiscontinuousAtJump(t.to_string()));
            }
        }
        let weight = f.mul(&self.base.derivative())?;
        let mut total = weight.integrate(&self.span())?;
        for t in &locs {
            total += f.eval(t)? * self.mass(t)?;
        }
        Ok(total)
    }

    /// ∫ f du for an arbitrary continuous integrand supplied as an evaluator;
    /// the smooth part is delegated to the caller (float path).
    pub fn stieltjes_with<E>(&self, smooth_part: f64, mut point_eval: E) -> Result<f64>
    where
        E: FnMut(&Rat) -> Result<f64>,
    {
        let mut total = smooth_part;
        for t in self.discontinuities() {
            let mass = self.mass(&t)?;
            total += point_eval(&t)? * crate::scalar::rat_to_f64(&mass);
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::poly::Poly;
    use crate::scalar::{rat_int, ratio};

    fn unit() -> Interval {
        Interval::new(rat_int(0), rat_int(1)).unwrap()
    }

    /// u = 0 at 0 and 1, 1 on (0,1): the indicator integrator.
    pub(crate) fn indicator() -> BVFunction {
        let base = PiecewisePoly::constant(rat_int(1), &unit());
        BVFunction::new(
            base,
            vec![
                JumpRecord {
                    at: rat_int(0),
                    left: rat_int(0),
                    point: rat_int(0),
                    right: rat_int(1),
                },
                JumpRecord {
                    at: rat_int(1),
                    left: rat_int(1),
                    point: rat_int(0),
                    right: rat_int(0),
                },
            ],
        )
        .unwrap()
    }

    /// u = -1 at a, 0 on (a,b), 1 at b on [0,1].
    pub(crate) fn three_level() -> BVFunction {
        let base = PiecewisePoly::constant(rat_int(0), &unit());
        BVFunction::new(
            base,
            vec![
                JumpRecord {
                    at: rat_int(0),
                    left: rat_int(0),
                    point: rat_int(-1),
                    right: rat_int(0),
                },
                JumpRecord {
                    at: rat_int(1),
                    left: rat_int(0),
                    point: rat_int(1),
                    right: rat_int(0),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn indicator_variation_is_two() {
        assert_eq!(indicator().total_variation().unwrap(), rat_int(2));
    }

    #[test]
    fn monotone_base_variation() {
        let u = BVFunction::from_base(PiecewisePoly::identity(&unit()));
        assert_eq!(u.total_variation().unwrap(), rat_int(1));
    }

    #[test]
    fn three_level_variation_is_two() {
        assert_eq!(three_level().total_variation().unwrap(), rat_int(2));
        assert_eq!(three_level().value_at_a(), rat_int(-1));
        assert_eq!(three_level().value_at_b(), rat_int(1));
    }

    #[test]
    fn stieltjes_against_indicator() {
        let f = PiecewisePoly::identity(&unit());
        assert_eq!(indicator().stieltjes_poly(&f).unwrap(), rat_int(-1));
    }

    #[test]
    fn stieltjes_du_equals_dt_for_identity_base() {
        let u = BVFunction::from_base(PiecewisePoly::identity(&unit()));
        let f = PiecewisePoly::from_poly(
            Poly::new(vec![rat_int(1), rat_int(-3), rat_int(2)]),
            &unit(),
        );
        assert_eq!(
            u.stieltjes_poly(&f).unwrap(),
            f.integrate(&unit()).unwrap()
        );
    }

    #[test]
    fn point_mass_at_interior_jump() {
        // base steps from 0 to 3 at 1/2: mass 3 at t=1/2
        let base = PiecewisePoly::new(
            vec![rat_int(0), ratio(1, 2), rat_int(1)],
            vec![Poly::constant(rat_int(0)), Poly::constant(rat_int(3))],
        )
        .unwrap();
        let u = BVFunction::from_base(base);
        let f = PiecewisePoly::from_poly(Poly::new(vec![rat_int(1), rat_int(1)]), &unit());
        // ∫ f du = f(1/2) * 3 = (3/2) * 3
        assert_eq!(u.stieltjes_poly(&f).unwrap(), ratio(9, 2));
    }

    #[test]
    fn discontinuous_integrand_rejected() {
        let step = PiecewisePoly::new(
            vec![rat_int(0), ratio(1, 2), rat_int(1)],
            vec![Poly::constant(rat_int(-1)), Poly::constant(rat_int(1))],
        )
        .unwrap();
        let u = BVFunction::from_base(step.clone());
        assert!(matches!(
            u.stieltjes_poly(&step),
            Err(Error::DiscontinuousAtJump(_))
        ));
    }

    #[test]
    fn inconsistent_limits_rejected() {
        let base = PiecewisePoly::constant(rat_int(1), &unit());
        let bad = BVFunction::new(
            base,
            vec![JumpRecord {
                at: ratio(1, 2),
                left: rat_int(5),
                point: rat_int(0),
                right: rat_int(1),
            }],
        );
        assert!(bad.is_err());
    }
}
