//! First-degree bounds: at most the first derivative of the measured
//! functions appears. Classic forms use the sup-norm of f'; perturbed forms
//! subtract the midpoint of the f' range and bound by the half-spread.
//!
//! Perturbation terms are derived from the shift identity (classic bound
//! applied to f - med*x), not transcribed: for the point form the subtracted
//! term is med*(x - mid), for the endpoint-average form it is med*(mid - x),
//! because the endpoint average carries the opposite x-coefficient.

use super::{BoundReport, InequalityId, ParamsEcho};
use crate::error::{Error, Result};
use crate::funcmodel::{Function, Interval, Poly, RangeBound, Rigor};
use crate::scalar::{ratio, Rat, Scalar};

/// 1/4 + ((x - mid)/(b - a))^2, the position weight shared by the point and
/// endpoint-average bounds.
fn position_weight(x: &Rat, interval: &Interval) -> Rat {
    let rel = (x - interval.midpoint()) / interval.length();
    ratio(1, 4) + &rel * &rel
}

fn require_range<'r>(r: Option<&'r RangeBound>, what: &str) -> Result<&'r RangeBound> {
    r.ok_or_else(|| Error::Precondition(format!("perturbed {} requires a derivative range", what)))
}

fn sup_from(f: &Function, r: Option<&RangeBound>, interval: &Interval) -> Result<(Scalar, Rigor)> {
    match r {
        Some(r) => Ok((r.sup_norm(), r.rigor)),
        None => {
            let rng = f.range(1, interval)?;
            Ok((rng.sup_norm(), rng.rigor))
        }
    }
}

/// Point evaluation vs mean: |f(x) - mean(f)| with the position weight.
pub fn bound_ostrowski(
    f: &Function,
    x: &Rat,
    interval: &Interval,
    perturbed: bool,
    r: Option<&RangeBound>,
) -> Result<BoundReport> {
    interval.require_contains(x)?;
    if !f.is_continuous() {
        return Err(Error::Precondition(
            "function must be absolutely continuous".into(),
        ));
    }
    let len = Scalar::Exact(interval.length());
    let weight = Scalar::Exact(position_weight(x, interval));
    let deviation = f.eval(x)? - f.mean(interval)?;
    let params = ParamsEcho::new(interval).with_x(x);
    if perturbed {
        let r = require_range(r, "point bound")?;
        let pert = r.median() * Scalar::Exact(x - interval.midpoint());
        let lhs = (deviation - pert.clone()).abs();
        let rhs = Scalar::Exact(ratio(1, 2)) * weight * r.width() * len;
        Ok(BoundReport::build(
            InequalityId::OstrowskiPert,
            lhs,
            rhs,
            pert,
            r.rigor,
            params,
        ))
    } else {
        let (sup, rigor) = sup_from(f, r, interval)?;
        let lhs = deviation.abs();
        let rhs = weight * len * sup;
        Ok(BoundReport::build(
            InequalityId::Ostrowski,
            lhs,
            rhs,
            Scalar::zero(),
            rigor,
            params,
        ))
    }
}

/// Endpoint average vs mean: |((x-a)f(a) + (b-x)f(b))/(b-a) - mean(f)|.
pub fn bound_trapezoid(
    f: &Function,
    x: &Rat,
    interval: &Interval,
    perturbed: bool,
    r: Option<&RangeBound>,
) -> Result<BoundReport> {
    interval.require_contains(x)?;
    if !f.is_continuous() {
        return Err(Error::Precondition(
            "function must be absolutely continuous".into(),
        ));
    }
    let len = Scalar::Exact(interval.length());
    let weight = Scalar::Exact(position_weight(x, interval));
    let fa = f.eval(interval.a())?;
    let fb = f.eval(interval.b())?;
    let endpoint_avg = (Scalar::Exact(x - interval.a()) * fa
        + Scalar::Exact(interval.b() - x) * fb)
        / len.clone();
    let deviation = endpoint_avg - f.mean(interval)?;
    let params = ParamsEcho::new(interval).with_x(x);
    if perturbed {
        let r = require_range(r, "endpoint-average bound")?;
        // shift identity: the endpoint average of f - med*t subtracts
        // med*(a + b - x), so the net term has the opposite sign of the
        // point form
        let pert = r.median() * Scalar::Exact(interval.midpoint() - x);
        let lhs = (deviation - pert.clone()).abs();
        let rhs = Scalar::Exact(ratio(1, 2)) * weight * r.width() * len;
        Ok(BoundReport::build(
            InequalityId::TrapezoidPert,
            lhs,
            rhs,
            pert,
            r.rigor,
            params,
        ))
    } else {
        let (sup, rigor) = sup_from(f, r, interval)?;
        let lhs = deviation.abs();
        let rhs = weight * len * sup;
        Ok(BoundReport::build(
            InequalityId::Trapezoid,
            lhs,
            rhs,
            Scalar::zero(),
            rigor,
            params,
        ))
    }
}

/// Covariance bound mixing a derivative range on f with a value range on g:
/// classic (1/8)(b-a)(M-m)||f'||, perturbed (1/16)(b-a)(M-m)(Γ-γ).
pub fn bound_ostrowski_gruss(
    f: &Function,
    g: &Function,
    interval: &Interval,
    perturbed: bool,
    rf_deriv: &RangeBound,
    rg: &RangeBound,
) -> Result<BoundReport> {
    if !f.is_continuous() {
        return Err(Error::Precondition(
            "first function must be absolutely continuous".into(),
        ));
    }
    let len = Scalar::Exact(interval.length());
    let mean_f = f.mean(interval)?;
    let mean_g = g.mean(interval)?;
    let mean_fg = f.integral_product(g, interval)? / len.clone();
    let covariance = mean_fg - mean_f * mean_g;
    let rigor = rf_deriv.rigor.weakest(rg.rigor);
    let params = ParamsEcho::new(interval);
    if perturbed {
        let centered = Poly::new(vec![-interval.midpoint(), Rat::from_integer(1.into())]);
        let moment = g.integral_times_poly(&centered, interval)? / len.clone();
        let pert = rf_deriv.median() * moment;
        let lhs = (covariance - pert.clone()).abs();
        let rhs = Scalar::Exact(ratio(1, 16)) * len * rg.width() * rf_deriv.width();
        Ok(BoundReport::build(
            InequalityId::OGrussPert,
            lhs,
            rhs,
            pert,
            rigor,
            params,
        ))
    } else {
        let lhs = covariance.abs();
        let rhs = Scalar::Exact(ratio(1, 8)) * len * rg.width() * rf_deriv.sup_norm();
        Ok(BoundReport::build(
            InequalityId::OGruss,
            lhs,
            rhs,
            Scalar::zero(),
            rigor,
            params,
        ))
    }
}

/// Covariance bound via both first derivatives:
/// (1/12)(b-a)^2 ||f'|| ||g'||.
pub fn bound_cheby(f: &Function, g: &Function, interval: &Interval) -> Result<BoundReport> {
    if !f.is_continuous() || !g.is_continuous() {
        return Err(Error::Precondition(
            "both functions must be absolutely continuous".into(),
        ));
    }
    let len = Scalar::Exact(interval.length());
    let mean_f = f.mean(interval)?;
    let mean_g = g.mean(interval)?;
    let mean_fg = f.integral_product(g, interval)? / len.clone();
    let lhs = (mean_fg - mean_f * mean_g).abs();
    let rf = f.range(1, interval)?;
    let rg = g.range(1, interval)?;
    let rhs = Scalar::Exact(ratio(1, 12)) * len.clone() * len * rf.sup_norm() * rg.sup_norm();
    Ok(BoundReport::build(
        InequalityId::Cheby,
        lhs,
        rhs,
        Scalar::zero(),
        rf.rigor.weakest(rg.rigor),
        ParamsEcho::new(interval),
    ))
}
