//! Zero-degree bounds: no derivatives of the measured function are
//! involved, only its value range (m, M) and an L1 weight, a
//! bounded-variation integrator, or both.

use super::{BoundReport, InequalityId, ParamsEcho};
use crate::error::{Error, Result};
use crate::funcmodel::{BVFunction, Function, Interval, RangeBound};
use crate::scalar::{ratio, Scalar};

fn half() -> Scalar {
    Scalar::Exact(ratio(1, 2))
}

/// |∫ f l| <= (1/2)(M - m) ∫|l|, provided ∫ l = 0 exactly.
pub fn bound_zero_mean(
    f: &Function,
    l: &Function,
    r: &RangeBound,
    interval: &Interval,
) -> Result<BoundReport> {
    let l_integral = l.integral(interval)?;
    let l_abs = l.abs_integral(interval)?;
    let zero_mean_ok = match &l_integral {
        Scalar::Exact(v) => v == &crate::scalar::rat_int(0),
        Scalar::Float(v) => v.abs() <= 1e-12 * l_abs.to_f64(),
    };
    if !zero_mean_ok {
        return Err(Error::NonZeroMean {
            integral: l_integral.to_string(),
        });
    }
    let lhs = f.integral_product(l, interval)?.abs();
    let rhs = half() * r.width() * l_abs;
    Ok(BoundReport::build(
        InequalityId::ZeroMean,
        lhs,
        rhs,
        Scalar::zero(),
        r.rigor,
        ParamsEcho::new(interval),
    ))
}

/// |mean(fg) - mean(f) mean(g)| <= (1/2)(M - m) mean|g - mean(g)|.
pub fn bound_gruss_mean(
    f: &Function,
    g: &Function,
    r: &RangeBound,
    interval: &Interval,
) -> Result<BoundReport> {
    let len = Scalar::Exact(interval.length());
    let mean_f = f.mean(interval)?;
    let mean_g = g.mean(interval)?;
    let mean_fg = f.integral_product(g, interval)? / len.clone();
    let lhs = (mean_fg - mean_f * mean_g.clone()).abs();
    let centered = g.sub_scalar(&mean_g)?;
    let rhs = half() * r.width() * (centered.abs_integral(interval)? / len);
    Ok(BoundReport::build(
        InequalityId::GrussMean,
        lhs,
        rhs,
        Scalar::zero(),
        r.rigor,
        ParamsEcho::new(interval),
    ))
}

/// |mean(fg) - mean(f) mean(g)| <= (1/4)(M - m)(N - n).
pub fn bound_gruss_classic(
    f: &Function,
    g: &Function,
    rf: &RangeBound,
    rg: &RangeBound,
    interval: &Interval,
) -> Result<BoundReport> {
    let len = Scalar::Exact(interval.length());
    let mean_f = f.mean(interval)?;
    let mean_g = g.mean(interval)?;
    let mean_fg = f.integral_product(g, interval)? / len;
    let lhs = (mean_fg - mean_f * mean_g).abs();
    let rhs = Scalar::Exact(ratio(1, 4)) * rf.width() * rg.width();
    Ok(BoundReport::build(
        InequalityId::Gruss,
        lhs,
        rhs,
        Scalar::zero(),
        rf.rigor.weakest(rg.rigor),
        ParamsEcho::new(interval),
    ))
}

/// Plain form (no weight): |∫ f du| <= (1/2)(M - m) V(u), requiring
/// u(a) = u(b). Weighted form: |∫ f l du| <= (1/2)(M - m) ||l||_inf V(u),
/// requiring ∫ l du = 0.
pub fn bound_stieltjes(
    f: &Function,
    u: &BVFunction,
    r: &RangeBound,
    l: Option<&Function>,
) -> Result<BoundReport> {
    let interval = u.span();
    if !f.is_continuous() {
        return Err(Error::Precondition(
            "integrand must be continuous on the span".into(),
        ));
    }
    let tv = Scalar::Exact(u.total_variation()?);
    match l {
        None => {
            if u.value_at_a() != u.value_at_b() {
                return Err(Error::SideConditionViolated(format!(
                    "closed integrator required: u(a) = {} differs from u(b) = {}",
                    u.value_at_a(),
                    u.value_at_b()
                )));
            }
            let lhs = f.stieltjes(u)?.abs();
            let rhs = half() * r.width() * tv;
            Ok(BoundReport::build(
                InequalityId::Stieltjes,
                lhs,
                rhs,
                Scalar::zero(),
                r.rigor,
                ParamsEcho::new(&interval),
            ))
        }
        Some(l) => {
            if !l.is_continuous() {
                return Err(Error::Precondition(
                    "weight must be continuous on the span".into(),
                ));
            }
            let l_sup_range = l.range(0, &interval)?;
            let l_sup = l_sup_range.sup_norm();
            let l_du = l.stieltjes(u)?;
            let orthogonal = match &l_du {
                Scalar::Exact(v) => v == &crate::scalar::rat_int(0),
                Scalar::Float(v) => v.abs() <= 1e-12 * (l_sup.to_f64() * tv.to_f64()).max(1.0),
            };
            if !orthogonal {
                return Err(Error::SideConditionViolated(format!(
                    "weight must be du-orthogonal: ∫ l du = {}",
                    l_du
                )));
            }
            let lhs = f.stieltjes_product(l, u)?.abs();
            let rhs = half() * r.width() * l_sup * tv;
            Ok(BoundReport::build(
                InequalityId::StieltjesWeighted,
                lhs,
                rhs,
                Scalar::zero(),
                r.rigor.weakest(l_sup_range.rigor),
                ParamsEcho::new(&interval),
            ))
        }
    }
}

/// Grüss form against du with normalization 1/(u(b) - u(a)); the internal
/// weight is g minus its du-mean.
pub fn bound_gruss_stieltjes(
    f: &Function,
    g: &Function,
    u: &BVFunction,
    r: &RangeBound,
) -> Result<BoundReport> {
    let interval = u.span();
    let d = u.value_at_b() - u.value_at_a();
    if num_traits::Zero::is_zero(&d) {
        return Err(Error::DegenerateIntegrator);
    }
    if !f.is_continuous() || !g.is_continuous() {
        return Err(Error::Precondition(
            "both functions must be continuous on the span".into(),
        ));
    }
    let d = Scalar::Exact(d);
    let mean_f = f.stieltjes(u)? / d.clone();
    let mean_g = g.stieltjes(u)? / d.clone();
    let mean_fg = f.stieltjes_product(g, u)? / d.clone();
    let lhs = (mean_fg - mean_f * mean_g.clone()).abs();
    let centered = g.sub_scalar(&mean_g)?;
    let centered_range = centered.range(0, &interval)?;
    let tv = Scalar::Exact(u.total_variation()?);
    let rhs = half() * r.width() * (Scalar::one() / d.abs()) * centered_range.sup_norm() * tv;
    Ok(BoundReport::build(
        InequalityId::GrussStieltjes,
        lhs,
        rhs,
        Scalar::zero(),
        r.rigor.weakest(centered_range.rigor),
        ParamsEcho::new(&interval),
    ))
}
