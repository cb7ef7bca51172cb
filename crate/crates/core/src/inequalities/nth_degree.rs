//! n-th degree bounds built on the piecewise kernel K_n: the integral of f
//! is represented by Taylor-style data at an interior point x (or boundary
//! data at a and b) plus a kernel remainder against f^(n).
//!
//! The perturbation term is the median of the f^(n) range times the exact
//! signed kernel integral, taken straight from the representation
//! identities, which makes lhs <= rhs an algebraic consequence rather than
//! a transcription. (The signed integral equals
//! [(x-a)^{n+1} + (-1)^n (b-x)^{n+1}] / (n+1)! for both variants.)

use super::{BoundReport, InequalityId, ParamsEcho};
use crate::error::{Error, Result};
use crate::funcmodel::{Function, Interval, PiecewisePoly, Poly, RangeBound};
use crate::scalar::{factorial, rat_int, Rat, Scalar};

/// Piecewise kernel value: (t-a)^n/n! for t <= x, (t-b)^n/n! for t > x.
pub fn kernel_kn(x: &Rat, t: &Rat, n: usize, interval: &Interval) -> Result<Rat> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    interval.require_contains(x)?;
    interval.require_contains(t)?;
    let nf = factorial(n);
    let base = if t <= x {
        t - interval.a()
    } else {
        t - interval.b()
    };
    Ok(num_traits::pow::pow(base, n) / nf)
}

/// Closed forms of the signed and absolute kernel integrals over t:
/// signed = [(x-a)^{n+1} - (x-b)^{n+1}]/(n+1)!,
/// absolute = [(x-a)^{n+1} + (b-x)^{n+1}]/(n+1)!.
pub fn kernel_integrals(x: &Rat, n: usize, interval: &Interval) -> Result<(Rat, Rat)> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    interval.require_contains(x)?;
    let np1 = factorial(n + 1);
    let xa = num_traits::pow::pow(x - interval.a(), n + 1);
    let xb = num_traits::pow::pow(x - interval.b(), n + 1);
    let bx = num_traits::pow::pow(interval.b() - x, n + 1);
    Ok(((&xa - &xb) / &np1, (&xa + &bx) / &np1))
}

/// Derivative data f^(0..n-1) at a point, with the smoothness check the
/// representation identities require (f^(n-1) absolutely continuous).
fn derivative_values(f: &Function, x: &Rat, n: usize) -> Result<Vec<Scalar>> {
    if let Some(p) = f.as_poly() {
        if !p.is_smooth(n.saturating_sub(1)) {
            return Err(Error::Precondition(format!(
                "function must be C^{} across breakpoints",
                n - 1
            )));
        }
    }
    let mut vals = Vec::with_capacity(n);
    let mut d = f.clone();
    for k in 0..n {
        if k > 0 {
            d = d.derivative();
        }
        vals.push(d.eval(x)?);
    }
    Ok(vals)
}

/// Σ_{k=0}^{n-1} [(b-x)^{k+1} + (-1)^k (x-a)^{k+1}]/(k+1)! * f^(k)(x).
fn interior_sum(vals: &[Scalar], x: &Rat, interval: &Interval) -> Scalar {
    let mut total = Scalar::zero();
    for (k, fk) in vals.iter().enumerate() {
        let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let coeff = (num_traits::pow::pow(interval.b() - x, k + 1)
            + sign * num_traits::pow::pow(x - interval.a(), k + 1))
            / factorial(k + 1);
        total = total + Scalar::Exact(coeff) * fk.clone();
    }
    total
}

/// Σ_{k=0}^{n-1} [(x-a)^{k+1} f^(k)(a) + (-1)^k (b-x)^{k+1} f^(k)(b)]/(k+1)!.
fn boundary_sum(
    vals_a: &[Scalar],
    vals_b: &[Scalar],
    x: &Rat,
    interval: &Interval,
) -> Scalar {
    let mut total = Scalar::zero();
    for k in 0..vals_a.len() {
        let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let ca = num_traits::pow::pow(x - interval.a(), k + 1) / factorial(k + 1);
        let cb = sign * num_traits::pow::pow(interval.b() - x, k + 1) / factorial(k + 1);
        total = total
            + Scalar::Exact(ca) * vals_a[k].clone()
            + Scalar::Exact(cb) * vals_b[k].clone();
    }
    total
}

fn nth_report(
    id_classic: InequalityId,
    id_pert: InequalityId,
    f: &Function,
    x: &Rat,
    n: usize,
    interval: &Interval,
    perturbed: bool,
    r: Option<&RangeBound>,
    rule_part: Scalar,
    pert_sign: i64,
) -> Result<BoundReport> {
    let integral = f.integral(interval)?;
    let (signed, absolute) = kernel_integrals(x, n, interval)?;
    let params = ParamsEcho::new(interval).with_x(x).with_n(n);
    if perturbed {
        let r = r.ok_or_else(|| {
            Error::Precondition("perturbed n-th degree bound requires a derivative range".into())
        })?;
        let pert = Scalar::Exact(rat_int(pert_sign) * signed) * r.median();
        let lhs = (integral - rule_part - pert.clone()).abs();
        let rhs =
            Scalar::Exact(crate::scalar::ratio(1, 2)) * r.width() * Scalar::Exact(absolute);
        Ok(BoundReport::build(id_pert, lhs, rhs, pert, r.rigor, params))
    } else {
        let (sup, rigor) = match r {
            Some(r) => (r.sup_norm(), r.rigor),
            None => {
                let rng = f.range(n, interval)?;
                (rng.sup_norm(), rng.rigor)
            }
        };
        let lhs = (integral - rule_part).abs();
        let rhs = sup * Scalar::Exact(absolute);
        Ok(BoundReport::build(
            id_classic,
            lhs,
            rhs,
            Scalar::zero(),
            rigor,
            params,
        ))
    }
}

/// Bound via derivative data at the interior point x; the remainder is
/// (-1)^n ∫ K_n f^(n), so the perturbation carries the (-1)^n factor.
pub fn bound_interior_nth(
    f: &Function,
    x: &Rat,
    n: usize,
    interval: &Interval,
    perturbed: bool,
    r: Option<&RangeBound>,
) -> Result<BoundReport> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    interval.require_contains(x)?;
    let vals = derivative_values(f, x, n)?;
    let rule = interior_sum(&vals, x, interval);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    nth_report(
        InequalityId::InteriorN,
        InequalityId::InteriorNPert,
        f,
        x,
        n,
        interval,
        perturbed,
        r,
        rule,
        sign,
    )
}

/// Bound via derivative data at both endpoints; the remainder is
/// (1/n!) ∫ (x-t)^n f^(n), whose signed integral enters with plus sign.
pub fn bound_boundary_nth(
    f: &Function,
    x: &Rat,
    n: usize,
    interval: &Interval,
    perturbed: bool,
    r: Option<&RangeBound>,
) -> Result<BoundReport> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    interval.require_contains(x)?;
    let vals_a = derivative_values(f, interval.a(), n)?;
    let vals_b = derivative_values(f, interval.b(), n)?;
    let rule = boundary_sum(&vals_a, &vals_b, x, interval);
    nth_report(
        InequalityId::BoundaryN,
        InequalityId::BoundaryNPert,
        f,
        x,
        n,
        interval,
        perturbed,
        r,
        rule,
        1,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityVariant {
    Interior,
    Boundary,
}

/// Exact residual of the representation identity for a single-piece
/// polynomial: zero for every polynomial, by construction of the kernel.
pub fn identity_residual(
    f: &PiecewisePoly,
    x: &Rat,
    n: usize,
    variant: IdentityVariant,
) -> Result<Rat> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    let interval = f.span();
    interval.require_contains(x)?;
    let poly = f
        .single_piece()
        .ok_or_else(|| Error::Precondition("identity residual needs a single-piece polynomial".into()))?;
    let integral = poly.integrate(interval.a(), interval.b());
    let fn_deriv = poly.nth_derivative(n);
    let nf = factorial(n);
    match variant {
        IdentityVariant::Interior => {
            let vals: Vec<Scalar> = (0..n)
                .map(|k| Scalar::Exact(poly.nth_derivative(k).eval(x)))
                .collect();
            let rule = interior_sum(&vals, x, &interval);
            // remainder: (-1)^n [ ∫_a^x (t-a)^n/n! f^(n) + ∫_x^b (t-b)^n/n! f^(n) ]
            let left = (&Poly::shifted_power(interval.a(), n) * &fn_deriv)
                .integrate(interval.a(), x);
            let right = (&Poly::shifted_power(interval.b(), n) * &fn_deriv)
                .integrate(x, interval.b());
            let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let remainder = sign * (left + right) / nf;
            let lhs = Scalar::Exact(integral);
            let residual = lhs - rule - Scalar::Exact(remainder);
            Ok(residual.exact().cloned().unwrap())
        }
        IdentityVariant::Boundary => {
            let vals_a: Vec<Scalar> = (0..n)
                .map(|k| Scalar::Exact(poly.nth_derivative(k).eval(interval.a())))
                .collect();
            let vals_b: Vec<Scalar> = (0..n)
                .map(|k| Scalar::Exact(poly.nth_derivative(k).eval(interval.b())))
                .collect();
            let rule = boundary_sum(&vals_a, &vals_b, x, &interval);
            // remainder: (1/n!) ∫_a^b (x-t)^n f^(n), with (x-t)^n = (-1)^n (t-x)^n
            let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let kernel = Poly::shifted_power(x, n).scale(&(sign / nf));
            let remainder = (&kernel * &fn_deriv).integrate(interval.a(), interval.b());
            let residual = Scalar::Exact(integral) - rule - Scalar::Exact(remainder);
            Ok(residual.exact().cloned().unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::funcmodel::Rigor;
    use crate::scalar::ratio;
    use num_traits::Zero;

    fn unit() -> Interval {
        Interval::new(rat_int(0), rat_int(1)).unwrap()
    }

    fn fx(text: &str) -> Function {
        Function::from_expr(parse(text).unwrap(), &unit())
    }

    fn pw(text: &str) -> PiecewisePoly {
        crate::funcmodel::literal::parse_piecewise(text).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(
            kernel_kn(&ratio(1, 2), &ratio(1, 4), 1, &unit()).unwrap(),
            ratio(1, 4)
        );
        assert_eq!(
            kernel_kn(&ratio(1, 2), &ratio(3, 4), 1, &unit()).unwrap(),
            ratio(-1, 4)
        );
        assert_eq!(
            kernel_kn(&ratio(1, 2), &ratio(3, 4), 2, &unit()).unwrap(),
            ratio(1, 32)
        );
        assert!(kernel_kn(&ratio(1, 2), &ratio(1, 4), 0, &unit()).is_err());
    }

    #[test]
    fn kernel_integral_closed_forms() {
        let (signed, absolute) = kernel_integrals(&ratio(1, 2), 1, &unit()).unwrap();
        assert_eq!(signed, rat_int(0));
        assert_eq!(absolute, ratio(1, 4));

        let (signed, absolute) = kernel_integrals(&rat_int(0), 2, &unit()).unwrap();
        assert_eq!(signed, ratio(1, 6));
        assert_eq!(absolute, ratio(1, 6));

        // single-branch kernel at x = a: signed = (-1)^n * absolute
        for n in 1..=5usize {
            let (signed, absolute) = kernel_integrals(&rat_int(0), n, &unit()).unwrap();
            let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(signed, sign * absolute);
        }
    }

    #[test]
    fn kernel_closed_forms_match_piecewise_integration() {
        // exact split integration of K_n and |K_n| on a rational grid
        for n in 1..=6usize {
            for j in 0..=20i64 {
                let x = ratio(j, 20);
                let (signed, absolute) = kernel_integrals(&x, n, &unit()).unwrap();
                let nf = factorial(n);
                let left = Poly::shifted_power(&rat_int(0), n).scale(&(rat_int(1) / &nf));
                let right = Poly::shifted_power(&rat_int(1), n).scale(&(rat_int(1) / &nf));
                let s = left.integrate(&rat_int(0), &x) + right.integrate(&x, &rat_int(1));
                assert_eq!(signed, s, "signed n={} x={}", n, x);
                // |K_n|: (t-a)^n >= 0 on the left; (t-b)^n has sign (-1)^n on the right
                let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
                let abs = left.integrate(&rat_int(0), &x)
                    + sign * right.integrate(&x, &rat_int(1));
                assert_eq!(absolute, abs, "absolute n={} x={}", n, x);
            }
        }
    }

    #[test]
    fn low_degree_polynomials_have_zero_lhs() {
        // degree < n: rule reproduces the integral in both modes
        let f = fx("3*x - 1");
        let r = f.range(2, &unit()).unwrap();
        for (perturbed, want_rhs_zero) in [(false, true), (true, true)] {
            let rep =
                bound_interior_nth(&f, &ratio(1, 3), 2, &unit(), perturbed, Some(&r)).unwrap();
            assert!(rep.lhs.is_zero());
            if want_rhs_zero {
                assert!(rep.rhs.is_zero());
            }
            let rep =
                bound_boundary_nth(&f, &ratio(1, 3), 2, &unit(), perturbed, Some(&r)).unwrap();
            assert!(rep.lhs.is_zero());
        }
    }

    #[test]
    fn constant_nth_derivative_perturbed_vanishes() {
        let f = fx("x^2");
        let r = f.range(2, &unit()).unwrap();
        let rep = bound_interior_nth(&f, &ratio(2, 3), 2, &unit(), true, Some(&r)).unwrap();
        assert!(rep.lhs.is_zero() && rep.rhs.is_zero());
        let rep = bound_boundary_nth(&f, &ratio(2, 3), 2, &unit(), true, Some(&r)).unwrap();
        assert!(rep.lhs.is_zero() && rep.rhs.is_zero());
    }

    #[test]
    fn cubic_interior_classic() {
        let f = fx("x^3");
        let rep = bound_interior_nth(&f, &ratio(1, 2), 2, &unit(), false, None).unwrap();
        assert_eq!(rep.lhs, Scalar::Exact(ratio(1, 8)));
        assert_eq!(rep.rhs, Scalar::Exact(ratio(1, 4)));
        assert!(rep.holds());
    }

    #[test]
    fn exp_boundary_classic_float() {
        let f = fx("exp(x)");
        let rep = bound_boundary_nth(&f, &ratio(1, 2), 2, &unit(), false, None).unwrap();
        let e = std::f64::consts::E;
        let expected_lhs = ((e - 1.0) - ((1.0 + e) / 2.0 + (1.0 - e) / 8.0)).abs();
        assert!((rep.lhs.to_f64() - expected_lhs).abs() < 1e-12);
        assert!(rep.rhs.to_f64() <= e / 24.0 + 1e-9 && rep.rhs.to_f64() >= e / 24.0 - 1e-3);
        assert!(rep.holds());
        assert_eq!(rep.rigor, Rigor::IntervalEnclosure);
    }

    #[test]
    fn identity_residuals_vanish() {
        let cases = [
            ("pw[(0,1): x^2]", ratio(1, 3), 2),
            ("pw[(0,1): x^5 - x]", ratio(1, 4), 3),
            ("pw[(0,1): 2*x - 1]", ratio(1, 2), 1),
            ("pw[(-1,2): x^6 - 3*x^2 + x]", ratio(1, 3), 4),
        ];
        for (text, x, n) in cases {
            let f = pw(text);
            for variant in [IdentityVariant::Interior, IdentityVariant::Boundary] {
                let res = identity_residual(&f, &x, n, variant).unwrap();
                assert!(res.is_zero(), "{} n={} {:?}", text, n, variant);
            }
        }
    }

    #[test]
    fn interior_perturbed_equals_scaled_ostrowski_at_n1() {
        // pins the perturbation sign against the first-degree form
        let f = fx("x^3 - 2*x^2 + x");
        let r = f.range(1, &unit()).unwrap();
        for x in [rat_int(0), ratio(1, 4), ratio(5, 8), rat_int(1)] {
            let nth = bound_interior_nth(&f, &x, 1, &unit(), true, Some(&r)).unwrap();
            let ost = crate::inequalities::bound_ostrowski(&f, &x, &unit(), true, Some(&r))
                .unwrap();
            let scaled = Scalar::Exact(unit().length()) * ost.lhs;
            assert_eq!(nth.lhs, scaled, "x = {}", x);
        }
    }

    #[test]
    fn boundary_perturbed_equals_scaled_trapezoid_at_n1() {
        let f = fx("x^3 - 2*x^2 + x");
        let r = f.range(1, &unit()).unwrap();
        for x in [ratio(1, 4), ratio(5, 8)] {
            let nth = bound_boundary_nth(&f, &x, 1, &unit(), true, Some(&r)).unwrap();
            let trap = crate::inequalities::bound_trapezoid(&f, &x, &unit(), true, Some(&r))
                .unwrap();
            let scaled = Scalar::Exact(unit().length()) * trap.lhs;
            assert_eq!(nth.lhs, scaled, "x = {}", x);
        }
    }

    #[test]
    fn multi_piece_smoothness_enforced() {
        let f = Function::Poly(pw("pw[(0,1/2): x; (1/2,1): 1 - x]"));
        assert!(bound_interior_nth(&f, &ratio(1, 4), 2, &unit(), false, None).is_err());
    }
}
