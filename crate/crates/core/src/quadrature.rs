//! Certified composite quadrature: the perturbed bounds turned into
//! integration rules with a rigorous error radius.
//!
//! Estimates are reported in floating point; everything feeding the radius
//! is rounded outward. On the all-exact path (polynomial integrand, exact
//! ranges) the rule total is accumulated as one rational before conversion,
//! so the radius is the sum of the per-cell mathematical radii plus at most
//! a one-ulp representation allowance — exactly zero when the mathematics
//! says zero and the total is representable. On the symbolic path every
//! term is an outward interval and the rounding half-width of the total is
//! absorbed into the radius, so the certificate never understates.

use crate::error::{Error, Result};
use crate::funcmodel::finterval::{add_up, mul_up, sub_up, FInterval};
use crate::funcmodel::{sampled_range, Function, Interval, RangeBound, Rigor};
use crate::inequalities::kernel_integrals;
use crate::scalar::{rat_int, rat_to_f64_bracket, Rat, Scalar};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleId {
    #[serde(rename = "pmid")]
    PMid,
    #[serde(rename = "interior_n")]
    InteriorN,
    #[serde(rename = "boundary_n")]
    BoundaryN,
}

impl FromStr for RuleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pmid" => Ok(RuleId::PMid),
            "interior_n" => Ok(RuleId::InteriorN),
            "boundary_n" => Ok(RuleId::BoundaryN),
            other => Err(Error::InvalidPartition(format!("unknown rule `{}`", other))),
        }
    }
}

/// Strictly increasing cell endpoints spanning the integration interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    points: Vec<Rat>,
}

impl Partition {
    pub fn new(points: Vec<Rat>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPartition(
                "need at least two partition points".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Partition { points })
    }

    pub fn uniform(interval: &Interval, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidPartition("need at least one cell".into()));
        }
        let n = rat_int(cells as i64);
        let points = (0..=cells)
            .map(|i| interval.a() + interval.length() * rat_int(i as i64) / &n)
            .collect();
        Partition::new(points)
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    fn cell(&self, i: usize) -> Interval {
        Interval::new(self.points[i].clone(), self.points[i + 1].clone()).unwrap()
    }

    fn require_spans(&self, interval: &Interval) -> Result<()> {
        if self.points.first() != Some(interval.a()) || self.points.last() != Some(interval.b()) {
            return Err(Error::InvalidPartition(format!(
                "partition [{}, {}] does not span {}",
                self.points.first().unwrap(),
                self.points.last().unwrap(),
                interval
            )));
        }
        Ok(())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.points.len()))?;
        for p in &self.points {
            seq.serialize_element(&p.to_string())?;
        }
        seq.end()
    }
}

/// How per-cell derivative ranges are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeStrategy {
    /// Exact polynomial analysis or outward interval enclosure.
    Rigorous,
    /// Finite sampling; refused by the adaptive driver unless best-effort.
    Sampled { best_effort: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedIntegral {
    pub estimate: f64,
    pub radius: f64,
    pub partition: Partition,
    pub rule: RuleId,
    pub n: usize,
    pub cell_ranges: Vec<RangeBound>,
    pub rigor: Rigor,
    pub converged: bool,
}

impl CertifiedIntegral {
    pub fn interval_contains(&self, truth: f64) -> bool {
        (self.estimate - truth).abs() <= self.radius
    }
}

/// Per-cell rule value: rational on the all-exact path, outward interval
/// otherwise.
enum CellEst {
    Exact(Rat),
    Iv(FInterval),
}

struct CellBound {
    est: CellEst,
    /// Upper bound on (range half-spread) x (absolute kernel integral).
    radius_math: f64,
    range: RangeBound,
}

impl CellBound {
    /// Deterministic refinement metric: the cell's radius including its own
    /// representation half-width.
    fn refine_metric(&self) -> f64 {
        let hw = match &self.est {
            CellEst::Exact(r) => FInterval::from_rat(r).half_width(),
            CellEst::Iv(iv) => iv.half_width(),
        };
        add_up(self.radius_math, hw)
    }
}

/// Upper f64 bound for (hi - lo)/2 * absolute; the exact path stays
/// rational until the final conversion.
fn radius_term(range: &RangeBound, absolute: &Rat) -> f64 {
    match (&range.lo, &range.hi) {
        (Scalar::Exact(lo), Scalar::Exact(hi)) => {
            let exact = (hi - lo) / rat_int(2) * absolute;
            rat_to_f64_bracket(&exact).1
        }
        _ => {
            let spread = sub_up(range.hi.to_f64(), range.lo.to_f64());
            let half = mul_up(0.5, spread);
            mul_up(half, rat_to_f64_bracket(absolute).1)
        }
    }
}

/// Interval containing the exact range midpoint.
fn median_interval(range: &RangeBound) -> FInterval {
    match (&range.lo, &range.hi) {
        (Scalar::Exact(lo), Scalar::Exact(hi)) => FInterval::from_rat(&((lo + hi) / rat_int(2))),
        _ => FInterval::point(range.lo.to_f64())
            .add(&FInterval::point(range.hi.to_f64()))
            .mul(&FInterval::point(0.5)),
    }
}

fn point_interval(f: &Function, x: &Rat) -> Result<FInterval> {
    match f {
        Function::Poly(p) => Ok(FInterval::from_rat(&p.eval(x)?)),
        Function::Sym(e) => {
            crate::funcmodel::finterval::eval_expr_interval(e, FInterval::from_rat(x))
        }
    }
}

/// Shared derivative data at partition points ("computed once" for the
/// boundary rule, which reads each point from both adjacent cells).
enum PointData {
    Exact(BTreeMap<Rat, Vec<Rat>>),
    Iv(BTreeMap<Rat, Vec<FInterval>>),
}

fn cell_range(
    f: &Function,
    order: usize,
    cell: &Interval,
    strategy: RangeStrategy,
) -> Result<RangeBound> {
    match (strategy, f) {
        (RangeStrategy::Sampled { .. }, Function::Sym(e)) => sampled_range(e, order, cell, 257),
        _ => f.range(order, cell),
    }
}

/// Interior/boundary sum coefficients, exact.
fn interior_coeff(k: usize, x: &Rat, cell: &Interval) -> Rat {
    let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    (num_traits::pow::pow(cell.b() - x, k + 1) + sign * num_traits::pow::pow(x - cell.a(), k + 1))
        / crate::scalar::factorial(k + 1)
}

fn boundary_coeffs(k: usize, x: &Rat, cell: &Interval) -> (Rat, Rat) {
    let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    let ca = num_traits::pow::pow(x - cell.a(), k + 1) / crate::scalar::factorial(k + 1);
    let cb =
        sign * num_traits::pow::pow(cell.b() - x, k + 1) / crate::scalar::factorial(k + 1);
    (ca, cb)
}

/// Rule arithmetic for one cell.
fn rule_cell(
    rule: RuleId,
    n: usize,
    derivs: &[Function],
    cell: &Interval,
    range: RangeBound,
    point_data: Option<&PointData>,
) -> Result<CellBound> {
    let x = cell.midpoint();
    let (signed, absolute) = kernel_integrals(&x, n, cell)?;
    let pert_sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    let exact_path = derivs[0].as_poly().is_some()
        && match rule {
            RuleId::PMid => true,
            RuleId::InteriorN => range.is_exact(),
            RuleId::BoundaryN => {
                range.is_exact() && matches!(point_data, Some(PointData::Exact(_)))
            }
        };
    let est = if exact_path {
        let dval = |k: usize, t: &Rat| -> Result<Rat> {
            derivs[k].as_poly().unwrap().eval(t)
        };
        let total = match rule {
            RuleId::PMid => cell.length() * dval(0, &x)?,
            RuleId::InteriorN => {
                let mut acc = Rat::from_integer(0.into());
                for k in 0..n {
                    acc += interior_coeff(k, &x, cell) * dval(k, &x)?;
                }
                let med = match (&range.lo, &range.hi) {
                    (Scalar::Exact(lo), Scalar::Exact(hi)) => (lo + hi) / rat_int(2),
                    _ => unreachable!("exact path requires an exact range"),
                };
                acc + &pert_sign * &signed * med
            }
            RuleId::BoundaryN => {
                let data = match point_data {
                    Some(PointData::Exact(map)) => map,
                    _ => unreachable!("exact boundary rule needs exact point data"),
                };
                let mut acc = Rat::from_integer(0.into());
                for k in 0..n {
                    let (ca, cb) = boundary_coeffs(k, &x, cell);
                    acc += ca * &data[cell.a()][k] + cb * &data[cell.b()][k];
                }
                let med = match (&range.lo, &range.hi) {
                    (Scalar::Exact(lo), Scalar::Exact(hi)) => (lo + hi) / rat_int(2),
                    _ => unreachable!("exact path requires an exact range"),
                };
                acc + &signed * med
            }
        };
        CellEst::Exact(total)
    } else {
        let mut acc = FInterval::point(0.0);
        match rule {
            RuleId::PMid => {
                let h = FInterval::from_rat(&cell.length());
                acc = h.mul(&point_interval(&derivs[0], &x)?);
            }
            RuleId::InteriorN => {
                for (k, d) in derivs.iter().take(n).enumerate() {
                    let c = interior_coeff(k, &x, cell);
                    acc = acc.add(&FInterval::from_rat(&c).mul(&point_interval(d, &x)?));
                }
                let pert = FInterval::from_rat(&(&pert_sign * &signed))
                    .mul(&median_interval(&range));
                acc = acc.add(&pert);
            }
            RuleId::BoundaryN => {
                let data = match point_data {
                    Some(PointData::Iv(map)) => map,
                    _ => unreachable!("interval boundary rule needs interval point data"),
                };
                for k in 0..n {
                    let (ca, cb) = boundary_coeffs(k, &x, cell);
                    acc = acc
                        .add(&FInterval::from_rat(&ca).mul(&data[cell.a()][k]))
                        .add(&FInterval::from_rat(&cb).mul(&data[cell.b()][k]));
                }
                let pert = FInterval::from_rat(&signed).mul(&median_interval(&range));
                acc = acc.add(&pert);
            }
        }
        CellEst::Iv(acc)
    };
    Ok(CellBound {
        est,
        radius_math: radius_term(&range, &absolute),
        range,
    })
}

fn order_of(rule: RuleId, n: usize) -> usize {
    match rule {
        RuleId::PMid => 1,
        _ => n,
    }
}

fn check_smoothness(f: &Function, rule: RuleId, n: usize) -> Result<()> {
    if let Some(p) = f.as_poly() {
        let needed = order_of(rule, n).saturating_sub(1);
        if !p.is_smooth(needed) {
            return Err(Error::Precondition(format!(
                "integrand must be C^{} across breakpoints",
                needed
            )));
        }
    }
    Ok(())
}

fn derivative_chain(f: &Function, upto: usize) -> Vec<Function> {
    let mut derivs = vec![f.clone()];
    for _ in 1..upto.max(1) {
        derivs.push(derivs.last().unwrap().derivative());
    }
    derivs
}

fn build_point_data(
    derivs: &[Function],
    n: usize,
    points: &[Rat],
) -> Result<PointData> {
    if derivs[0].as_poly().is_some() {
        let mut map = BTreeMap::new();
        for p in points {
            let vals: Result<Vec<Rat>> = derivs[..n]
                .iter()
                .map(|d| d.as_poly().unwrap().eval(p))
                .collect();
            map.insert(p.clone(), vals?);
        }
        Ok(PointData::Exact(map))
    } else {
        let mut map = BTreeMap::new();
        for p in points {
            let vals: Result<Vec<FInterval>> =
                derivs[..n].iter().map(|d| point_interval(d, p)).collect();
            map.insert(p.clone(), vals?);
        }
        Ok(PointData::Iv(map))
    }
}

/// Boundary cells with float ranges on a polynomial integrand still need the
/// interval point data; pick the representation from the actual cell path.
fn wants_exact_points(f: &Function, ranges: &[RangeBound]) -> bool {
    f.as_poly().is_some() && ranges.iter().all(|r| r.is_exact())
}

fn assemble(
    f: &Function,
    interval: &Interval,
    partition: &Partition,
    rule: RuleId,
    n: usize,
    ranges: Vec<RangeBound>,
    converged: bool,
) -> Result<CertifiedIntegral> {
    partition.require_spans(interval)?;
    if ranges.len() != partition.cells() {
        return Err(Error::InvalidPartition(format!(
            "{} ranges supplied for {} cells",
            ranges.len(),
            partition.cells()
        )));
    }
    check_smoothness(f, rule, n)?;
    let derivs = derivative_chain(f, order_of(rule, n));
    let point_data = if rule == RuleId::BoundaryN {
        if wants_exact_points(f, &ranges) {
            Some(build_point_data(&derivs, n, partition.points())?)
        } else {
            // force the interval representation for mixed paths
            let mut map = BTreeMap::new();
            for p in partition.points() {
                let vals: Result<Vec<FInterval>> =
                    derivs[..n].iter().map(|d| point_interval(d, p)).collect();
                map.insert(p.clone(), vals?);
            }
            Some(PointData::Iv(map))
        }
    } else {
        None
    };

    let mut exact_total: Option<Rat> = Some(Rat::from_integer(0.into()));
    let mut iv_total = FInterval::point(0.0);
    let mut radius_total = 0.0f64;
    let mut rigor = Rigor::Exact;
    let mut cell_ranges = Vec::with_capacity(partition.cells());
    for (i, range) in ranges.into_iter().enumerate() {
        let cell = partition.cell(i);
        rigor = rigor.weakest(range.rigor);
        let cb = rule_cell(rule, n, &derivs, &cell, range, point_data.as_ref())?;
        match (&cb.est, exact_total.take()) {
            (CellEst::Exact(r), Some(acc)) => exact_total = Some(acc + r),
            (CellEst::Exact(r), None) => iv_total = iv_total.add(&FInterval::from_rat(r)),
            (CellEst::Iv(iv), Some(acc)) => {
                iv_total = FInterval::from_rat(&acc).add(iv);
            }
            (CellEst::Iv(iv), None) => iv_total = iv_total.add(iv),
        }
        radius_total = add_up(radius_total, cb.radius_math);
        cell_ranges.push(cb.range);
    }
    let est_iv = match exact_total {
        Some(total) => FInterval::from_rat(&total),
        None => iv_total,
    };
    let radius = add_up(radius_total, est_iv.half_width());
    Ok(CertifiedIntegral {
        estimate: est_iv.mid(),
        radius,
        partition: partition.clone(),
        rule,
        n,
        cell_ranges,
        rigor,
        converged,
    })
}

/// Computes per-cell ranges of the order-th derivative under a strategy.
pub fn compute_cell_ranges(
    f: &Function,
    partition: &Partition,
    order: usize,
    strategy: RangeStrategy,
) -> Result<Vec<RangeBound>> {
    (0..partition.cells())
        .map(|i| cell_range(f, order, &partition.cell(i), strategy))
        .collect()
}

/// Composite midpoint rule: estimate Σ h_i f(mid_i), per-cell radius
/// (Γ_i - γ_i) h_i^2 / 8 from the perturbed point bound at the midpoint.
pub fn certified_midpoint(
    f: &Function,
    interval: &Interval,
    partition: &Partition,
    ranges: Vec<RangeBound>,
) -> Result<CertifiedIntegral> {
    assemble(f, interval, partition, RuleId::PMid, 1, ranges, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NthVariant {
    Interior,
    Boundary,
}

/// Composite n-th order rule from the midpoint forms of the interior or
/// boundary representation, including the median perturbation term.
pub fn certified_nth(
    f: &Function,
    interval: &Interval,
    partition: &Partition,
    n: usize,
    variant: NthVariant,
    ranges: Vec<RangeBound>,
) -> Result<CertifiedIntegral> {
    if n < 1 {
        return Err(Error::OrderTooSmall);
    }
    let rule = match variant {
        NthVariant::Interior => RuleId::InteriorN,
        NthVariant::Boundary => RuleId::BoundaryN,
    };
    assemble(f, interval, partition, rule, n, ranges, true)
}

/// Bisects the largest-radius cell (ties to the leftmost) until the total
/// radius meets `tol` or `max_cells` is reached; the radius is reported
/// truthfully either way.
pub fn adaptive_integrate(
    f: &Function,
    interval: &Interval,
    tol: f64,
    rule: RuleId,
    n: usize,
    max_cells: usize,
    strategy: RangeStrategy,
) -> Result<CertifiedIntegral> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if let RangeStrategy::Sampled { best_effort: false } = strategy {
        return Err(Error::NonRigorousRange);
    }
    let order = order_of(rule, n);
    let mut points = vec![interval.a().clone(), interval.b().clone()];
    let mut ranges = vec![cell_range(f, order, interval, strategy)?];
    let max_cells = max_cells.max(1);
    let derivs = derivative_chain(f, order);
    loop {
        let partition = Partition::new(points.clone())?;
        let result = assemble(f, interval, &partition, rule, n, ranges.clone(), true)?;
        if result.radius <= tol {
            return Ok(result);
        }
        if partition.cells() >= max_cells {
            return Ok(CertifiedIntegral {
                converged: false,
                ..result
            });
        }
        let point_data = if rule == RuleId::BoundaryN {
            Some(build_point_data(&derivs, n, &points)?)
        } else {
            None
        };
        let mut worst = 0usize;
        let mut worst_metric = f64::NEG_INFINITY;
        for i in 0..partition.cells() {
            let cb = rule_cell(
                rule,
                n,
                &derivs,
                &partition.cell(i),
                ranges[i].clone(),
                point_data.as_ref(),
            )?;
            let metric = cb.refine_metric();
            if metric > worst_metric {
                worst_metric = metric;
                worst = i;
            }
        }
        let mid = (&points[worst] + &points[worst + 1]) / rat_int(2);
        let left = Interval::new(points[worst].clone(), mid.clone())?;
        let right = Interval::new(mid.clone(), points[worst + 1].clone())?;
        let r_left = cell_range(f, order, &left, strategy)?;
        let r_right = cell_range(f, order, &right, strategy)?;
        points.insert(worst + 1, mid);
        ranges[worst] = r_left;
        ranges.insert(worst + 1, r_right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::scalar::ratio;

    fn unit() -> Interval {
        Interval::new(rat_int(0), rat_int(1)).unwrap()
    }

    fn fx(text: &str) -> Function {
        Function::from_expr(parse(text).unwrap(), &unit())
    }

    fn rigorous(f: &Function, p: &Partition, order: usize) -> Vec<RangeBound> {
        compute_cell_ranges(f, p, order, RangeStrategy::Rigorous).unwrap()
    }

    #[test]
    fn exp_four_cell_midpoint_matches_closed_form() {
        let f = fx("exp(x)");
        let p = Partition::uniform(&unit(), 4).unwrap();
        let ranges = rigorous(&f, &p, 1);
        let ci = certified_midpoint(&f, &unit(), &p, ranges).unwrap();
        let e = std::f64::consts::E;
        let expected_radius = (e - 1.0) / 128.0;
        assert!(
            (ci.radius - expected_radius).abs() <= 1e-12 * expected_radius,
            "radius {} vs {}",
            ci.radius,
            expected_radius
        );
        assert!((ci.estimate - 1.713815).abs() < 1e-5);
        assert!(ci.interval_contains(e - 1.0));
        assert!((ci.estimate - (e - 1.0)).abs() > 0.004); // genuinely off by ~0.0045
    }

    #[test]
    fn linear_is_exact_with_zero_radius() {
        let f = fx("2*x");
        let p = Partition::uniform(&unit(), 1).unwrap();
        let ci = certified_midpoint(&f, &unit(), &p, rigorous(&f, &p, 1)).unwrap();
        assert_eq!(ci.estimate, 1.0);
        assert_eq!(ci.radius, 0.0);
    }

    #[test]
    fn square_single_cell() {
        let f = fx("x^2");
        let p = Partition::uniform(&unit(), 1).unwrap();
        let ranges = rigorous(&f, &p, 1);
        assert_eq!(ranges[0].lo, crate::scalar::Scalar::Exact(rat_int(0)));
        assert_eq!(ranges[0].hi, crate::scalar::Scalar::Exact(rat_int(2)));
        let ci = certified_midpoint(&f, &unit(), &p, ranges).unwrap();
        assert_eq!(ci.estimate, 0.25);
        assert_eq!(ci.radius, 0.25);
        assert!(ci.interval_contains(1.0 / 3.0));
    }

    #[test]
    fn interior_n1_equals_pmid_bit_for_bit() {
        for text in ["exp(x)", "x^3 - x", "sin(x)", "x^2"] {
            let f = fx(text);
            for cells in [1usize, 3, 8] {
                let p = Partition::uniform(&unit(), cells).unwrap();
                let pm = certified_midpoint(&f, &unit(), &p, rigorous(&f, &p, 1)).unwrap();
                let int1 = certified_nth(
                    &f,
                    &unit(),
                    &p,
                    1,
                    NthVariant::Interior,
                    rigorous(&f, &p, 1),
                )
                .unwrap();
                assert_eq!(pm.estimate.to_bits(), int1.estimate.to_bits(), "{}", text);
                assert_eq!(pm.radius.to_bits(), int1.radius.to_bits(), "{}", text);
            }
        }
    }

    #[test]
    fn exp_second_order_interior_single_cell() {
        let f = fx("exp(x)");
        let p = Partition::uniform(&unit(), 1).unwrap();
        let ranges = rigorous(&f, &p, 2);
        let ci = certified_nth(&f, &unit(), &p, 2, NthVariant::Interior, ranges).unwrap();
        let e = std::f64::consts::E;
        // radius = (Γ2 - γ2)/48 with the enclosure only ulps wider than [1, e]
        let expected = (e - 1.0) / 48.0;
        assert!((ci.radius - expected).abs() < 1e-12);
        assert!(ci.interval_contains(e - 1.0));
    }

    #[test]
    fn low_degree_polynomial_zero_radius_any_rule() {
        // degree <= n-1 gives a vanishing n-th derivative; with the exact
        // total (-1/2, representable) the radius is exactly zero
        let f = fx("3*x - 2");
        let p = Partition::uniform(&unit(), 3).unwrap();
        for variant in [NthVariant::Interior, NthVariant::Boundary] {
            let ci = certified_nth(&f, &unit(), &p, 2, variant, rigorous(&f, &p, 2)).unwrap();
            assert_eq!(ci.radius, 0.0, "{:?}", variant);
            assert_eq!(ci.estimate, -0.5, "{:?}", variant);
        }
    }

    #[test]
    fn adaptive_exp_converges() {
        let f = fx("exp(x)");
        let ci = adaptive_integrate(
            &f,
            &unit(),
            1e-4,
            RuleId::PMid,
            1,
            4096,
            RangeStrategy::Rigorous,
        )
        .unwrap();
        assert!(ci.converged);
        assert!(ci.radius <= 1e-4);
        assert!(ci.interval_contains(std::f64::consts::E - 1.0));
    }

    #[test]
    fn adaptive_linear_one_cell() {
        let f = fx("2*x");
        let ci = adaptive_integrate(
            &f,
            &unit(),
            1e-12,
            RuleId::PMid,
            1,
            64,
            RangeStrategy::Rigorous,
        )
        .unwrap();
        assert!(ci.converged);
        assert_eq!(ci.partition.cells(), 1);
        assert_eq!(ci.radius, 0.0);
    }

    #[test]
    fn adaptive_reports_unmet_tolerance() {
        let f = fx("exp(x)");
        let ci = adaptive_integrate(
            &f,
            &unit(),
            1e-12,
            RuleId::PMid,
            1,
            2,
            RangeStrategy::Rigorous,
        )
        .unwrap();
        assert!(!ci.converged);
        assert!(ci.radius > 1e-12);
        assert_eq!(ci.partition.cells(), 2);
    }

    #[test]
    fn sampled_ranges_refused_without_best_effort() {
        let f = fx("exp(x)");
        let err = adaptive_integrate(
            &f,
            &unit(),
            1e-4,
            RuleId::PMid,
            1,
            64,
            RangeStrategy::Sampled { best_effort: false },
        );
        assert!(matches!(err, Err(Error::NonRigorousRange)));
        let ok = adaptive_integrate(
            &f,
            &unit(),
            1e-3,
            RuleId::PMid,
            1,
            4096,
            RangeStrategy::Sampled { best_effort: true },
        )
        .unwrap();
        assert_eq!(ok.rigor, Rigor::Sampled);
    }

    #[test]
    fn monotone_refinement_under_doubling() {
        let f = fx("x^3 - x");
        let mut prev = f64::INFINITY;
        for cells in [1usize, 2, 4, 8, 16, 32] {
            let p = Partition::uniform(&unit(), cells).unwrap();
            let ci = certified_midpoint(&f, &unit(), &p, rigorous(&f, &p, 1)).unwrap();
            assert!(ci.radius <= prev, "cells = {}", cells);
            prev = ci.radius;
        }
    }

    #[test]
    fn boundary_rule_contains_truth() {
        let f = fx("x^3");
        let p = Partition::uniform(&unit(), 2).unwrap();
        let ci = certified_nth(&f, &unit(), &p, 2, NthVariant::Boundary, rigorous(&f, &p, 2))
            .unwrap();
        assert!(ci.interval_contains(0.25));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![rat_int(0)]).is_err());
        assert!(Partition::new(vec![rat_int(1), rat_int(0)]).is_err());
        let p = Partition::new(vec![rat_int(0), ratio(1, 2)]).unwrap();
        let f = fx("x");
        // partition not spanning the interval
        assert!(certified_midpoint(&f, &unit(), &p, rigorous(&f, &p, 1)).is_err());
    }
}
