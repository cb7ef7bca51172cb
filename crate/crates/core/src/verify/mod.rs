//! The evidence engine: deterministic randomized soundness sweeps over the
//! whole inequality catalog, the extremal instances that achieve each sharp
//! constant, and the high-precision integral oracle.

mod oracle;
pub mod random;

pub use oracle::oracle_integral;
pub use random::{rand_interval, rand_point, trial_rng, BvShape, Profile};

use crate::error::Result;
use crate::funcmodel::{derivative_range, literal, BVFunction, Function, Interval, PiecewisePoly};
use crate::inequalities::{
    bound_boundary_nth, bound_cheby, bound_gruss_classic, bound_gruss_mean,
    bound_gruss_stieltjes, bound_interior_nth, bound_ostrowski, bound_ostrowski_gruss,
    bound_stieltjes, bound_trapezoid, bound_zero_mean, BoundReport, InequalityId,
};
use crate::scalar::{NumericMode, Rat, Scalar};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Serialized instance: enough to reproduce one trial from the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct TrialDescriptor {
    pub inequality: InequalityId,
    pub trial: usize,
    pub a: String,
    pub b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub id: InequalityId,
    pub trials: usize,
    pub violations: usize,
    pub max_ratio: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<TrialDescriptor>,
    pub seed: u64,
    pub mode: NumericMode,
}

/// One evaluated trial plus its serialized form.
pub struct TrialRun {
    pub report: BoundReport,
    pub descriptor: TrialDescriptor,
    /// The classic-form right-hand side on the same instance and range
    /// (present for perturbed ids; used by the dominance check).
    pub classic_rhs: Option<Scalar>,
}

struct TrialInstance {
    interval: Interval,
    f: PiecewisePoly,
    g: Option<PiecewisePoly>,
    l: Option<PiecewisePoly>,
    u: Option<BVFunction>,
    x: Option<Rat>,
    n: Option<usize>,
}

impl TrialInstance {
    fn describe(&self, id: InequalityId, trial: usize, report: &BoundReport) -> TrialDescriptor {
        TrialDescriptor {
            inequality: id,
            trial,
            a: self.interval.a().to_string(),
            b: self.interval.b().to_string(),
            f: Some(literal::piecewise_literal(&self.f)),
            g: self.g.as_ref().map(literal::piecewise_literal),
            l: self.l.as_ref().map(literal::piecewise_literal),
            u: self.u.as_ref().map(literal::bv_literal),
            x: self.x.as_ref().map(|x| x.to_string()),
            n: self.n,
            lhs: report.lhs.clone(),
            rhs: report.rhs.clone(),
        }
    }
}

/// Generates the instance for one (id, seed, trial) triple. Deterministic.
fn generate(id: InequalityId, seed: u64, trial: usize, profile: &Profile) -> Result<TrialInstance> {
    let mut rng = trial_rng(seed, trial as u64);
    let interval = rand_interval(&mut rng);
    use InequalityId::*;
    let inst = match id {
        ZeroMean => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, false),
            l: Some(random::rand_zero_mean(&mut rng, profile, &interval)),
            g: None,
            u: None,
            x: None,
            n: None,
            interval,
        },
        GrussMean | Gruss => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, false),
            g: Some(random::rand_piecewise(&mut rng, profile, &interval, false)),
            l: None,
            u: None,
            x: None,
            n: None,
            interval,
        },
        Stieltjes => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, true),
            u: Some(random::rand_bv(&mut rng, profile, &interval, BvShape::Closed)?),
            g: None,
            l: None,
            x: None,
            n: None,
            interval,
        },
        StieltjesWeighted => {
            let f = random::rand_piecewise(&mut rng, profile, &interval, true);
            let u = random::rand_bv(&mut rng, profile, &interval, BvShape::OpenEnds)?;
            let l0 = random::rand_piecewise(&mut rng, profile, &interval, true);
            // shift by a constant so ∫ l du = 0 exactly
            let denom = u.value_at_b() - u.value_at_a();
            let c = u.stieltjes_poly(&l0)? / denom;
            let l = l0.sub_const(&c);
            TrialInstance {
                f,
                l: Some(l),
                u: Some(u),
                g: None,
                x: None,
                n: None,
                interval,
            }
        }
        GrussStieltjes => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, true),
            g: Some(random::rand_piecewise(&mut rng, profile, &interval, true)),
            u: Some(random::rand_bv(&mut rng, profile, &interval, BvShape::OpenEnds)?),
            l: None,
            x: None,
            n: None,
            interval,
        },
        Ostrowski | OstrowskiPert | Trapezoid | TrapezoidPert => {
            let f = random::rand_piecewise(&mut rng, profile, &interval, true);
            let x = rand_point(&mut rng, &interval);
            TrialInstance {
                f,
                x: Some(x),
                g: None,
                l: None,
                u: None,
                n: None,
                interval,
            }
        }
        OGruss | OGrussPert => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, true),
            g: Some(random::rand_piecewise(&mut rng, profile, &interval, false)),
            l: None,
            u: None,
            x: None,
            n: None,
            interval,
        },
        Cheby => TrialInstance {
            f: random::rand_piecewise(&mut rng, profile, &interval, true),
            g: Some(random::rand_piecewise(&mut rng, profile, &interval, true)),
            l: None,
            u: None,
            x: None,
            n: None,
            interval,
        },
        InteriorN | InteriorNPert | BoundaryN | BoundaryNPert => {
            let f = random::rand_single_poly(&mut rng, profile, &interval);
            let n = rng.gen_range(1usize..=4);
            let x = rand_point(&mut rng, &interval);
            TrialInstance {
                f,
                x: Some(x),
                n: Some(n),
                g: None,
                l: None,
                u: None,
                interval,
            }
        }
    };
    Ok(inst)
}

/// Evaluates one trial in exact mode; for perturbed ids also evaluates the
/// classic right-hand side on the same instance and range.
pub fn run_trial(
    id: InequalityId,
    seed: u64,
    trial: usize,
    profile: &Profile,
) -> Result<TrialRun> {
    let inst = generate(id, seed, trial, profile)?;
    let interval = inst.interval.clone();
    let f = Function::Poly(inst.f.clone());
    use InequalityId::*;
    let (report, classic_rhs) = match id {
        ZeroMean => {
            let r = derivative_range(&inst.f, 0, &interval)?;
            let l = Function::Poly(inst.l.clone().unwrap());
            (bound_zero_mean(&f, &l, &r, &interval)?, None)
        }
        GrussMean => {
            let r = derivative_range(&inst.f, 0, &interval)?;
            let g = Function::Poly(inst.g.clone().unwrap());
            (bound_gruss_mean(&f, &g, &r, &interval)?, None)
        }
        Gruss => {
            let rf = derivative_range(&inst.f, 0, &interval)?;
            let g = inst.g.clone().unwrap();
            let rg = derivative_range(&g, 0, &interval)?;
            (
                bound_gruss_classic(&f, &Function::Poly(g), &rf, &rg, &interval)?,
                None,
            )
        }
        Stieltjes => {
            let r = derivative_range(&inst.f, 0, &interval)?;
            (bound_stieltjes(&f, inst.u.as_ref().unwrap(), &r, None)?, None)
        }
        StieltjesWeighted => {
            let r = derivative_range(&inst.f, 0, &interval)?;
            let l = Function::Poly(inst.l.clone().unwrap());
            (
                bound_stieltjes(&f, inst.u.as_ref().unwrap(), &r, Some(&l))?,
                None,
            )
        }
        GrussStieltjes => {
            let r = derivative_range(&inst.f, 0, &interval)?;
            let g = Function::Poly(inst.g.clone().unwrap());
            (
                bound_gruss_stieltjes(&f, &g, inst.u.as_ref().unwrap(), &r)?,
                None,
            )
        }
        Ostrowski | OstrowskiPert => {
            let r = derivative_range(&inst.f, 1, &interval)?;
            let x = inst.x.as_ref().unwrap();
            let rep = bound_ostrowski(&f, x, &interval, id == OstrowskiPert, Some(&r))?;
            let classic = if id == OstrowskiPert {
                Some(bound_ostrowski(&f, x, &interval, false, Some(&r))?.rhs)
            } else {
                None
            };
            (rep, classic)
        }
        Trapezoid | TrapezoidPert => {
            let r = derivative_range(&inst.f, 1, &interval)?;
            let x = inst.x.as_ref().unwrap();
            let rep = bound_trapezoid(&f, x, &interval, id == TrapezoidPert, Some(&r))?;
            let classic = if id == TrapezoidPert {
                Some(bound_trapezoid(&f, x, &interval, false, Some(&r))?.rhs)
            } else {
                None
            };
            (rep, classic)
        }
        OGruss | OGrussPert => {
            let rf = derivative_range(&inst.f, 1, &interval)?;
            let g = inst.g.clone().unwrap();
            let rg = derivative_range(&g, 0, &interval)?;
            let g = Function::Poly(g);
            let rep = bound_ostrowski_gruss(&f, &g, &interval, id == OGrussPert, &rf, &rg)?;
            let classic = if id == OGrussPert {
                Some(bound_ostrowski_gruss(&f, &g, &interval, false, &rf, &rg)?.rhs)
            } else {
                None
            };
            (rep, classic)
        }
        Cheby => {
            let g = Function::Poly(inst.g.clone().unwrap());
            (bound_cheby(&f, &g, &interval)?, None)
        }
        InteriorN | InteriorNPert => {
            let n = inst.n.unwrap();
            let r = derivative_range(&inst.f, n, &interval)?;
            let x = inst.x.as_ref().unwrap();
            let rep = bound_interior_nth(&f, x, n, &interval, id == InteriorNPert, Some(&r))?;
            let classic = if id == InteriorNPert {
                Some(bound_interior_nth(&f, x, n, &interval, false, Some(&r))?.rhs)
            } else {
                None
            };
            (rep, classic)
        }
        BoundaryN | BoundaryNPert => {
            let n = inst.n.unwrap();
            let r = derivative_range(&inst.f, n, &interval)?;
            let x = inst.x.as_ref().unwrap();
            let rep = bound_boundary_nth(&f, x, n, &interval, id == BoundaryNPert, Some(&r))?;
            let classic = if id == BoundaryNPert {
                Some(bound_boundary_nth(&f, x, n, &interval, false, Some(&r))?.rhs)
            } else {
                None
            };
            (rep, classic)
        }
    };
    let descriptor = inst.describe(id, trial, &report);
    Ok(TrialRun {
        report,
        descriptor,
        classic_rhs,
    })
}

fn dump_reproducer(descriptor: &TrialDescriptor, seed: u64) {
    let dir = std::env::var("CERTBOUND_REPRO_DIR").unwrap_or_else(|_| ".".to_string());
    let path = format!(
        "{}/certbound-violation-{}-{}-{}.json",
        dir, descriptor.inequality, seed, descriptor.trial
    );
    if let Ok(json) = serde_json::to_string_pretty(descriptor) {
        let _ = std::fs::write(path, json);
    }
}

/// Runs `trials` exact-mode instances of one inequality. Parallel, with a
/// schedule-independent result; a violation dumps its reproducer file
/// before being counted.
pub fn sweep(id: InequalityId, trials: usize, seed: u64, profile: &Profile) -> Result<SweepReport> {
    let outcomes: Vec<(usize, TrialRun)> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(id, seed, t, profile).map(|run| (t, run)))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = 0usize;
    let mut max_ratio = Scalar::zero();
    let mut argmax: Option<TrialDescriptor> = None;
    for (_, run) in &outcomes {
        debug_assert_eq!(run.report.mode, NumericMode::Exact);
        if !run.report.holds() {
            dump_reproducer(&run.descriptor, seed);
            violations += 1;
        }
        if run.report.ratio > max_ratio {
            max_ratio = run.report.ratio.clone();
            argmax = Some(run.descriptor.clone());
        }
    }
    Ok(SweepReport {
        id,
        trials,
        violations,
        max_ratio,
        argmax,
        seed,
        mode: NumericMode::Exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessCase {
    pub id: InequalityId,
    pub construction: String,
    pub citation: String,
    pub expected_ratio: Scalar,
    pub achieved_ratio: Scalar,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

fn case(
    id: InequalityId,
    construction: &str,
    citation: &str,
    report: &BoundReport,
) -> SharpnessCase {
    SharpnessCase {
        id,
        construction: construction.to_string(),
        citation: citation.to_string(),
        expected_ratio: Scalar::one(),
        achieved_ratio: report.ratio.clone(),
        lhs: report.lhs.clone(),
        rhs: report.rhs.clone(),
    }
}

/// The shipped extremal instances: each achieves its sharp constant with
/// ratio exactly 1 in exact arithmetic.
pub fn sharpness_cases() -> Result<Vec<SharpnessCase>> {
    let unit = Interval::new(Rat::from_integer(0.into()), crate::scalar::rat_int(1))?;
    let step = literal::parse_piecewise("pw[(0,1/2): -1; (1/2,1): 1]")?;
    let step_f = Function::Poly(step.clone());
    let ident = Function::Poly(PiecewisePoly::identity(&unit));
    let indicator = literal::parse_bv("bv[pieces: pw[(0,1): 1]; jumps: (0,0,0,1),(1,1,0,0)]")?;
    let three_level = literal::parse_bv("bv[pieces: pw[(0,1): 0]; jumps: (0,0,-1,0),(1,0,1,0)]")?;
    let mut cases = vec![];

    let r_step = derivative_range(&step, 0, &unit)?;
    cases.push(case(
        InequalityId::ZeroMean,
        "f = l = step(-1 on [0,1/2], +1 on (1/2,1])",
        "midpoint step pair: |integral of f*l| = b - a meets (1/2)(M-m)*L1(l) = b - a",
        &bound_zero_mean(&step_f, &step_f, &r_step, &unit)?,
    ));

    let r_ident = derivative_range(&PiecewisePoly::identity(&unit), 0, &unit)?;
    cases.push(case(
        InequalityId::Stieltjes,
        "f(x) = x, u = indicator of (0,1) with u(0) = u(1) = 0",
        "indicator integrator: integral f du = -1 against (1/2)(1-0)*2 = 1",
        &bound_stieltjes(&ident, &indicator, &r_ident, None)?,
    ));

    cases.push(case(
        InequalityId::GrussStieltjes,
        "f = g = x, u = (-1 at 0, 0 on (0,1), 1 at 1)",
        "three-level integrator: both sides reduce to (b-a)^2/4 = 1/4",
        &bound_gruss_stieltjes(&ident, &ident, &three_level, &r_ident)?,
    ));

    cases.push(case(
        InequalityId::Ostrowski,
        "f(t) = t at x = b",
        "endpoint evaluation of the identity map: both sides are (b-a)/2",
        &bound_ostrowski(&ident, &crate::scalar::rat_int(1), &unit, false, None)?,
    ));

    cases.push(case(
        InequalityId::Cheby,
        "f = g = t on [0,1]",
        "identity pair: covariance 1/12 meets (1/12)(b-a)^2",
        &bound_cheby(&ident, &ident, &unit)?,
    ));

    let rf = derivative_range(&PiecewisePoly::identity(&unit), 1, &unit)?;
    let rg = derivative_range(&step, 0, &unit)?;
    cases.push(case(
        InequalityId::OGruss,
        "f = t, g = step(-1/+1) on [0,1]",
        "linear-step pair: covariance 1/4 meets (1/8)(b-a)(M-m)*sup|f'|",
        &bound_ostrowski_gruss(&ident, &step_f, &unit, false, &rf, &rg)?,
    ));

    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn all_shipped_cases_achieve_ratio_one() {
        let cases = sharpness_cases().unwrap();
        assert!(cases.len() >= 6);
        for c in &cases {
            assert_eq!(
                c.achieved_ratio,
                Scalar::Exact(Rat::one()),
                "{} not sharp",
                c.id
            );
        }
    }

    #[test]
    fn small_sweeps_have_no_violations() {
        let profile = Profile::default();
        for id in [
            InequalityId::ZeroMean,
            InequalityId::Cheby,
            InequalityId::Stieltjes,
            InequalityId::OGrussPert,
            InequalityId::InteriorNPert,
        ] {
            let rep = sweep(id, 50, 42, &profile).unwrap();
            assert_eq!(rep.violations, 0, "{}", id);
            assert!(rep.max_ratio <= Scalar::Exact(Rat::one()), "{}", id);
        }
    }

    #[test]
    fn sweep_is_deterministic_and_parallel_safe() {
        let profile = Profile::default();
        let a = sweep(InequalityId::Gruss, 60, 9, &profile).unwrap();
        let b = sweep(InequalityId::Gruss, 60, 9, &profile).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn empty_sweep() {
        let rep = sweep(InequalityId::Cheby, 0, 1, &Profile::default()).unwrap();
        assert_eq!(rep.trials, 0);
        assert_eq!(rep.violations, 0);
        assert!(rep.max_ratio.is_zero());
        assert!(rep.argmax.is_none());
    }

    #[test]
    fn perturbed_rhs_dominated_by_classic() {
        let profile = Profile::default();
        for id in [
            InequalityId::OstrowskiPert,
            InequalityId::TrapezoidPert,
            InequalityId::OGrussPert,
            InequalityId::InteriorNPert,
            InequalityId::BoundaryNPert,
        ] {
            for trial in 0..40 {
                let run = run_trial(id, 5, trial, &profile).unwrap();
                let classic = run.classic_rhs.unwrap();
                assert!(
                    run.report.rhs <= classic,
                    "{} trial {}: {} > {}",
                    id,
                    trial,
                    run.report.rhs,
                    classic
                );
            }
        }
    }
}
