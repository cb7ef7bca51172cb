//! Deterministic random instances for the soundness sweeps. Every draw is a
//! pure function of (seed, trial), independent of thread scheduling: each
//! trial owns a counter-keyed ChaCha8 stream.

use crate::error::Result;
use crate::funcmodel::{BVFunction, Interval, JumpRecord, PiecewisePoly, Poly};
use crate::scalar::{rat_int, Rat};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct Profile {
    /// Maximum polynomial degree per piece.
    pub degree: usize,
    /// Maximum number of pieces.
    pub pieces: usize,
    /// Numerators are drawn from [-coeff_bound, coeff_bound].
    pub coeff_bound: i64,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            degree: 6,
            pieces: 5,
            coeff_bound: 4,
        }
    }
}

const DENOMS: [i64; 6] = [1, 2, 3, 4, 6, 12];

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    key[24..32].copy_from_slice(&0x85eb_ca6b_27d4_eb4fu64.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn rand_rat(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    let num = rng.gen_range(-bound..=bound);
    let den = DENOMS[rng.gen_range(0..DENOMS.len())];
    Rat::new(num.into(), den.into())
}

pub fn rand_interval(rng: &mut ChaCha8Rng) -> Interval {
    let a = Rat::new(rng.gen_range(-8i64..=4).into(), rng.gen_range(1i64..=4).into());
    let len = Rat::new(rng.gen_range(1i64..=6).into(), rng.gen_range(1i64..=2).into());
    Interval::new(a.clone(), a + len).unwrap()
}

pub fn rand_point(rng: &mut ChaCha8Rng, interval: &Interval) -> Rat {
    let j = rng.gen_range(0i64..=16);
    interval.a() + interval.length() * Rat::new(j.into(), 16.into())
}

fn rand_poly(rng: &mut ChaCha8Rng, profile: &Profile) -> Poly {
    let degree = rng.gen_range(0..=profile.degree);
    let coeffs = (0..=degree)
        .map(|_| rand_rat(rng, profile.coeff_bound))
        .collect();
    Poly::new(coeffs)
}

/// Nonzero-spread single piece for the n-th degree sweeps (degree >= 1 keeps
/// the instances non-degenerate most of the time; zero polys are still
/// legal draws).
pub fn rand_single_poly(rng: &mut ChaCha8Rng, profile: &Profile, span: &Interval) -> PiecewisePoly {
    PiecewisePoly::from_poly(rand_poly(rng, profile), span)
}

pub fn rand_piecewise(
    rng: &mut ChaCha8Rng,
    profile: &Profile,
    span: &Interval,
    continuous: bool,
) -> PiecewisePoly {
    let k = rng.gen_range(1..=profile.pieces.max(1));
    let mut cuts: Vec<i64> = vec![];
    while cuts.len() < k - 1 {
        let j = rng.gen_range(1i64..=15);
        if !cuts.contains(&j) {
            cuts.push(j);
        }
    }
    cuts.sort_unstable();
    let mut breaks = vec![span.a().clone()];
    for j in cuts {
        breaks.push(span.a() + span.length() * Rat::new(j.into(), 16.into()));
    }
    breaks.push(span.b().clone());
    let mut pieces: Vec<Poly> = (0..k).map(|_| rand_poly(rng, profile)).collect();
    if continuous {
        for i in 1..k {
            let t = &breaks[i];
            let prev = pieces[i - 1].eval(t);
            let cur = pieces[i].eval(t);
            pieces[i] = &pieces[i] + &Poly::constant(prev - cur);
        }
    }
    PiecewisePoly::new(breaks, pieces).unwrap()
}

/// Zero-mean weight: a random piecewise polynomial minus its own mean, so
/// the orthogonality precondition holds exactly.
pub fn rand_zero_mean(rng: &mut ChaCha8Rng, profile: &Profile, span: &Interval) -> PiecewisePoly {
    let l0 = rand_piecewise(rng, profile, span, false);
    let mean = l0.mean(span).unwrap();
    l0.sub_const(&mean)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BvShape {
    Any,
    /// u(a) = u(b), enforced by a point override at b.
    Closed,
    /// u(b) != u(a), enforced likewise.
    OpenEnds,
}

pub fn rand_bv(
    rng: &mut ChaCha8Rng,
    profile: &Profile,
    span: &Interval,
    shape: BvShape,
) -> Result<BVFunction> {
    let small = Profile {
        degree: profile.degree.min(3),
        pieces: profile.pieces.min(3),
        coeff_bound: profile.coeff_bound,
    };
    let base = rand_piecewise(rng, &small, span, false);
    let mut jumps: Vec<JumpRecord> = vec![];
    if rng.gen_bool(0.7) {
        jumps.push(JumpRecord {
            at: span.a().clone(),
            left: base.eval(span.a())?,
            point: rand_rat(rng, profile.coeff_bound),
            right: base.eval_right(span.a())?,
        });
    }
    if rng.gen_bool(0.5) {
        let t = span.a() + span.length() * Rat::new(rng.gen_range(1i64..=15).into(), 16.into());
        if !jumps.iter().any(|j| j.at == t) {
            jumps.push(JumpRecord {
                at: t.clone(),
                left: base.eval_left(&t)?,
                point: rand_rat(rng, profile.coeff_bound),
                right: base.eval_right(&t)?,
            });
        }
    }
    let value_at = |jumps: &[JumpRecord], t: &Rat| -> Result<Rat> {
        match jumps.iter().find(|j| &j.at == t) {
            Some(j) => Ok(j.point.clone()),
            None => base.eval(t),
        }
    };
    let u_a = value_at(&jumps, span.a())?;
    let u_b = value_at(&jumps, span.b())?;
    let forced_point = match shape {
        BvShape::Any => {
            if rng.gen_bool(0.5) {
                Some(rand_rat(rng, profile.coeff_bound))
            } else {
                None
            }
        }
        BvShape::Closed => {
            if u_a == u_b {
                None
            } else {
                Some(u_a.clone())
            }
        }
        BvShape::OpenEnds => {
            if u_a != u_b {
                None
            } else {
                Some(&u_a + rat_int(1))
            }
        }
    };
    if let Some(point) = forced_point {
        jumps.retain(|j| &j.at != span.b());
        jumps.push(JumpRecord {
            at: span.b().clone(),
            left: base.eval_left(span.b())?,
            point,
            right: base.eval(span.b())?,
        });
    }
    BVFunction::new(base, jumps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_deterministic() {
        let p = Profile::default();
        let span = Interval::new(rat_int(0), rat_int(1)).unwrap();
        let a = rand_piecewise(&mut trial_rng(42, 0), &p, &span, false);
        let b = rand_piecewise(&mut trial_rng(42, 0), &p, &span, false);
        assert_eq!(a, b);
        let c = rand_piecewise(&mut trial_rng(42, 1), &p, &span, false);
        assert!(a != c || a.pieces().len() == 1); // different stream, almost surely different
    }

    #[test]
    fn zero_mean_is_exactly_zero_mean() {
        let p = Profile::default();
        for trial in 0..50 {
            let mut rng = trial_rng(7, trial);
            let span = rand_interval(&mut rng);
            let l = rand_zero_mean(&mut rng, &p, &span);
            assert!(l.integrate(&span).unwrap().is_zero(), "trial {}", trial);
        }
    }

    #[test]
    fn closed_bv_closes_exactly() {
        let p = Profile::default();
        for trial in 0..50 {
            let mut rng = trial_rng(3, trial);
            let span = rand_interval(&mut rng);
            let u = rand_bv(&mut rng, &p, &span, BvShape::Closed).unwrap();
            assert_eq!(u.value_at_a(), u.value_at_b(), "trial {}", trial);
            let open = rand_bv(&mut rng, &p, &span, BvShape::OpenEnds).unwrap();
            assert_ne!(open.value_at_a(), open.value_at_b(), "trial {}", trial);
        }
    }

    #[test]
    fn continuous_pieces_glue() {
        let p = Profile::default();
        for trial in 0..50 {
            let mut rng = trial_rng(11, trial);
            let span = rand_interval(&mut rng);
            let f = rand_piecewise(&mut rng, &p, &span, true);
            assert!(f.is_continuous(), "trial {}", trial);
        }
    }
}
