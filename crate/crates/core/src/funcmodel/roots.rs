//! Exact real-root isolation on an interval (Sturm sequences plus rational
//! root extraction) and the certified absolute-integral built on it.
//!
//! Every distinct real root inside the query interval comes back either as an
//! exact rational or as a tight open bracket with rational endpoints that are
//! provably not roots. Downstream consumers split integrals at the exact
//! roots and bound the bracket contributions with exact interval arithmetic,
//! so no floating point enters this path.

use super::poly::Poly;
use crate::scalar::{ratio, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Bisection depth for irrational-root brackets: width shrinks by 2^-60 of
/// the starting gap, which keeps the outward slack far below any reported
/// digit while the denominators stay a single machine word.
const REFINE_STEPS: usize = 60;

/// Rational-root extraction gives up beyond this many divisor candidates.
const MAX_DIVISORS: usize = 512;

#[derive(Clone, Debug)]
pub enum RootLoc {
    Exact(Rat),
    /// Open bracket containing exactly one root; endpoints are not roots.
    Bracket { lo: Rat, hi: Rat },
}

impl RootLoc {
    pub fn low(&self) -> &Rat {
        match self {
            RootLoc::Exact(r) => r,
            RootLoc::Bracket { lo, .. } => lo,
        }
    }
}

fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(u64::MAX) {
        return None;
    }
    let mut out = vec![];
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            out.push(&n / &d);
            if out.len() > cap {
                return None;
            }
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Scales to a primitive integer polynomial and enumerates rational root
/// candidates p/q with p | a0, q | an. Returns None when the coefficient
/// divisors are too expensive to enumerate.
fn rational_roots(p: &Poly) -> Option<Vec<Rat>> {
    let deg = p.degree()?;
    if deg == 0 {
        return Some(vec![]);
    }
    // clear denominators
    let mut scale = BigInt::one();
    for c in p.coeffs() {
        scale = scale.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&scale / c.denom()))
        .collect();
    // factor out x^k
    let k = ints.iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![];
    if k > 0 {
        roots.push(Rat::zero());
    }
    let body = &ints[k..];
    if body.len() <= 1 {
        return Some(roots);
    }
    let a0 = &body[0];
    let an = body.last().unwrap();
    let ps = divisors(a0, MAX_DIVISORS)?;
    let qs = divisors(an, MAX_DIVISORS)?;
    if ps.len() * qs.len() > 4 * MAX_DIVISORS {
        return None;
    }
    for num in &ps {
        for den in &qs {
            for sgn in [1, -1] {
                let cand = Rat::new(num * BigInt::from(sgn), den.clone());
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut prev: i8 = 0;
        for q in &self.chain {
            let s = q.sign_at(x);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Number of distinct roots in (lo, hi] (requires square-free head).
    fn count(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// All distinct real roots of `p` in the closed interval [a, b], ascending.
pub fn isolate_roots(p: &Poly, a: &Rat, b: &Rat) -> Vec<RootLoc> {
    assert!(a <= b);
    if p.is_zero() || p.degree() == Some(0) {
        return vec![];
    }
    let mut q = p.square_free();
    let mut exact: Vec<Rat> = vec![];

    for end in [a, b] {
        if q.eval(end).is_zero() {
            exact.push(end.clone());
            q = q.deflate(end);
        }
    }
    if a == b {
        exact.dedup();
        return exact.into_iter().map(RootLoc::Exact).collect();
    }

    if let Some(rs) = rational_roots(&q) {
        for r in rs {
            if &r > a && &r < b {
                exact.push(r.clone());
                q = q.deflate(&r);
            }
        }
        // everything left in (a,b) is irrational
    }

    let mut out: Vec<RootLoc> = exact.into_iter().map(RootLoc::Exact).collect();
    if q.degree().unwrap_or(0) >= 1 {
        let sturm = Sturm::new(&q);
        let mut stack = vec![(a.clone(), b.clone(), sturm.count(a, b))];
        while let Some((lo, hi, n)) = stack.pop() {
            match n {
                0 => {}
                1 => out.push(refine_bracket(&q, lo, hi)),
                _ => {
                    // split point must not be a root, or the half-counts
                    // would overlap; roots are finite so the nudge terminates
                    let mut split = (&lo + &hi) / ratio(2, 1);
                    let mut delta = (&hi - &lo) / ratio(1 << 20, 1);
                    while q.eval(&split).is_zero() {
                        split += &delta;
                        delta = &delta / ratio(2, 1);
                    }
                    let left = sturm.count(&lo, &split);
                    let right = sturm.count(&split, &hi);
                    stack.push((lo, split.clone(), left));
                    stack.push((split, hi, right));
                }
            }
        }
    }
    out.sort_by(|x, y| x.low().cmp(y.low()));
    out
}

/// Shrinks (lo, hi] around the single simple root by sign bisection.
fn refine_bracket(q: &Poly, mut lo: Rat, mut hi: Rat) -> RootLoc {
    let mut slo = q.sign_at(&lo);
    if slo == 0 {
        // root sits at the open end; shouldn't happen after deflation
        return RootLoc::Exact(lo);
    }
    if q.sign_at(&hi) == 0 {
        return RootLoc::Exact(hi);
    }
    for _ in 0..REFINE_STEPS {
        let mid = (&lo + &hi) / ratio(2, 1);
        let sm = q.sign_at(&mid);
        if sm == 0 {
            return RootLoc::Exact(mid);
        }
        if sm == slo {
            lo = mid;
            slo = sm;
        } else {
            hi = mid;
        }
    }
    RootLoc::Bracket { lo, hi }
}

/// Certified upper bound for ∫_a^b |p| dt, exact whenever every root of `p`
/// in (a,b) is rational. Splits at isolated roots; sign-constant segments
/// integrate exactly, irrational brackets contribute width * sup|p|.
pub fn abs_integral(p: &Poly, a: &Rat, b: &Rat) -> (Rat, bool) {
    assert!(a <= b);
    if p.is_zero() || a == b {
        return (Rat::zero(), true);
    }
    let anti = p.antiderivative();
    let mut total = Rat::zero();
    let mut exact = true;
    let mut cursor = a.clone();
    let segment = |from: &Rat, to: &Rat, total: &mut Rat| {
        if from < to {
            *total += (anti.eval(to) - anti.eval(from)).abs();
        }
    };
    for loc in isolate_roots(p, a, b) {
        match loc {
            RootLoc::Exact(r) => {
                segment(&cursor, &r, &mut total);
                cursor = r;
            }
            RootLoc::Bracket { lo, hi } => {
                segment(&cursor, &lo, &mut total);
                let (vlo, vhi) = p.eval_interval(&lo, &hi);
                let sup = vlo.abs().max(vhi.abs());
                total += (&hi - &lo) * sup;
                exact = false;
                cursor = hi;
            }
        }
    }
    segment(&cursor, b, &mut total);
    (total, exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (x - 1/3)(x + 2) = x^2 + 5/3 x - 2/3
        let f = Poly::new(vec![ratio(-2, 3), ratio(5, 3), rat_int(1)]);
        let roots = isolate_roots(&f, &rat_int(-3), &rat_int(3));
        assert_eq!(roots.len(), 2);
        assert!(matches!(&roots[0], RootLoc::Exact(r) if *r == rat_int(-2)));
        assert!(matches!(&roots[1], RootLoc::Exact(r) if *r == ratio(1, 3)));
    }

    #[test]
    fn irrational_roots_bracketed() {
        let f = p(&[-2, 0, 1]); // x^2 - 2
        let roots = isolate_roots(&f, &rat_int(0), &rat_int(2));
        assert_eq!(roots.len(), 1);
        match &roots[0] {
            RootLoc::Bracket { lo, hi } => {
                assert!(f.sign_at(lo) != f.sign_at(hi));
                assert!((hi - lo) < ratio(1, 1 << 50));
            }
            RootLoc::Exact(_) => panic!("sqrt(2) is not rational"),
        }
    }

    #[test]
    fn endpoint_and_multiple_roots() {
        // x^2 (x-1): roots 0 (double) and 1, both endpoints of [0,1]
        let f = p(&[0, 0, -1, 1]);
        let roots = isolate_roots(&f, &rat_int(0), &rat_int(1));
        let vals: Vec<_> = roots
            .iter()
            .map(|r| match r {
                RootLoc::Exact(v) => v.clone(),
                _ => panic!("expected exact"),
            })
            .collect();
        assert_eq!(vals, vec![rat_int(0), rat_int(1)]);
    }

    #[test]
    fn abs_integral_exact_at_rational_roots() {
        // |x - 1/2| on [0,1] integrates to 1/4
        let f = Poly::new(vec![ratio(-1, 2), rat_int(1)]);
        let (v, exact) = abs_integral(&f, &rat_int(0), &rat_int(1));
        assert!(exact);
        assert_eq!(v, ratio(1, 4));
    }

    #[test]
    fn abs_integral_bounds_irrational_case() {
        // ∫_0^2 |x^2 - 2| = 8(sqrt2 - 1)/3 + ... ; check the certified bound
        let f = p(&[-2, 0, 1]);
        let (v, exact) = abs_integral(&f, &rat_int(0), &rat_int(2));
        assert!(!exact);
        let truth = (8.0 * 2.0_f64.sqrt() - 8.0) / 3.0 + 0.0;
        // closed form: 2*(2sqrt2-2) - (8/3... just compare numerically
        let numeric: f64 = {
            let n = 200_000;
            let mut s = 0.0;
            for i in 0..n {
                let x = (i as f64 + 0.5) * 2.0 / n as f64;
                s += (x * x - 2.0_f64).abs();
            }
            s * 2.0 / n as f64
        };
        let vf = crate::scalar::rat_to_f64(&v);
        assert!(vf >= numeric - 1e-4, "must not understate");
        assert!((vf - numeric).abs() < 1e-3);
        let _ = truth;
    }

    #[test]
    fn many_roots_isolated_disjointly() {
        // (x-1)(x-2)(x-3)(x^2-3)
        let f = &(&(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1])) * &p(&[-3, 0, 1]);
        let roots = isolate_roots(&f, &rat_int(-5), &rat_int(5));
        assert_eq!(roots.len(), 5);
        for w in roots.windows(2) {
            assert!(w[0].low() < w[1].low());
        }
    }
}
