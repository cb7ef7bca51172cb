//! Reference integrals for derived expectations: two independent numerical
//! methods (adaptive Gauss-Kronrod and a Romberg ladder) must agree to the
//! requested digits or the oracle refuses to answer.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::funcmodel::Interval;
use crate::numquad;
use crate::scalar::rat_to_f64;

pub fn oracle_integral(e: &Expr, interval: &Interval, digits: u32) -> Result<f64> {
    let digits = digits.min(14);
    let a = rat_to_f64(interval.a());
    let b = rat_to_f64(interval.b());
    let tol = 10f64.powi(-(digits as i32) - 2);
    let gk = numquad::integrate(&|x| e.eval(x), a, b, tol)?;
    let rom = numquad::romberg(&|x| e.eval(x), a, b, 18)?;
    let scale = gk.abs().max(1.0);
    let agreement = 10f64.powi(-(digits as i32)) * scale;
    if (gk - rom).abs() > agreement {
        return Err(Error::NonConvergent(format!(
            "methods differ by {:e} (allowed {:e})",
            (gk - rom).abs(),
            agreement
        )));
    }
    Ok(gk)
}
