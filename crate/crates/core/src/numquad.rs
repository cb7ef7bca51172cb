//! Adaptive Gauss-Kronrod (G7,K15) quadrature for the float path, plus a
//! Romberg ladder used as the oracle's independent second method.

use crate::error::{Error, Result};

/// 15-point Kronrod nodes (nonnegative half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the odd Kronrod indices.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7K15 panel: returns (kronrod value, |kronrod - gauss|).
fn qk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let fl = f(mid - dx)?;
        let fr = f(mid + dx)?;
        kronrod += WGK[i] * (fl + fr);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fl + fr);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Ok((value, err))
}

/// Adaptive bisection on the panel error estimate until the summed error
/// drops below `tol` (absolute, plus matching relative slack).
pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let (v0, e0) = qk15(f, a, b)?;
    let mut segments = vec![(a, b, v0, e0)];
    for _ in 0..2000 {
        let total_err: f64 = segments.iter().map(|s| s.3).sum();
        let total_val: f64 = segments.iter().map(|s| s.2).sum();
        if total_err <= tol.max(tol * total_val.abs()) {
            return Ok(total_val);
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (sa, sb, _, _) = segments.swap_remove(idx);
        let sm = 0.5 * (sa + sb);
        if sm <= sa || sm >= sb {
            return Err(Error::NonConvergent(format!(
                "panel [{}, {}] cannot be split further",
                sa, sb
            )));
        }
        let (vl, el) = qk15(f, sa, sm)?;
        let (vr, er) = qk15(f, sm, sb)?;
        segments.push((sa, sm, vl, el));
        segments.push((sm, sb, vr, er));
    }
    Err(Error::NonConvergent(format!(
        "error estimate stalled above {:e} after 2000 panel splits",
        tol
    )))
}

/// Romberg ladder with `levels` rows; returns the last diagonal entry.
pub fn romberg<F>(f: &F, a: f64, b: f64, levels: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut h = b - a;
    let mut trap = 0.5 * h * (f(a)? + f(b)?);
    rows.push(vec![trap]);
    for k in 1..levels {
        let n = 1usize << (k - 1);
        let mut sum = 0.0;
        for i in 0..n {
            let x = a + h * (i as f64 + 0.5);
            sum += f(x)?;
        }
        trap = 0.5 * trap + 0.5 * h * sum;
        h *= 0.5;
        let prev = rows.last().unwrap().clone();
        let mut row = vec![trap];
        let mut pow4 = 1.0;
        for j in 0..prev.len() {
            pow4 *= 4.0;
            let next = (pow4 * row[j] - prev[j]) / (pow4 - 1.0);
            row.push(next);
        }
        rows.push(row);
    }
    Ok(*rows.last().unwrap().last().unwrap())
}
