//! Simultaneous polynomial root finding (Aberth–Ehrlich) with a precision
//! ladder: converge cheaply at low precision, then polish at full width.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{log2_abs, log2_float};
use crate::poly::{abs_eval, degree_complex, eval_d};

/// Extra working bits on top of the requested precision.
pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone)]
pub struct Roots {
    pub roots: Vec<Complex>,
    /// max over roots of log2(|p(r)| / Σ|p_j||r|^j).
    pub log2_backward_error: f64,
}

/// Starting points on circles whose radii come from the upper convex hull
/// of (j, log|p_j|), one circle per hull edge.
fn initial_guesses(p: &[Complex], prec: u32) -> Vec<Complex> {
    let n = p.len() - 1;
    let pts: Vec<(usize, f64)> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, log2_abs(c)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(n);
    for (k, w) in hull.windows(2).enumerate() {
        let (i0, l0) = w[0];
        let (i1, l1) = w[1];
        let d = i1 - i0;
        let log2_r = (l0 - l1) / d as f64;
        let r = Float::with_val(prec, log2_r).exp2();
        for j in 0..d {
            let frac = j as f64 / d as f64 + k as f64 / n as f64 + 0.1234;
            let ang = Float::with_val(prec, &two_pi * frac);
            let (s, c) = ang.sin_cos(Float::new(prec));
            out.push(Complex::with_val(prec, (Float::with_val(prec, &r * &c), Float::with_val(prec, &r * &s))));
        }
    }
    out
}

fn rel_residual(p: &[Complex], z: &Complex, v: &Complex) -> f64 {
    let r = Float::with_val(64, z.abs_ref());
    let scale = abs_eval(p, &r);
    log2_abs(v) - log2_float(&scale)
}

/// All roots of `p` (coefficients lowest degree first) with multiplicity.
///
/// Converged when every root satisfies |p(r)| / Σ|p_j||r|^j < 2^{-prec+8}.
pub fn aberth(p: &[Complex], prec: u32) -> Result<Roots> {
    let deg = degree_complex(p)
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidArgument("polynomial must have degree >= 1".into()))?;
    let lowest = p.iter().position(|c| !c.is_zero()).unwrap();
    let work_final = prec + GUARD_BITS;
    let mut roots: Vec<Complex> = vec![Complex::new(work_final); lowest];
    let core: Vec<Complex> = p[lowest..=deg].to_vec();
    let n = core.len() - 1;
    if n == 0 {
        return Ok(Roots { roots, log2_backward_error: f64::NEG_INFINITY });
    }
    let lg_n = (n as f64).log2();
    let mut stages = Vec::new();
    let mut s = work_final.min(160);
    while s < work_final {
        stages.push(s);
        s = (s * 3).min(work_final);
    }
    stages.push(work_final);

    let mut z = initial_guesses(&core, stages[0]);
    let mut worst = f64::INFINITY;
    let mut total_iter = 0;
    for (si, &wp) in stages.iter().enumerate() {
        let coeffs: Vec<Complex> = core.iter().map(|c| Complex::with_val(wp, c)).collect();
        for zi in z.iter_mut() {
            zi.set_prec(wp);
        }
        let last = si + 1 == stages.len();
        let tol = if last { -(prec as f64) + 8.0 } else { -(wp as f64) + 16.0 + lg_n };
        let max_iter = if si == 0 { 200 + 20 * n } else { 60 };
        let mut it = 0;
        loop {
            worst = f64::NEG_INFINITY;
            let mut all = true;
            for i in 0..n {
                let (v, d) = eval_d(&coeffs, &z[i]);
                let rr = rel_residual(&coeffs, &z[i], &v);
                worst = worst.max(rr);
                if rr < tol {
                    continue;
                }
                all = false;
                if d.is_zero() {
                    let nudge = Float::with_val(wp, Float::with_val(wp, -(wp as i32) / 4).exp2());
                    z[i] += &nudge;
                    continue;
                }
                let newton = Complex::with_val(wp, &v / &d);
                let mut sum = Complex::new(wp);
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        let diff = Complex::with_val(wp, &z[i] - zj);
                        if !diff.is_zero() {
                            sum += diff.recip();
                        }
                    }
                }
                let denom = Complex::with_val(wp, 1 - Complex::with_val(wp, &newton * &sum));
                let step = if denom.is_zero() { newton } else { newton / denom };
                z[i] -= step;
            }
            if all {
                break;
            }
            it += 1;
            total_iter += 1;
            if it >= max_iter {
                return Err(Error::RootFindingFailed { iterations: total_iter, log2_residual: worst });
            }
        }
    }
    roots.extend(z);
    Ok(Roots { roots, log2_backward_error: worst })
}
