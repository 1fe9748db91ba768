//! Pole finder for y″ = 6y² − z by analytic continuation with local Taylor
//! series, entirely in f64 and independent of the Padé machinery.
//!
//! Near a pole y blows up like (z − p)^{−2}, so the walk switches to
//! u = y^{−1/2}, which is analytic there and has a simple zero at p. In u
//! the equation reads 2uu″ = 6u′² − 6 + z u⁴.

#![forbid(unsafe_code)]

use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy)]
pub struct OdeConfig {
    /// Taylor order per step.
    pub order: usize,
    /// Step length as a fraction of the estimated convergence radius.
    pub step_fraction: f64,
    pub max_steps: usize,
    /// Stop once successive Newton targets agree to this.
    pub tol: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { order: 40, step_fraction: 0.35, max_steps: 2000, tol: 1e-13 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Y,
    U,
}

fn conv(a: &[C], b: &[C], n: usize) -> C {
    (0..=n).map(|j| a[j] * b[n - j]).sum()
}

/// Taylor coefficients of y about zc.
fn y_coeffs(zc: C, y0: C, y1: C, k: usize) -> Vec<C> {
    let mut a = vec![C::new(0.0, 0.0); k + 1];
    a[0] = y0;
    a[1] = y1;
    for n in 0..k - 1 {
        let mut s = conv(&a, &a, n) * 6.0;
        if n == 0 {
            s -= zc;
        }
        if n == 1 {
            s -= 1.0;
        }
        a[n + 2] = s / ((n + 2) * (n + 1)) as f64;
    }
    a
}

/// Taylor coefficients of u about zc.
fn u_coeffs(zc: C, u0: C, u1: C, k: usize) -> Vec<C> {
    let mut u = vec![C::new(0.0, 0.0); k + 1];
    u[0] = u0;
    u[1] = u1;
    for n in 0..k - 1 {
        let uu: Vec<C> = (0..=n).map(|i| conv(&u, &u, i)).collect();
        let u4: Vec<C> = (0..=n).map(|i| conv(&uu, &uu, i)).collect();
        let mut rhs: C = (0..=n)
            .map(|j| u[j + 1] * (j + 1) as f64 * u[n - j + 1] * (n - j + 1) as f64)
            .sum::<C>()
            * 6.0;
        if n == 0 {
            rhs -= 6.0;
        }
        rhs += zc * u4[n];
        if n >= 1 {
            rhs += u4[n - 1];
        }
        let known: C = (1..=n).map(|j| u[j] * ((n - j + 2) * (n - j + 1)) as f64 * u[n - j + 2]).sum::<C>() * 2.0;
        u[n + 2] = (rhs - known) / (u[0] * 2.0 * ((n + 2) * (n + 1)) as f64);
    }
    u
}

fn radius(a: &[C]) -> f64 {
    let k = a.len() - 1;
    let r = (k - 8..=k)
        .filter(|&n| a[n].norm() > 0.0)
        .map(|n| a[n].norm().powf(-1.0 / n as f64))
        .fold(f64::INFINITY, f64::min);
    if r.is_finite() {
        r
    } else {
        1.0
    }
}

fn eval(a: &[C], s: C) -> (C, C) {
    let mut v = C::new(0.0, 0.0);
    let mut d = C::new(0.0, 0.0);
    for c in a.iter().rev() {
        d = d * s + v;
        v = v * s + c;
    }
    (v, d)
}

/// Walks from z0 with y(z0) = y0, y′(z0) = y1 toward `guess` and returns the
/// pole found there, or `None` if the walk does not settle.
pub fn find_pole(z0: C, y0: C, y1: C, guess: C, cfg: &OdeConfig) -> Option<C> {
    let k = cfg.order.max(12);
    let mut z = z0;
    let mut st = (y0, y1);
    let mut mode = Mode::Y;
    let mut target = guess;
    for _ in 0..cfg.max_steps {
        if mode == Mode::Y && st.0.norm() > 1.0 {
            let u = st.0.powf(-0.5);
            st = (u, -0.5 * u * u * u * st.1);
            mode = Mode::U;
        } else if mode == Mode::U && st.0.norm() > 1.5 {
            let (u, up) = st;
            st = (u.powi(-2), -2.0 * u.powi(-3) * up);
            mode = Mode::Y;
        }
        let a = match mode {
            Mode::Y => y_coeffs(z, st.0, st.1, k),
            Mode::U => u_coeffs(z, st.0, st.1, k),
        };
        let rho = radius(&a);
        let dist = (target - z).norm();
        if mode == Mode::U && dist < 0.5 * rho {
            let mut s = target - z;
            for _ in 0..50 {
                let (v, d) = eval(&a, s);
                let ds = v / d;
                s -= ds;
                if ds.norm() < 1e-15 {
                    break;
                }
            }
            let newt = z + s;
            if !newt.is_finite() {
                return None;
            }
            if (newt - target).norm() < cfg.tol {
                return Some(newt);
            }
            target = newt;
            continue;
        }
        if dist == 0.0 {
            return None;
        }
        let h = (cfg.step_fraction * rho).min(dist);
        let s = (target - z) / dist * h;
        let (v, d) = eval(&a, s);
        if !v.is_finite() || !d.is_finite() {
            return None;
        }
        z += s;
        st = (v, d);
    }
    None
}

/// y and y′ at `end`, integrating along the straight segment from z0.
/// Only valid while the segment keeps clear of poles.
pub fn integrate_to(z0: C, y0: C, y1: C, end: C, cfg: &OdeConfig) -> Option<(C, C)> {
    let k = cfg.order.max(12);
    let mut z = z0;
    let mut st = (y0, y1);
    for _ in 0..cfg.max_steps {
        let dist = (end - z).norm();
        if dist == 0.0 {
            return Some(st);
        }
        let a = y_coeffs(z, st.0, st.1, k);
        let h = (cfg.step_fraction * radius(&a)).min(dist);
        let s = (end - z) / dist * h;
        let (v, d) = eval(&a, s);
        if !v.is_finite() {
            return None;
        }
        z = if h == dist { end } else { z + s };
        st = (v, d);
    }
    None
}
