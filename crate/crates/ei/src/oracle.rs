use rug::float::Constant;
use rug::{Complex, Float};

use eisum_core::mp::abs_f64;
use eisum_core::{Error, Result};

use crate::dyadic::ei_dyadic_adaptive;

/// Above this |t| the entire series is abandoned (cancellation grows like e^{2|t|}).
pub const DEFAULT_CUTOFF: f64 = 60.0;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub cutoff: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { cutoff: DEFAULT_CUTOFF }
    }
}

/// Σ_{k≥1} t^k / (k·k!), i.e. −Ein(−t), at `wp` bits.
pub fn ein_neg(t: &Complex, wp: u32) -> Complex {
    let t = Complex::with_val(wp, t);
    let tiny = Float::with_val(wp, -(wp as i32) - 8).exp2();
    let mut sum = Complex::new(wp);
    let mut pow = Complex::with_val(wp, 1); // t^k / k!
    let mag = abs_f64(&t);
    let mut k: u32 = 1;
    loop {
        pow *= &t;
        pow /= k;
        let term = Complex::with_val(wp, &pow / k);
        sum += &term;
        if f64::from(k) > mag {
            let a = Float::with_val(32, term.abs_ref());
            if a < tiny {
                break;
            }
        }
        k += 1;
    }
    sum
}

fn guard_bits(t: &Complex) -> u32 {
    (2.9 * abs_f64(t)).ceil() as u32 + 64
}

/// Ei⁺(t) on the sheet reached from the principal one by `winding` turns.
///
/// Winding 0 is the sheet with arg t ∈ (−π, π]; there Ei⁺ is real on the
/// negative axis and equals Ei(t) − iπ on the positive axis.
pub fn ei_plus(t: &Complex, winding: i64, cfg: &OracleConfig) -> Result<Complex> {
    let prec = t.prec().0;
    if t.is_zero() {
        return Err(Error::OnCut("Ei+ has a logarithmic branch point at 0".into()));
    }
    let mag = abs_f64(t);
    if mag > cfg.cutoff {
        return Err(Error::UseAsymptoticPath(mag));
    }
    let wp = prec + guard_bits(t);
    let tw = Complex::with_val(wp, t);
    let mut v = ein_neg(&tw, wp);
    let pi = Float::with_val(wp, Constant::Pi);
    let ln = Float::with_val(wp, tw.abs_ref()).ln();
    let mut im = Float::with_val(wp, tw.arg_ref());
    im += Float::with_val(wp, &pi * (2 * winding - 1));
    v += Complex::with_val(wp, (ln + Float::with_val(wp, Constant::Euler), im));
    Ok(Complex::with_val(prec, v))
}

/// e^{-t} Ei⁺(t) on the given sheet, by the series.
pub fn e_oracle(t: &Complex, winding: i64, cfg: &OracleConfig) -> Result<Complex> {
    let prec = t.prec().0;
    let wp = prec + guard_bits(t);
    let ei = ei_plus(&Complex::with_val(wp, t), winding, cfg)?;
    let et = Complex::with_val(wp, -t).exp();
    Ok(Complex::with_val(prec, ei * et))
}

/// Number of turns separating the principal argument of `t` from the
/// surface argument `a`.
pub fn winding_for(t: &Complex, a: f64) -> i64 {
    let arg = t.imag().to_f64().atan2(t.real().to_f64());
    ((a - arg) / std::f64::consts::TAU).round() as i64
}

/// E on the sheet with surface argument `a`, for any |t|.
///
/// Small |t| uses the series. Large |t| uses the adaptive dyadic expansion,
/// evaluated only in the closed upper half-plane where it is far from its
/// cut; other sheets follow from E[a](t) = conj(E[2π − a](t̄)) and
/// E[a + 2π](t) = E[a](t) + 2πi e^{-t}.
pub fn e_surface(t: &Complex, a: f64, cfg: &OracleConfig) -> Result<Complex> {
    let prec = t.prec().0;
    if abs_f64(t) <= cfg.cutoff {
        return e_oracle(t, winding_for(t, a), cfg);
    }
    let tau = std::f64::consts::TAU;
    let turns = (a / tau).floor();
    let reduced = a - turns * tau;
    let turns = turns as i64;
    let wp = prec + 32;
    let t = Complex::with_val(wp, t);
    let mut v = if reduced <= std::f64::consts::PI {
        ei_dyadic_adaptive(&t)?
    } else {
        let tb = Complex::with_val(wp, t.conj_ref());
        Complex::with_val(wp, ei_dyadic_adaptive(&tb)?.conj_ref())
    };
    if turns != 0 {
        let two_pi_i = Complex::with_val(wp, (0, Float::with_val(wp, Constant::Pi) * 2u32));
        let et = Complex::with_val(wp, -&t).exp();
        let mut corr = Complex::with_val(wp, two_pi_i * et);
        corr *= turns;
        v += corr;
    }
    Ok(Complex::with_val(prec, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use eisum_core::mp::to_c64;

    #[test]
    fn negative_five_reference() {
        let t = Complex::with_val(128, (-5, 0));
        let e = e_oracle(&t, 0, &OracleConfig::default()).unwrap();
        let (re, im) = to_c64(&e);
        assert!((re + 0.1704221762847322).abs() < 1e-15);
        assert!(im.abs() < 1e-30);
    }

    #[test]
    fn monodromy_is_two_pi_i() {
        let t = Complex::with_val(200, (1.3, -0.7));
        let cfg = OracleConfig::default();
        let a = ei_plus(&t, 0, &cfg).unwrap();
        let b = ei_plus(&t, 1, &cfg).unwrap();
        let d = Complex::with_val(200, &b - &a);
        let two_pi = Float::with_val(200, Constant::Pi) * 2u32;
        assert!(d.real().is_zero());
        let err = Float::with_val(200, d.imag() - &two_pi).abs();
        assert!(err < Float::with_val(64, -195).exp2());
    }

    #[test]
    fn beyond_cutoff_refused() {
        let t = Complex::with_val(64, (70, 0));
        assert!(matches!(ei_plus(&t, 0, &OracleConfig::default()), Err(Error::UseAsymptoticPath(_))));
    }
}
