//! Small conveniences over `rug` floats shared across the workspace.

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

/// Decimal digits that round-trip a mantissa of `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn rat_to_float(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

pub fn rat_to_complex(r: &Rational, prec: u32) -> Complex {
    Complex::with_val(prec, (r, 0))
}

pub fn complex_f64(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn to_c64(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

pub fn abs_f64(z: &Complex) -> f64 {
    z.real().to_f64().hypot(z.imag().to_f64())
}

/// log2 |z|, finite even when |z| is far outside the f64 range.
pub fn log2_abs(z: &Complex) -> f64 {
    let a = Float::with_val(64, z.abs_ref());
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = a.to_f64_exp();
    m.abs().log2() + f64::from(e)
}

pub fn log2_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + f64::from(e)
}

/// Full-precision decimal rendering, stable across runs.
pub fn fmt_float(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

/// Parses a real given either as a decimal string or an exact `p/q` rational.
pub fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let s = s.trim();
    if s.contains('/') {
        let r: Rational = s
            .parse()
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        return Ok(Float::with_val(prec, &r));
    }
    let p = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(p.complete_round(prec, Round::Nearest).0)
}

/// Parses `a+bi`, `a-bi`, `bi`, `a`, or `a,b`.
pub fn parse_complex(s: &str, prec: u32) -> Result<Complex> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = s.split_once(',') {
        let re = parse_real(re, prec)?;
        let im = parse_real(im, prec)?;
        return Ok(Complex::with_val(prec, (re, im)));
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Complex::with_val(prec, (parse_real(&s, prec)?, 0)));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let im = im.strip_prefix('+').unwrap_or(im);
    Ok(Complex::with_val(prec, (parse_real(re, prec)?, parse_real(im, prec)?)))
}

/// Deterministic two-string rendering used by the JSON emitters.
pub fn fmt_complex(z: &Complex) -> [String; 2] {
    [fmt_float(z.real()), fmt_float(z.imag())]
}

pub fn parse_complex_pair(pair: &[String; 2], prec: u32) -> Result<Complex> {
    Ok(Complex::with_val(
        prec,
        (parse_real(&pair[0], prec)?, parse_real(&pair[1], prec)?),
    ))
}
