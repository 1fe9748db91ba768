use rug::float::Constant;
use rug::{Complex, Float};

use eisum_core::mp::{abs_f64, to_c64};
use eisum_core::{Error, Result};

/// Truncation of the dyadic expansion: `n` terms in the first block, `ell`
/// terms in each later block, levels k = 1..big_n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicTruncation {
    pub n: usize,
    pub ell: usize,
    pub big_n: usize,
    /// Cut placement; `None` means β = πi, evaluated at working precision.
    pub beta: Option<Complex>,
}

impl Default for DyadicTruncation {
    fn default() -> Self {
        Self { n: 40, ell: 40, big_n: 20, beta: None }
    }
}

impl DyadicTruncation {
    pub fn new(n: usize, ell: usize, big_n: usize) -> Result<Self> {
        let t = Self { n, ell, big_n, beta: None };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.ell == 0 || self.big_n == 0 {
            return Err(Error::InvalidArgument(format!(
                "dyadic truncation needs n, ell, N >= 1 (got {}, {}, {})",
                self.n, self.ell, self.big_n
            )));
        }
        if self.beta.as_ref().is_some_and(|b| b.is_zero()) {
            return Err(Error::InvalidArgument("beta must be nonzero".into()));
        }
        Ok(())
    }

    pub fn beta_at(&self, prec: u32) -> Complex {
        match &self.beta {
            Some(b) => Complex::with_val(prec, b),
            None => Complex::with_val(prec, (0, Float::with_val(prec, Constant::Pi))),
        }
    }
}

/// Which contour direction controls the level remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Re(x/β) > c, contour along ℝ⁺.
    Direct,
    /// Re(x e^{−iπ/2}/β) > c, contour along e^{−iπ/2}ℝ⁺.
    Clockwise,
    /// Re(x e^{iπ/2}/β) > c, contour along e^{iπ/2}ℝ⁺.
    Counterclockwise,
    /// None of the three applies for this c; no level bound is available.
    Indeterminate,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Direct => "direct",
            Region::Clockwise => "clockwise",
            Region::Counterclockwise => "counterclockwise",
            Region::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderParams {
    /// Constant in the level bound 1/(c0 2^{N−1} Re(·)).
    pub c0: f64,
    /// Region threshold; `None` selects [`default_region_c`].
    pub c: Option<f64>,
}

impl Default for RemainderParams {
    fn default() -> Self {
        Self { c0: 1.0, c: None }
    }
}

#[derive(Debug, Clone)]
pub struct EiEvaluation {
    /// Truncated value of e^{-x} Ei⁺(x).
    pub value: Complex,
    /// Block tails plus level remainder; `None` when the region is indeterminate.
    pub remainder_bound: Option<Float>,
    pub region: Region,
    /// Σ of the block tail bounds alone.
    pub tail_bound: Float,
    /// Level remainder bound alone.
    pub level_bound: Option<Float>,
}

/// Distance from x to the cut β(−∞, 0].
fn dist_to_cut(y: (f64, f64), beta_abs: f64) -> f64 {
    let d = if y.0 <= 0.0 { y.1.abs() } else { y.0.hypot(y.1) };
    d * beta_abs
}

/// c = ½ min(1, ½ dist(x, cut)), inside the admissible interval.
pub fn default_region_c(x: &Complex, trunc: &DyadicTruncation) -> f64 {
    let prec = x.prec().0 + 16;
    let beta = trunc.beta_at(prec);
    let y = Complex::with_val(prec, x / &beta);
    0.5 * (0.5 * dist_to_cut(to_c64(&y), abs_f64(&beta))).min(1.0)
}

fn classify(y: &Complex, c: f64) -> (Region, f64) {
    let (re, im) = to_c64(y);
    // x e^{∓iπ/2}/β = ∓i y
    if re > c {
        (Region::Direct, re)
    } else if im > c {
        (Region::Clockwise, im)
    } else if -im > c {
        (Region::Counterclockwise, -im)
    } else {
        (Region::Indeterminate, f64::NAN)
    }
}

/// (1 − z) Σ_{j<count} z^j j! / (Y)_{j+1}.
fn block(z: &Complex, y: &Complex, count: usize) -> Result<Complex> {
    let wp = y.prec().0;
    let mut sum = Complex::new(wp);
    let mut term = Complex::with_val(wp, y.recip_ref());
    for j in 0..count {
        sum += &term;
        if j + 1 < count {
            let next = Complex::with_val(wp, y + (j + 1) as u32);
            if next.is_zero() {
                return Err(Error::OnCut("Pochhammer factor vanishes".into()));
            }
            term *= z;
            term *= (j + 1) as u32;
            term /= next;
        }
    }
    let one_minus = Complex::with_val(wp, 1 - z);
    Ok(sum * one_minus)
}

fn level_z(k: usize, wp: u32) -> Complex {
    let pi = Float::with_val(wp, Constant::Pi);
    let ang = Float::with_val(wp, &pi >> (k as u32));
    let e = Complex::with_val(wp, (Float::new(wp), ang)).exp();
    let d = Complex::with_val(wp, &e + 1u32);
    e / d
}

/// sup over s' ≥ s of |z| s'/|Y + s'|, the ratio of consecutive tail terms.
fn ratio_sup(zabs: f64, y: (f64, f64), s: f64) -> f64 {
    let (r, b) = y;
    let ya = r.hypot(b);
    let at_s = (1.0 + r / s).hypot(b / s);
    let mut m = at_s.min(1.0);
    if ya > 0.0 {
        let ustar = -(r / ya) / ya;
        if ustar > 0.0 && ustar < 1.0 / s {
            m = m.min((b / ya).abs());
        }
    }
    if m <= 0.0 {
        f64::INFINITY
    } else {
        zabs / m
    }
}

const TAIL_CAP: usize = 200_000;
/// Hard ceiling on explicitly summed tail terms, for arguments close to the cut.
const TAIL_HARD_CAP: usize = 1 << 27;

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Index past which the term ratio |z| s/|Y + s| stays below one.
fn hump_end(zabs: f64, y: (f64, f64)) -> f64 {
    let (r, b) = y;
    let ya2 = r * r + b * b;
    let a = 1.0 - zabs * zabs;
    let disc = r * r - a * ya2;
    if disc <= 0.0 {
        0.0
    } else {
        ((-r + disc.sqrt()) / a).max(0.0)
    }
}

/// Upper bound on |(1 − z) Σ_{k ≥ n+1} z^k k!/(x)_{k+1}|.
///
/// Terms are summed explicitly until the supremum of all later term ratios
/// drops below one, then the rest is closed with a geometric series. Close
/// to the cut the terms rise again near k ≈ |x| before decaying, so the
/// explicit part can be long; it runs as a rescaled product in f64 and is
/// accumulated in log space, so the result may lie far below the f64 range.
pub fn rho_tail(z: &Complex, x: &Complex, n: usize) -> Result<Float> {
    let (zr, zi) = to_c64(z);
    let zabs = zr.hypot(zi);
    if zabs >= 1.0 {
        return Err(Error::InvalidArgument(format!("rho_tail needs |z| < 1, got {zabs}")));
    }
    if zabs == 0.0 {
        return Ok(Float::new(64));
    }
    let y = to_c64(x);
    let pabs = |i: usize| (y.0 + i as f64).hypot(y.1);
    // log |t_j| with t_j = (1 − z) z^j j!/(x)_{j+1}
    let one_minus = (1.0 - zr).hypot(zi).ln();
    let p0 = pabs(0);
    if p0 == 0.0 {
        return Err(Error::OnCut("x is a pole of the expansion".into()));
    }
    let mut lt = one_minus - p0.ln();
    for j in 0..=n {
        let d = pabs(j + 1);
        if d == 0.0 {
            return Err(Error::OnCut("x is a pole of the expansion".into()));
        }
        lt += zabs.ln() + ((j + 1) as f64).ln() - d.ln();
    }
    let cap = (TAIL_CAP as f64 + 2.0 * hump_end(zabs, y)).min(TAIL_HARD_CAP as f64) as usize;
    // the current term is cur·e^{lt}; chunk collects terms at that scale
    let mut acc = f64::NEG_INFINITY;
    let mut cur = 1.0f64;
    let mut chunk = 0.0f64;
    let mut j = n + 1;
    let mut steps = 0usize;
    while steps < cap {
        if steps < 1024 || steps % 64 == 0 {
            let r = ratio_sup(zabs, y, (j + 1) as f64);
            if r < 1.0 {
                let here = lt + cur.ln();
                let total = log_add(log_add(acc, lt + chunk.ln()), here - (1.0 - r).ln());
                let mut out = Float::with_val(64, total).exp();
                // f64 rounding in the running product
                out *= 1.0 + 1e-12 + 4e-16 * steps as f64;
                return Ok(out);
            }
        }
        chunk += cur;
        let d = y.0 + (j + 1) as f64;
        let d = (d * d + y.1 * y.1).sqrt();
        if d == 0.0 {
            return Err(Error::OnCut("x is a pole of the expansion".into()));
        }
        cur *= zabs * (j + 1) as f64 / d;
        if !(1e-150..=1e150).contains(&cur) {
            acc = log_add(acc, lt + chunk.ln());
            lt += cur.ln();
            cur = 1.0;
            chunk = 0.0;
        }
        j += 1;
        steps += 1;
    }
    Err(Error::BoundUnavailable(cap))
}

/// Truncated dyadic expansion of e^{-x} Ei⁺(x) with its remainder bound.
pub fn ei_dyadic(x: &Complex, trunc: &DyadicTruncation, params: &RemainderParams) -> Result<EiEvaluation> {
    trunc.validate()?;
    let prec = x.prec().0;
    let wp = prec + 32;
    let beta = trunc.beta_at(wp);
    let y = Complex::with_val(wp, x / &beta);
    let yc = to_c64(&y);
    let ya = yc.0.hypot(yc.1);
    if y.is_zero() || (yc.0 <= 0.0 && yc.1.abs() <= 1e-12 * ya.max(1.0)) {
        return Err(Error::OnCut(format!("x/β = {:?} on the negative real axis", yc)));
    }

    let half = Complex::with_val(wp, 0.5);
    let mut value = -block(&half, &y, trunc.n)?;
    let mut tail = rho_tail(&half, &y, trunc.n - 1)?;
    for k in 1..trunc.big_n {
        let z = level_z(k, wp);
        let yk = Complex::with_val(wp, &y << (k as u32));
        value += block(&z, &yk, trunc.ell)?;
        tail += rho_tail(&z, &yk, trunc.ell - 1)?;
    }

    let c = params.c.unwrap_or_else(|| default_region_c(x, trunc));
    let (region, re) = classify(&y, c);
    let level_bound = if region == Region::Indeterminate {
        None
    } else {
        let mut b = Float::with_val(64, params.c0 * re);
        b <<= (trunc.big_n - 1) as u32;
        Some(b.recip())
    };
    let remainder_bound = level_bound.as_ref().map(|l| {
        let mut s = Float::with_val(64, l + &tail);
        s *= 1.0 + 1e-12;
        s
    });
    Ok(EiEvaluation { value: Complex::with_val(prec, value), remainder_bound, region, tail_bound: tail, level_bound })
}

/// Sums block `(z, Y)` until the rigorous tail estimate drops below `tol`
/// relative to `scale`.
fn block_converged(z: &Complex, y: &Complex, tol_log2: f64) -> Result<Complex> {
    let wp = y.prec().0;
    let zabs = abs_f64(z);
    let yc = to_c64(y);
    let mut sum = Complex::new(wp);
    let mut term = Complex::with_val(wp, y.recip_ref());
    for j in 0..TAIL_CAP {
        sum += &term;
        let r = ratio_sup(zabs, yc, (j + 1) as f64);
        if r < 1.0 {
            let lt = eisum_core::mp::log2_abs(&term) + (r / (1.0 - r)).log2();
            if lt < tol_log2 {
                let one_minus = Complex::with_val(wp, 1 - z);
                return Ok(sum * one_minus);
            }
        }
        let next = Complex::with_val(wp, y + (j + 1) as u32);
        if next.is_zero() {
            return Err(Error::OnCut("Pochhammer factor vanishes".into()));
        }
        term *= z;
        term *= (j + 1) as u32;
        term /= next;
    }
    Err(Error::BoundUnavailable(TAIL_CAP))
}

/// e^{-x} Ei⁺(x) in the plane cut along −i[0, ∞), summed to the working
/// precision of `x`: every block to its tail bound, levels until the level
/// remainder (with c0 = 1) is negligible.
pub fn ei_dyadic_adaptive(x: &Complex) -> Result<Complex> {
    let wp = x.prec().0;
    let trunc = DyadicTruncation::default();
    let beta = trunc.beta_at(wp);
    let y = Complex::with_val(wp, x / &beta);
    let yc = to_c64(&y);
    if y.is_zero() || (yc.0 <= 0.0 && yc.1.abs() <= 1e-12 * yc.0.hypot(yc.1).max(1.0)) {
        return Err(Error::OnCut("x on the cut of the dyadic expansion".into()));
    }
    let (region, re) = classify(&y, default_region_c(x, &trunc));
    if region == Region::Indeterminate {
        return Err(Error::Domain("no contour region applies; use the series oracle".into()));
    }
    // scale of the answer is about 1/|x|; aim a few bits below the ulp
    let target = -(wp as f64) - abs_f64(x).log2().max(0.0) - 4.0;
    let half = Complex::with_val(wp, 0.5);
    let mut value = -block_converged(&half, &y, target)?;
    let max_levels = 4 * wp as usize + 64;
    for k in 1..max_levels {
        let z = level_z(k, wp);
        let yk = Complex::with_val(wp, &y << (k as u32));
        value += block_converged(&z, &yk, target - 2.0)?;
        // levels beyond k contribute at most 1/(2^k Re)
        if -(k as f64) - re.log2() < target {
            return Ok(value);
        }
    }
    Err(Error::BoundUnavailable(max_levels))
}

/// Zeros of the Pochhammer denominators of the truncated expansion, i.e.
/// the poles of the rational approximation: x = −jβ and x = −jβ/2^k.
pub fn dyadic_pole_locations(trunc: &DyadicTruncation, prec: u32) -> Vec<Complex> {
    let beta = trunc.beta_at(prec);
    let mut out = Vec::new();
    for j in 0..trunc.n {
        out.push(Complex::with_val(prec, &beta * j) * -1i32);
    }
    for k in 1..trunc.big_n {
        for j in 0..trunc.ell {
            let mut p = Complex::with_val(prec, &beta * j);
            p >>= k as u32;
            out.push(-p);
        }
    }
    out
}

/// The kernel ρ_{n+1}(p, s; β) inside the contour integral for R_N:
/// (β/2^n)[2^n/(β(s − p)) + e^{−βs/2^n}/(e^{−βs/2^n} − e^{−βp/2^n})].
///
/// Not used on any evaluation path; the closed-form level bound replaces
/// the integral. Kept to document where the contour must avoid poles.
pub fn remainder_kernel(p: &Complex, s: &Complex, beta: &Complex, n: u32) -> Complex {
    let prec = p.prec().0;
    let wp = prec + 32;
    let u = {
        let mut d = Complex::with_val(wp, s - p);
        d *= beta;
        d >>= n;
        d
    };
    let scale = {
        let mut b = Complex::with_val(wp, beta);
        b >>= n;
        b
    };
    if u.is_zero() {
        // 1/u + 1/(1 − e^u) → 1/2
        return Complex::with_val(prec, scale >> 1u32);
    }
    // e^{−βs/2^n}/(e^{−βs/2^n} − e^{−βp/2^n}) = 1/(1 − e^{u})
    let eu = Complex::with_val(wp, u.exp_ref());
    let frac = Complex::with_val(wp, 1 - eu).recip();
    let v = Complex::with_val(wp, u.recip_ref()) + frac;
    Complex::with_val(prec, v * scale)
}
