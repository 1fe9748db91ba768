use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rug::float::Constant;
use rug::{Complex, Float};

use eisum_core::mp::to_c64;
use eisum_core::{
    borel_transform, build_pade, generate_h_coefficients, partial_fractions, Error, PoleResidueSet, Result,
};
use eisum_ei::{
    e_surface, ei_dyadic, DyadicTruncation, OracleConfig, RemainderParams,
};

/// Minimum angular distance between θ and any arg p_k.
pub const DEFAULT_STOKES_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Convergent series for small |t|, adaptive dyadic sums beyond the cutoff.
    Oracle,
    /// Fixed dyadic truncation with a reported remainder bound.
    Dyadic(DyadicTruncation),
}

/// Value with an optional error estimate (dyadic strategy only).
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Complex,
    pub error_estimate: Option<Float>,
}

/// f, f′ and f″ at one point.
#[derive(Debug, Clone)]
pub struct Jet {
    pub f: Complex,
    pub d1: Complex,
    pub d2: Complex,
    pub error_estimate: Option<[Float; 3]>,
}

/// f_{N,θ}: Laplace transform along θ of a Borel-plane rational function.
///
/// Branches. For x with ψ = Arg(x e^{iθ}) and α_k = (arg p_k − θ) mod 2π,
/// the term for pole p_k uses Ei⁺ at surface argument a_k = α_k + ψ. On the
/// half-plane Π_θ (|ψ| < π/2) this is what the Laplace integral produces:
/// the ray passes the pole on the side fixed by α_k. Letting ψ move
/// continuously continues f across the sectors swept by directions in
/// (θ₁, θ₂), which is exactly a_k ∈ (−π/2, 5π/2) for every k. Outside that
/// window some term would have crossed a Stokes ray and evaluation refuses.
#[derive(Debug, Clone)]
pub struct EiSumApproximant {
    pub poles_residues: PoleResidueSet,
    pub theta: f64,
    pub strategy: Strategy,
    pub precision_bits: u32,
    /// Nearest Stokes direction below θ.
    pub theta1: f64,
    /// Nearest Stokes direction above θ.
    pub theta2: f64,
    pub margin: f64,
    pub oracle: OracleConfig,
    alphas: Vec<f64>,
}

fn arg_f64(z: &Complex) -> f64 {
    let (re, im) = to_c64(z);
    im.atan2(re)
}

impl EiSumApproximant {
    pub fn assemble(poles_residues: PoleResidueSet, theta: f64, strategy: Strategy) -> Result<Self> {
        Self::assemble_with_margin(poles_residues, theta, strategy, DEFAULT_STOKES_MARGIN)
    }

    pub fn assemble_with_margin(
        poles_residues: PoleResidueSet,
        theta: f64,
        strategy: Strategy,
        margin: f64,
    ) -> Result<Self> {
        if !theta.is_finite() || !(0.0..PI / 4.0).contains(&margin) {
            return Err(Error::InvalidArgument(format!("bad direction {theta} or margin {margin}")));
        }
        if let Strategy::Dyadic(t) = &strategy {
            t.validate()?;
        }
        let mut alphas = Vec::with_capacity(poles_residues.entries.len());
        for e in &poles_residues.entries {
            if e.pole.is_zero() {
                return Err(Error::InvalidArgument("pole at the origin of the Borel plane".into()));
            }
            let stokes = arg_f64(&e.pole);
            let alpha = (stokes - theta).rem_euclid(TAU);
            if alpha < margin || TAU - alpha < margin {
                return Err(Error::StokesCollision { theta, stokes });
            }
            alphas.push(alpha);
        }
        let (theta1, theta2) = if alphas.is_empty() {
            (theta - PI, theta + PI)
        } else {
            let lo = alphas.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = alphas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (theta - (TAU - hi), theta + lo)
        };
        let precision_bits = poles_residues.precision_bits;
        Ok(Self {
            poles_residues,
            theta,
            strategy,
            precision_bits,
            theta1,
            theta2,
            margin,
            oracle: OracleConfig::default(),
            alphas,
        })
    }

    /// Surface arguments a_k of p_k x, after the domain check.
    fn surface_args(&self, x: &Complex) -> Result<Vec<f64>> {
        if x.is_zero() {
            return Err(Error::Domain("x = 0".into()));
        }
        let (re, im) = to_c64(x);
        let psi = (im.atan2(re) + self.theta).rem_euclid(TAU);
        let psi = if psi > PI { psi - TAU } else { psi };
        let lo = -FRAC_PI_2 + self.margin;
        let hi = 2.0 * PI + FRAC_PI_2 - self.margin;
        let mut out = Vec::with_capacity(self.alphas.len());
        for &alpha in &self.alphas {
            let a = alpha + psi;
            if !(lo..=hi).contains(&a) {
                return Err(Error::Domain(format!(
                    "x = {re}+{im}i lies outside the continuation domain of direction {}",
                    self.theta
                )));
            }
            out.push(a);
        }
        Ok(out)
    }

    /// e^{−t}Ei⁺(t) for t = p_k x on sheet a, with its error bound if any.
    fn e_term(&self, t: &Complex, a: f64) -> Result<(Complex, Option<Float>)> {
        match &self.strategy {
            Strategy::Oracle => Ok((e_surface(t, a, &self.oracle)?, None)),
            Strategy::Dyadic(trunc) => {
                let prec = t.prec().0;
                let turns = (a / TAU).floor();
                let reduced = a - turns * TAU;
                let params = RemainderParams::default();
                let (mut v, bound) = if reduced <= PI {
                    let ev = ei_dyadic(t, trunc, &params)?;
                    (ev.value, ev.remainder_bound)
                } else {
                    let tb = Complex::with_val(prec, t.conj_ref());
                    let ev = ei_dyadic(&tb, trunc, &params)?;
                    (Complex::with_val(prec, ev.value.conj_ref()), ev.remainder_bound)
                };
                if turns != 0.0 {
                    let et = Complex::with_val(prec, -t).exp();
                    let pi2 = Float::with_val(prec, Constant::Pi) * 2u32;
                    let mut corr = Complex::with_val(prec, et * Complex::with_val(prec, (0, pi2)));
                    corr *= turns as i64;
                    v += corr;
                }
                Ok((v, bound))
            }
        }
    }

    fn to_prec(&self, x: &Complex) -> Complex {
        Complex::with_val(self.precision_bits, x)
    }

    /// f, f′, f″ in closed form.
    ///
    /// With E_k = e^{−p_k x}Ei⁺(p_k x) and d/dt[e^{−t}Ei⁺(t)] = −e^{−t}Ei⁺(t) + 1/t,
    /// f′ = Σ c_k p_k E_k − S/x and f″ = −Σ c_k p_k² E_k + T/x + S/x² with
    /// S = Σ c_k, T = Σ c_k p_k, plus the derivatives of the polynomial part.
    pub fn jet(&self, x: &Complex) -> Result<Jet> {
        let prec = self.precision_bits;
        let x = self.to_prec(x);
        let args = self.surface_args(&x)?;
        let mut f = Complex::new(prec);
        let mut d1 = Complex::new(prec);
        let mut d2 = Complex::new(prec);
        let mut err: Option<[Float; 3]> = match self.strategy {
            Strategy::Dyadic(_) => Some([Float::new(64), Float::new(64), Float::new(64)]),
            Strategy::Oracle => None,
        };
        let xinv = Complex::with_val(prec, x.recip_ref());
        let mut s = Complex::new(prec);
        let mut tsum = Complex::new(prec);
        for (e, &a) in self.poles_residues.entries.iter().zip(&args) {
            let t = Complex::with_val(prec, &e.pole * &x);
            let (ek, bound) = self.e_term(&t, a)?;
            let cek = Complex::with_val(prec, &e.residue * &ek);
            let cpek = Complex::with_val(prec, &cek * &e.pole);
            let cp2ek = Complex::with_val(prec, &cpek * &e.pole);
            f -= &cek;
            d1 += &cpek;
            d2 -= &cp2ek;
            s += &e.residue;
            tsum += Complex::with_val(prec, &e.residue * &e.pole);
            match (&mut err, bound) {
                (Some(acc), Some(b)) => {
                    let c = Float::with_val(64, e.residue.abs_ref());
                    let p = Float::with_val(64, e.pole.abs_ref());
                    let cb = Float::with_val(64, &c * &b);
                    acc[0] += &cb;
                    let cpb = Float::with_val(64, &cb * &p);
                    acc[1] += &cpb;
                    acc[2] += Float::with_val(64, &cpb * &p);
                }
                (Some(_), None) => err = None,
                _ => {}
            }
        }
        let sx = Complex::with_val(prec, &s * &xinv);
        d1 -= &sx;
        d2 += Complex::with_val(prec, &sx * &xinv);
        d2 += Complex::with_val(prec, &tsum * &xinv);

        // Σ d_j j!/x^{j+1}, −Σ d_j (j+1)!/x^{j+2}, Σ d_j (j+2)!/x^{j+3}
        let mut xp = xinv.clone(); // x^{-(j+1)}
        let mut fact = Float::with_val(prec, 1); // j!
        for (j, d) in self.poles_residues.polynomial_part.iter().enumerate() {
            if j > 0 {
                xp *= &xinv;
                fact *= j as u32;
            }
            let g = Complex::with_val(prec, d * &xp) * &fact;
            let g1 = Complex::with_val(prec, &g * &xinv) * (j as u32 + 1);
            let g2 = Complex::with_val(prec, &g1 * &xinv) * (j as u32 + 2);
            f += &g;
            d1 -= &g1;
            d2 += &g2;
        }
        Ok(Jet { f, d1, d2, error_estimate: err })
    }

    pub fn evaluate(&self, x: &Complex) -> Result<Evaluation> {
        let j = self.jet(x)?;
        Ok(Evaluation { value: j.f, error_estimate: j.error_estimate.map(|[e, _, _]| e) })
    }

    /// First or second derivative.
    pub fn derivative(&self, x: &Complex, order: u32) -> Result<Evaluation> {
        let j = self.jet(x)?;
        match order {
            1 => Ok(Evaluation { value: j.d1, error_estimate: j.error_estimate.map(|[_, e, _]| e) }),
            2 => Ok(Evaluation { value: j.d2, error_estimate: j.error_estimate.map(|[_, _, e]| e) }),
            _ => Err(Error::InvalidArgument(format!("derivative order {order} not in {{1, 2}}"))),
        }
    }

    /// h″ + h′/x + h − 4/(25x²) + h²/2 − (4/(25x²)) h.
    pub fn h_residual(&self, x: &Complex) -> Result<Complex> {
        let prec = self.precision_bits;
        let x = self.to_prec(x);
        let j = self.jet(&x)?;
        let xinv = Complex::with_val(prec, x.recip_ref());
        let q = Complex::with_val(prec, xinv.square_ref()) * 4u32 / 25u32;
        let mut r = j.d2;
        r += Complex::with_val(prec, &j.d1 * &xinv);
        r += &j.f;
        r -= &q;
        r += Complex::with_val(prec, j.f.square_ref()) / 2u32;
        r -= Complex::with_val(prec, &q * &j.f);
        Ok(r)
    }

    pub fn stokes_angles(&self) -> Vec<f64> {
        self.poles_residues.entries.iter().map(|e| arg_f64(&e.pole)).collect()
    }
}

/// Pole data of the [n/n] Borel-plane Padé approximant of the P_I series h.
pub fn borel_pade_poles(n: usize, precision_bits: u32) -> Result<PoleResidueSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let h = generate_h_coefficients(2 * n as i64)?;
    let b = borel_transform(&h)?;
    let pade = build_pade(&b, n, n)?;
    partial_fractions(&pade, precision_bits)
}
