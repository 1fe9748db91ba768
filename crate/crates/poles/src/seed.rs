use rug::{Complex, Float};

use eisum_core::{Error, Result};
use eisum_resum::EiSumApproximant;

#[derive(Debug, Clone)]
pub struct TaylorSeed {
    pub z0: Complex,
    /// y(z₀)
    pub c0: Complex,
    /// y′(z₀)
    pub c1: Complex,
    /// Highest Taylor index to generate.
    pub order: usize,
}

/// x(z) = (24z)^{5/4}/30 on the principal branch.
pub fn x_of_z(z: &Complex) -> Complex {
    let prec = z.prec().0;
    let w = Complex::with_val(prec, z * 24u32);
    let q = Complex::with_val(prec, w.ln_ref());
    let p = Complex::with_val(prec, &q * Float::with_val(prec, 1.25)).exp();
    p / 30u32
}

/// c0 = −√(z₀/6)(1 + h), c1 = −(1 + h)/(12√(z₀/6)) − √(z₀/6) h′ (24z₀)^{1/4},
/// using dx/dz = (24z)^{1/4}.
pub fn seed_from_approximant(approx: &EiSumApproximant, z0: &Complex, order: usize) -> Result<TaylorSeed> {
    if order < 4 {
        return Err(Error::InvalidArgument(format!("seed order must be at least 4, got {order}")));
    }
    if z0.is_zero() {
        return Err(Error::Domain("z0 = 0 maps to x = 0".into()));
    }
    let prec = approx.precision_bits;
    let z = Complex::with_val(prec, z0);
    let x = x_of_z(&z);
    let jet = approx.jet(&x)?;
    let r = Complex::with_val(prec, &z / 6u32).sqrt();
    let one_h = Complex::with_val(prec, &jet.f + 1u32);
    let c0 = -Complex::with_val(prec, &r * &one_h);
    let dxdz = {
        let w = Complex::with_val(prec, &z * 24u32);
        let q = Complex::with_val(prec, w.ln_ref()) / 4u32;
        q.exp()
    };
    let t1 = Complex::with_val(prec, &one_h / Complex::with_val(prec, &r * 12u32));
    let t2 = Complex::with_val(prec, &r * &jet.d1) * &dxdz;
    let c1 = -(t1 + t2);
    Ok(TaylorSeed { z0: z, c0, c1, order })
}

/// c_0..c_order of y about z₀, at `precision_bits`.
///
/// c2 = 3c0² − z0/2, c3 = 2c0c1 − 1/6, c_n = 6/(n(n−1)) Σ_{j=0}^{n−2} c_j c_{n−2−j}.
pub fn taylor_coefficients(seed: &TaylorSeed, precision_bits: u32) -> Result<Vec<Complex>> {
    if seed.order < 4 {
        return Err(Error::InvalidArgument(format!("seed order must be at least 4, got {}", seed.order)));
    }
    let prec = precision_bits;
    let mut c = Vec::with_capacity(seed.order + 1);
    c.push(Complex::with_val(prec, &seed.c0));
    c.push(Complex::with_val(prec, &seed.c1));
    let mut c2 = Complex::with_val(prec, c[0].square_ref()) * 3u32;
    c2 -= Complex::with_val(prec, &seed.z0) / 2u32;
    c.push(c2);
    let mut c3 = Complex::with_val(prec, &c[0] * &c[1]) * 2u32;
    c3 -= Float::with_val(prec, 6u32).recip();
    c.push(c3);
    for n in 4..=seed.order {
        let mut s = Complex::new(prec);
        // symmetric convolution, half the products
        let top = n - 2;
        for j in 0..=top / 2 {
            let t = Complex::with_val(prec, &c[j] * &c[top - j]);
            if j == top - j {
                s += t;
            } else {
                s += t * 2u32;
            }
        }
        s *= 6u32;
        s /= (n * (n - 1)) as u32;
        c.push(s);
    }
    Ok(c)
}
