//! Dense polynomial helpers, coefficients stored lowest degree first.

use rug::{Complex, Float, Rational};

/// Index of the highest non-zero coefficient, `None` for the zero polynomial.
pub fn degree_rat(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn degree_complex(p: &[Complex]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn to_complex(p: &[Rational], prec: u32) -> Vec<Complex> {
    p.iter().map(|c| Complex::with_val(prec, (c, 0))).collect()
}

pub fn eval(p: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::new(prec);
    for c in p.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// Value and first derivative by a single Horner sweep.
pub fn eval_d(p: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let mut v = Complex::new(prec);
    let mut d = Complex::new(prec);
    for c in p.iter().rev() {
        d *= z;
        d += &v;
        v *= z;
        v += c;
    }
    (v, d)
}

/// Σ |p_j| r^j at low precision, the scale for relative residuals.
pub fn abs_eval(p: &[Complex], r: &Float) -> Float {
    let mut acc = Float::new(64);
    for c in p.iter().rev() {
        acc *= r;
        acc += Float::with_val(64, c.abs_ref());
    }
    acc
}

pub fn derivative(p: &[Complex]) -> Vec<Complex> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| Complex::with_val(c.prec(), c * j as u32))
        .collect()
}

/// Euclidean division over the rationals: p = s·q + r with deg r < deg q.
pub fn divmod_rat(p: &[Rational], q: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dq = degree_rat(q).expect("division by the zero polynomial");
    let Some(dp) = degree_rat(p) else {
        return (Vec::new(), Vec::new());
    };
    let mut r: Vec<Rational> = p[..=dp].to_vec();
    if dp < dq {
        return (Vec::new(), r);
    }
    let lead = &q[dq];
    let mut s = vec![Rational::new(); dp - dq + 1];
    for i in (dq..=dp).rev() {
        if r[i].is_zero() {
            continue;
        }
        let f = Rational::from(&r[i] / lead);
        for (j, qj) in q[..=dq].iter().enumerate() {
            r[i - dq + j] -= Rational::from(&f * qj);
        }
        s[i - dq] = f;
    }
    r.truncate(dq);
    (s, r)
}

/// Floating Euclidean division; the remainder's top coefficients are set to
/// exactly zero rather than left as rounding residue.
pub fn divmod_complex(p: &[Complex], q: &[Complex]) -> (Vec<Complex>, Vec<Complex>) {
    let dq = degree_complex(q).expect("division by the zero polynomial");
    let Some(dp) = degree_complex(p) else {
        return (Vec::new(), Vec::new());
    };
    let mut r: Vec<Complex> = p[..=dp].to_vec();
    if dp < dq {
        return (Vec::new(), r);
    }
    let prec = p[0].prec().0;
    let mut s = vec![Complex::new(prec); dp - dq + 1];
    for i in (dq..=dp).rev() {
        let f = Complex::with_val(prec, &r[i] / &q[dq]);
        for (j, qj) in q[..=dq].iter().enumerate() {
            let t = Complex::with_val(prec, &f * qj);
            r[i - dq + j] -= t;
        }
        s[i - dq] = f;
    }
    r.truncate(dq);
    (s, r)
}
