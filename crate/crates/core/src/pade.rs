//! Padé approximants: exact rational construction for the Borel plane,
//! multiprecision complex construction for Taylor data, and partial
//! fractions for both.

use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{fmt_complex, log2_abs, parse_complex_pair};
use crate::poly;
use crate::roots::{aberth, GUARD_BITS};
use crate::series::{RationalSeries, SeriesKind};

/// [n/m] approximant P/Q with exact coefficients and Q(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
    /// Orders actually realised; `m` drops below the request when the
    /// Toeplitz block is singular.
    pub orders: (usize, usize),
    pub requested: (usize, usize),
    /// Expansion point (re, im); zero in the Borel plane.
    pub base_point: (Rational, Rational),
}

impl PadeApproximant {
    pub fn is_reduced(&self) -> bool {
        self.orders != self.requested
    }

    /// Exact Maclaurin coefficients of P/Q, indices 0..len.
    pub fn maclaurin(&self, len: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = self.numerator.get(i).cloned().unwrap_or_default();
            for (j, qj) in self.denominator.iter().enumerate().skip(1) {
                if j > i {
                    break;
                }
                v -= Rational::from(qj * &out[i - j]);
            }
            out.push(v);
        }
        out
    }

    /// Exact check that P − Q·f vanishes through p^{n+m}.
    pub fn order_condition_holds(&self, series: &RationalSeries) -> bool {
        let (n, m) = self.orders;
        let f = series.dense();
        if f.len() < n + m + 1 {
            return false;
        }
        (0..=n + m).all(|i| {
            let mut v = self.numerator.get(i).cloned().unwrap_or_default();
            for (j, qj) in self.denominator.iter().enumerate() {
                if j > i {
                    break;
                }
                v -= Rational::from(qj * &f[i - j]);
            }
            v.is_zero()
        })
    }
}

/// Builds the normalised [n/m] approximant of a Borel-plane series.
pub fn build_pade(series: &RationalSeries, n: usize, m: usize) -> Result<PadeApproximant> {
    if series.kind != SeriesKind::BorelMaclaurin {
        return Err(Error::InvalidArgument("Padé construction expects a Maclaurin series".into()));
    }
    build_pade_dense(&series.dense(), n, m)
}

/// Same as [`build_pade`] on raw coefficients c_0, c_1, ...
pub fn build_pade_dense(c: &[Rational], n: usize, m: usize) -> Result<PadeApproximant> {
    if c.len() < n + m + 1 {
        return Err(Error::InvalidArgument(format!(
            "[{n}/{m}] needs {} coefficients, have {}",
            n + m + 1,
            c.len()
        )));
    }
    let zero = (Rational::new(), Rational::new());
    for mm in (1..=m).rev() {
        if let Some(q) = solve_toeplitz(c, n, mm) {
            let numerator = numerator_from(c, &q, n);
            return Ok(PadeApproximant {
                numerator,
                denominator: q,
                orders: (n, mm),
                requested: (n, m),
                base_point: zero,
            });
        }
    }
    // Every block with a denominator is singular. Only a series that is a
    // polynomial through order n+m still has an approximant.
    let q = vec![Rational::from(1)];
    let numerator = numerator_from(c, &q, n);
    if c[n + 1..=n + m].iter().any(|x| !x.is_zero()) {
        return Err(Error::DegenerateTable(format!(
            "no [{n}/k] approximant with k <= {m} meets the order condition"
        )));
    }
    Ok(PadeApproximant { numerator, denominator: q, orders: (n, 0), requested: (n, m), base_point: zero })
}

fn numerator_from(c: &[Rational], q: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|i| {
            let mut v = Rational::new();
            for (j, qj) in q.iter().enumerate().take(i + 1) {
                v += Rational::from(qj * &c[i - j]);
            }
            v
        })
        .collect()
}

/// Denominator q_0..q_m (q_0 = 1) from Σ_j q_j c_{n+i−j} = 0, i = 1..m.
///
/// Rows are scaled to integers and reduced by fraction-free (Bareiss)
/// elimination, so every intermediate stays an exact integer.
fn solve_toeplitz(c: &[Rational], n: usize, m: usize) -> Option<Vec<Rational>> {
    let at = |k: isize| -> Rational {
        if k < 0 {
            Rational::new()
        } else {
            c[k as usize].clone()
        }
    };
    let mut a: Vec<Vec<Integer>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rational> = (0..m).map(|j| at(n as isize + i as isize - j as isize)).collect();
        row.push(-at(n as isize + 1 + i as isize));
        let mut l = Integer::from(1);
        for x in &row {
            l.lcm_mut(x.denom());
        }
        a.push(
            row.into_iter()
                .map(|x| {
                    let (num, den) = x.into_numer_denom();
                    num * Integer::from(&l / &den)
                })
                .collect(),
        );
    }
    let mut prev = Integer::from(1);
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        for i in col + 1..m {
            for j in col + 1..=m {
                let t = Integer::from(&a[i][j] * &a[col][col]) - Integer::from(&a[i][col] * &a[col][j]);
                a[i][j] = t.div_exact(&prev);
            }
            a[i][col] = Integer::new();
        }
        prev = a[col][col].clone();
    }
    let mut x = vec![Rational::new(); m];
    for i in (0..m).rev() {
        let mut s = Rational::from(&a[i][m]);
        for j in i + 1..m {
            s -= Rational::from(&x[j] * &a[i][j]);
        }
        x[i] = s / &a[i][i];
    }
    let mut q = Vec::with_capacity(m + 1);
    q.push(Rational::from(1));
    q.extend(x);
    Some(q)
}

/// [n/m] approximant with multiprecision complex coefficients, used where
/// the series itself is only known to finite precision.
#[derive(Debug, Clone)]
pub struct ComplexPade {
    pub numerator: Vec<Complex>,
    pub denominator: Vec<Complex>,
    pub orders: (usize, usize),
    pub requested: (usize, usize),
    pub base_point: Complex,
}

/// Solves the order conditions by LU with partial pivoting at `prec` bits.
/// A pivot below 2^{-prec/2} of the row scale counts as singular and the
/// denominator degree is reduced.
pub fn build_pade_complex(c: &[Complex], base_point: &Complex, n: usize, m: usize, prec: u32) -> Result<ComplexPade> {
    if c.len() < n + m + 1 {
        return Err(Error::InvalidArgument(format!(
            "[{n}/{m}] needs {} coefficients, have {}",
            n + m + 1,
            c.len()
        )));
    }
    let cw: Vec<Complex> = c.iter().map(|x| Complex::with_val(prec, x)).collect();
    for mm in (0..=m).rev() {
        let q = if mm == 0 { Some(vec![Complex::with_val(prec, 1)]) } else { lu_toeplitz(&cw, n, mm, prec) };
        if let Some(q) = q {
            let numerator: Vec<Complex> = (0..=n)
                .map(|i| {
                    let mut v = Complex::new(prec);
                    for (j, qj) in q.iter().enumerate().take(i + 1) {
                        v += Complex::with_val(prec, qj * &cw[i - j]);
                    }
                    v
                })
                .collect();
            return Ok(ComplexPade {
                numerator,
                denominator: q,
                orders: (n, mm),
                requested: (n, m),
                base_point: Complex::with_val(prec, base_point),
            });
        }
    }
    Err(Error::DegenerateTable(format!("[{n}/{m}] singular at every denominator degree")))
}

fn lu_toeplitz(c: &[Complex], n: usize, m: usize, prec: u32) -> Option<Vec<Complex>> {
    let at = |k: isize| -> Complex {
        if k < 0 {
            Complex::new(prec)
        } else {
            c[k as usize].clone()
        }
    };
    let mut a: Vec<Vec<Complex>> = (0..m)
        .map(|i| {
            let mut row: Vec<Complex> = (0..m).map(|j| at(n as isize + i as isize - j as isize)).collect();
            row.push(-at(n as isize + 1 + i as isize));
            row
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r[..m].iter())
        .map(log2_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return None;
    }
    let floor = scale - f64::from(prec) / 2.0;
    for col in 0..m {
        let (piv, mag) = (col..m)
            .map(|r| (r, log2_abs(&a[r][col])))
            .fold((col, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag < floor {
            return None;
        }
        a.swap(col, piv);
        let (top, rest) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = Complex::with_val(prec, &row[col] / &prow[col]);
            for j in col + 1..=m {
                let t = Complex::with_val(prec, &f * &prow[j]);
                row[j] -= t;
            }
            row[col] = Complex::new(prec);
        }
    }
    let mut x = vec![Complex::new(prec); m];
    for i in (0..m).rev() {
        let mut s = a[i][m].clone();
        for j in i + 1..m {
            s -= Complex::with_val(prec, &x[j] * &a[i][j]);
        }
        x[i] = s / &a[i][i];
    }
    let mut q = Vec::with_capacity(m + 1);
    q.push(Complex::with_val(prec, 1));
    q.extend(x);
    Some(q)
}

/// Roots of the denominator at `precision_bits`, with multiplicity.
pub fn denominator_roots(pade: &PadeApproximant, precision_bits: u32) -> Result<Vec<Complex>> {
    let q = poly::to_complex(&pade.denominator, precision_bits + GUARD_BITS);
    Ok(aberth(&q, precision_bits)?.roots)
}

#[derive(Debug, Clone)]
pub struct PoleResidue {
    pub pole: Complex,
    pub residue: Complex,
}

/// Σ c_k/(p − p_k) plus a polynomial part Σ d_j p^j.
#[derive(Debug, Clone)]
pub struct PoleResidueSet {
    pub entries: Vec<PoleResidue>,
    pub polynomial_part: Vec<Complex>,
    pub source_orders: (usize, usize),
    pub precision_bits: u32,
    /// max |Q(p_k)| over the computed roots.
    pub root_residual_bound: Float,
}

impl PoleResidueSet {
    /// Maclaurin coefficients of the represented rational function about 0.
    pub fn maclaurin(&self, len: usize) -> Vec<Complex> {
        let prec = self.precision_bits;
        let mut out = vec![Complex::new(prec); len];
        for e in &self.entries {
            // c/(p − p_k) = −(c/p_k) Σ (p/p_k)^j
            let inv = Complex::with_val(prec, e.pole.recip_ref());
            let mut t = -Complex::with_val(prec, &e.residue * &inv);
            for o in out.iter_mut() {
                *o += &t;
                t *= &inv;
            }
        }
        for (o, d) in out.iter_mut().zip(&self.polynomial_part) {
            *o += d;
        }
        out
    }

    /// Evaluates the rational function at p.
    pub fn eval(&self, p: &Complex) -> Complex {
        let prec = self.precision_bits;
        let mut v = poly::eval(&self.polynomial_part, &Complex::with_val(prec, p));
        for e in &self.entries {
            v += Complex::with_val(prec, &e.residue / Complex::with_val(prec, p - &e.pole));
        }
        v
    }

    pub fn residue_sum(&self) -> Complex {
        let mut s = Complex::new(self.precision_bits);
        for e in &self.entries {
            s += &e.residue;
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| serde_json::json!({ "pole": fmt_complex(&e.pole), "residue": fmt_complex(&e.residue) }))
            .collect();
        let poly: Vec<[String; 2]> = self.polynomial_part.iter().map(fmt_complex).collect();
        serde_json::json!({
            "source_orders": [self.source_orders.0, self.source_orders.1],
            "precision_bits": self.precision_bits,
            "root_residual_bound": crate::mp::fmt_float(&self.root_residual_bound),
            "entries": entries,
            "polynomial_part": poly,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("pole/residue JSON: bad {what}"));
        let prec = v["precision_bits"].as_u64().ok_or_else(|| bad("precision_bits"))? as u32;
        let orders = v["source_orders"].as_array().ok_or_else(|| bad("source_orders"))?;
        let ord = |i: usize| orders.get(i).and_then(|x| x.as_u64()).ok_or_else(|| bad("source_orders"));
        let pair = |x: &serde_json::Value| -> Result<Complex> {
            let p: [String; 2] = serde_json::from_value(x.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            parse_complex_pair(&p, prec)
        };
        let mut entries = Vec::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            entries.push(PoleResidue { pole: pair(&e["pole"])?, residue: pair(&e["residue"])? });
        }
        let mut polynomial_part = Vec::new();
        for d in v["polynomial_part"].as_array().ok_or_else(|| bad("polynomial_part"))? {
            polynomial_part.push(pair(d)?);
        }
        let rb = v["root_residual_bound"].as_str().ok_or_else(|| bad("root_residual_bound"))?;
        Ok(Self {
            entries,
            polynomial_part,
            source_orders: (ord(0)? as usize, ord(1)? as usize),
            precision_bits: prec,
            root_residual_bound: crate::mp::parse_real(rb, 64)?,
        })
    }
}

/// Partial fractions of an exact approximant. The polynomial part (present
/// when deg P ≥ deg Q) is split off exactly before any rounding.
pub fn partial_fractions(pade: &PadeApproximant, precision_bits: u32) -> Result<PoleResidueSet> {
    let (s, r) = poly::divmod_rat(&pade.numerator, &pade.denominator);
    let wp = precision_bits + GUARD_BITS;
    let poly_part: Vec<Complex> = poly::to_complex(&s, precision_bits);
    let rem = poly::to_complex(&r, wp);
    let den = poly::to_complex(&pade.denominator, wp);
    assemble_fractions(&rem, &den, poly_part, pade.orders, precision_bits)
}

/// Partial fractions of a floating approximant, poles given relative to its
/// base point.
pub fn partial_fractions_complex(pade: &ComplexPade, precision_bits: u32) -> Result<PoleResidueSet> {
    let wp = precision_bits + GUARD_BITS;
    let num: Vec<Complex> = pade.numerator.iter().map(|x| Complex::with_val(wp, x)).collect();
    let den: Vec<Complex> = pade.denominator.iter().map(|x| Complex::with_val(wp, x)).collect();
    let (s, r) = if poly::degree_complex(&den).unwrap_or(0) == 0 {
        (num.clone(), Vec::new())
    } else {
        poly::divmod_complex(&num, &den)
    };
    let poly_part = s.iter().map(|x| Complex::with_val(precision_bits, x)).collect();
    assemble_fractions(&r, &den, poly_part, pade.orders, precision_bits)
}

fn assemble_fractions(
    rem: &[Complex],
    den: &[Complex],
    polynomial_part: Vec<Complex>,
    orders: (usize, usize),
    precision_bits: u32,
) -> Result<PoleResidueSet> {
    let wp = precision_bits + GUARD_BITS;
    let dq = poly::degree_complex(den).unwrap_or(0);
    if dq == 0 {
        return Ok(PoleResidueSet {
            entries: Vec::new(),
            polynomial_part,
            source_orders: orders,
            precision_bits,
            root_residual_bound: Float::new(64),
        });
    }
    let den = &den[..=dq];
    let roots = aberth(den, precision_bits)?.roots;
    let scale = roots.iter().map(log2_abs).fold(0.0f64, f64::max);
    let sep = scale - f64::from(precision_bits) / 2.0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if log2_abs(&Complex::with_val(wp, &roots[i] - &roots[j])) < sep {
                return Err(Error::NearMultiplePole(i, j));
            }
        }
    }
    let dden = poly::derivative(den);
    let mut bound = Float::new(64);
    let mut entries = Vec::with_capacity(roots.len());
    for p in roots {
        let qv = poly::eval(den, &p);
        let a = Float::with_val(64, qv.abs_ref());
        if a > bound {
            bound = a;
        }
        let c = Complex::with_val(wp, poly::eval(rem, &p) / poly::eval(&dden, &p));
        entries.push(PoleResidue { pole: Complex::with_val(precision_bits, &p), residue: Complex::with_val(precision_bits, &c) });
    }
    sort_entries(&mut entries);
    Ok(PoleResidueSet { entries, polynomial_part, source_orders: orders, precision_bits, root_residual_bound: bound })
}

/// Orders by modulus, then argument, so output is independent of the
/// root finder's internal ordering.
pub fn sort_entries(entries: &mut [PoleResidue]) {
    let key = |e: &PoleResidue| {
        let (re, im) = crate::mp::to_c64(&e.pole);
        (re.hypot(im), im.atan2(re))
    };
    entries.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
}
