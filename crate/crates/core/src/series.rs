//! Exact rational series: the h-equation asymptotic coefficients and the
//! Borel transform.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    /// Coefficient at index k multiplies x^{-(k+1)}.
    AsymptoticInverseX,
    /// Coefficient at index k multiplies p^k.
    BorelMaclaurin,
}

/// Dense exact series, stored from `offset` onwards.
///
/// Indices below `offset` are zero. Zeros after `offset` (the odd powers of
/// the h-series) are stored explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeries {
    pub kind: SeriesKind,
    pub offset: usize,
    pub coeffs: Vec<Rational>,
}

impl RationalSeries {
    pub fn new(kind: SeriesKind, offset: usize, coeffs: Vec<Rational>) -> Self {
        Self { kind, offset, coeffs }
    }

    /// Builds a series indexed from zero, then trims leading zeros into `offset`.
    pub fn from_dense(kind: SeriesKind, mut coeffs: Vec<Rational>) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        let lead = lead.min(coeffs.len().saturating_sub(1));
        coeffs.drain(..lead);
        Self { kind, offset: lead, coeffs }
    }

    pub fn coeff(&self, k: usize) -> Rational {
        if k < self.offset {
            return Rational::new();
        }
        self.coeffs.get(k - self.offset).cloned().unwrap_or_default()
    }

    /// One past the last stored index, i.e. the number of known coefficients
    /// counting the implicit leading zeros.
    pub fn len(&self) -> usize {
        self.offset + self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients 0..len() with the leading zeros materialised.
    pub fn dense(&self) -> Vec<Rational> {
        (0..self.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn truncate(&self, len: usize) -> Self {
        let keep = len.saturating_sub(self.offset).min(self.coeffs.len());
        Self { kind: self.kind, offset: self.offset, coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<String> = self.coeffs.iter().map(rat_string).collect();
        serde_json::json!({
            "kind": self.kind,
            "offset": self.offset,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: SeriesKind,
            offset: usize,
            coeffs: Vec<String>,
        }
        let raw: Raw =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<Rational>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kind: raw.kind, offset: raw.offset, coeffs })
    }
}

/// `num/den` always, including integers, so the JSON shape is uniform.
pub fn rat_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Coefficients a_k of h = Σ a_k x^{-(k+1)} solving
/// h'' + h'/x + h − 4/(25x²) + h²/2 − 4h/(25x²) = 0, for k = 0..=order.
///
/// Substituting the series, h'' + h'/x contributes (k+1)² a_k x^{-(k+3)},
/// the 4h/(25x²) term −(4/25) a_k x^{-(k+3)}, and h²/2 contributes
/// ½ a_k a_l x^{-(k+l+2)}. Matching x^{-(j+1)}:
///
///   a_j = (4/25 − (j−1)²) a_{j−2} + [j = 1]·4/25 − ½ Σ_{k+l=j−1} a_k a_l
///
/// with a_{−1} = a_{−2} = 0. This forces a_0 = 0 and every even index to
/// vanish, so the result is stored with offset 1.
pub fn generate_h_coefficients(order: i64) -> Result<RationalSeries> {
    if order < 2 {
        return Err(Error::InvalidArgument(format!("order must be >= 2, got {order}")));
    }
    let order = order as usize;
    let four_25 = Rational::from((4, 25));
    let mut a: Vec<Rational> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut v = Rational::new();
        if j >= 2 {
            let jm1 = Integer::from(j - 1);
            let lin = four_25.clone() - Rational::from(jm1.square());
            v += lin * &a[j - 2];
        }
        if j == 1 {
            v += &four_25;
        }
        if j >= 1 {
            // Cauchy product Σ_{k+l=j-1} a_k a_l, using symmetry
            let s = j - 1;
            let mut conv = Rational::new();
            for k in 0..=s / 2 {
                let l = s - k;
                if a[k].is_zero() || a[l].is_zero() {
                    continue;
                }
                let prod = Rational::from(&a[k] * &a[l]);
                if k == l {
                    conv += prod;
                } else {
                    conv += prod * 2u32;
                }
            }
            v -= conv / 2u32;
        }
        a.push(v);
    }
    Ok(RationalSeries::from_dense(SeriesKind::AsymptoticInverseX, a))
}

/// Term-wise map x^{-(k+1)} ↦ p^k / k!.
pub fn borel_transform(series: &RationalSeries) -> Result<RationalSeries> {
    if series.kind != SeriesKind::AsymptoticInverseX {
        return Err(Error::InvalidArgument(
            "Borel transform expects an inverse-power asymptotic series".into(),
        ));
    }
    let mut fact = Integer::from(1);
    for k in 1..=series.offset {
        fact *= k as u32;
    }
    let mut out = Vec::with_capacity(series.coeffs.len());
    for (i, c) in series.coeffs.iter().enumerate() {
        let k = series.offset + i;
        if i > 0 {
            fact *= k as u32;
        }
        out.push(Rational::from(c / &fact));
    }
    Ok(RationalSeries::new(SeriesKind::BorelMaclaurin, series.offset, out))
}
