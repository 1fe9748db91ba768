//! Ω = Ĉ ∖ {it : |t| ≥ 1}, the Borel-plane domain left after removing the
//! two singular rays, and its Riemann map ψ onto the unit disk with ψ(0) = 0.
//!
//! g_Ω(w; 0) = −log|ψ(w)| and G = |ψ| set the geometric rate at which
//! near-diagonal Padé approximants converge in capacity.

#![forbid(unsafe_code)]

use num_complex::Complex64 as C;
use serde_json::json;

use eisum_core::{Error, Result};

/// True on the slit itself: Re w = 0 and |Im w| ≥ 1.
pub fn on_cut(w: C) -> bool {
    w.re == 0.0 && w.im.abs() >= 1.0
}

/// ψ(w) = i(1 − √(1 + w²))/w, written as −iw/(1 + √(1 + w²)).
///
/// The second form has no cancellation and no removable singularity at 0.
/// The principal square root is discontinuous exactly where 1 + w² ≤ 0,
/// which is the slit, so ψ is analytic on Ω with no further bookkeeping.
pub fn psi(w: C) -> Result<C> {
    if !w.is_finite() {
        return Err(Error::InvalidArgument(format!("w = {w} is not finite")));
    }
    if on_cut(w) {
        return Err(Error::OnCut(format!("w = {w} lies on the slit")));
    }
    let root = (C::new(1.0, 0.0) + w * w).sqrt();
    Ok(C::new(0.0, -1.0) * w / (C::new(1.0, 0.0) + root))
}

/// G_Ω(w) = |ψ(w)|, in [0, 1) on Ω.
pub fn green_rate(w: C) -> Result<f64> {
    Ok(psi(w)?.norm().min(1.0))
}

/// g_Ω(w; 0) = −log G, +∞ at w = 0.
pub fn green_function(w: C) -> Result<f64> {
    Ok(-green_rate(w)?.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityRate {
    pub w: C,
    pub psi: C,
    pub g: f64,
}

impl CapacityRate {
    pub fn at(w: C) -> Result<Self> {
        let p = psi(w)?;
        Ok(Self { w, psi: p, g: p.norm().min(1.0) })
    }

    /// G^{n+m}.
    pub fn predicted_rate(&self, n: u32, m: u32) -> f64 {
        self.g.powi((n + m) as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub g: f64,
    /// (G + ε)^{n+m}
    pub rate: f64,
    /// G + ε ≥ 1: the bound says nothing.
    pub vacuous: bool,
}

impl RateReport {
    pub fn to_json(&self, w: C) -> serde_json::Value {
        json!({ "w": [w.re, w.im], "G": self.g, "rate": self.rate, "vacuous": self.vacuous })
    }
}

/// (G(w) + ε)^{n+m}, the threshold in the capacity statement for [n/m].
pub fn error_rate_report(w: C, n: u32, m: u32, eps: f64) -> Result<RateReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let g = green_rate(w)?;
    let base = g + eps;
    Ok(RateReport { g, rate: base.powi((n + m) as i32), vacuous: base >= 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_zero() {
        assert_eq!(psi(C::new(0.0, 0.0)).unwrap(), C::new(0.0, 0.0));
        assert_eq!(green_rate(C::new(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(green_function(C::new(0.0, 0.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn slit_rejected() {
        for w in [C::new(0.0, 1.0), C::new(0.0, -3.0)] {
            assert!(matches!(psi(w), Err(Error::OnCut(_))));
        }
        assert!(psi(C::new(0.0, 0.999)).is_ok());
    }

    #[test]
    fn vacuous_flag() {
        let r = error_rate_report(C::new(0.001, 5.0), 10, 10, 0.5).unwrap();
        assert!(r.vacuous && r.rate >= 1.0);
        assert!(error_rate_report(C::new(1.0, 0.0), 1, 1, 0.0).is_err());
    }
}
