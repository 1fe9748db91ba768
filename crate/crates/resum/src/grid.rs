use rayon::prelude::*;
use rug::Complex;
use serde_json::json;

use eisum_core::mp::log2_abs;
use eisum_core::{Error, Result};

use crate::EiSumApproximant;

pub const DEFAULT_GRID_CAP: usize = 1 << 20;

/// Points origin + i·step + j·step·i for 0 ≤ i < nx, 0 ≤ j < ny.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: (f64, f64),
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

/// The two grids of the published error plots, each with its direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPreset {
    Rhp,
    Lhp,
}

impl GridPreset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rhp" => Some(Self::Rhp),
            "lhp" => Some(Self::Lhp),
            _ => None,
        }
    }

    pub fn spec(self) -> GridSpec {
        let origin = match self {
            Self::Rhp => (1.0, -1.0),
            Self::Lhp => (-1.0, -1.5),
        };
        GridSpec { origin, step: 0.1, nx: 32, ny: 32 }
    }

    pub fn theta(self) -> f64 {
        match self {
            Self::Rhp => 0.0,
            Self::Lhp => std::f64::consts::PI,
        }
    }
}

impl GridSpec {
    pub fn validate(&self, cap: usize) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {}", self.step)));
        }
        if !self.origin.0.is_finite() || !self.origin.1.is_finite() {
            return Err(Error::InvalidArgument("grid origin must be finite".into()));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidArgument("grid needs nx, ny >= 1".into()));
        }
        match self.nx.checked_mul(self.ny) {
            Some(n) if n <= cap => Ok(()),
            _ => Err(Error::InvalidArgument(format!(
                "grid of {}x{} points exceeds the cap of {cap}",
                self.nx, self.ny
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major: index = j·nx + i.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let (i, j) = (index % self.nx, index / self.nx);
        (self.origin.0 + i as f64 * self.step, self.origin.1 + j as f64 * self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub re: f64,
    pub im: f64,
    /// NaN when the point failed.
    pub log10_residual: f64,
    pub reason: Option<&'static str>,
}

#[derive(Debug, Clone)]
pub struct GridField {
    pub spec: GridSpec,
    pub theta: f64,
    pub points: Vec<GridPoint>,
}

/// log10 |h_residual| over the grid, in parallel, in row-major order.
///
/// Failing points carry NaN and the error code instead of aborting the run.
pub fn residual_grid(approx: &EiSumApproximant, grid: &GridSpec, cap: usize) -> Result<GridField> {
    grid.validate(cap)?;
    let prec = approx.precision_bits;
    let points = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (re, im) = grid.point(idx);
            let x = Complex::with_val(prec, (re, im));
            match approx.h_residual(&x) {
                Ok(r) => {
                    GridPoint { re, im, log10_residual: log2_abs(&r) * std::f64::consts::LOG10_2, reason: None }
                }
                Err(e) => GridPoint { re, im, log10_residual: f64::NAN, reason: Some(e.code()) },
            }
        })
        .collect();
    Ok(GridField { spec: *grid, theta: approx.theta, points })
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.6}")
    }
}

impl GridField {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.reason.is_some()).count()
    }

    /// Finite values only.
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.log10_residual).filter(|v| v.is_finite()).collect()
    }

    pub fn median(&self) -> Option<f64> {
        let mut v = self.values();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
    }

    /// `re,im,log10_residual`; failed points print NaN.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,log10_residual\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", fmt_num(p.re), fmt_num(p.im), fmt_num(p.log10_residual)));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .points
            .iter()
            .map(|p| {
                json!({
                    "re": fmt_num(p.re).parse::<f64>().ok(),
                    "im": fmt_num(p.im).parse::<f64>().ok(),
                    "log10_residual": if p.log10_residual.is_finite() {
                        fmt_num(p.log10_residual).parse::<f64>().ok()
                    } else {
                        None
                    },
                    "reason": p.reason,
                })
            })
            .collect();
        json!({
            "grid": {
                "origin": [self.spec.origin.0, self.spec.origin.1],
                "step": self.spec.step,
                "nx": self.spec.nx,
                "ny": self.spec.ny,
                "order": "row-major, re fastest",
            },
            "theta": self.theta,
            "points": rows,
        })
    }
}
