use rug::Complex;
use serde_json::json;

use eisum_core::mp::{abs_f64, fmt_complex, to_c64};
use eisum_core::pade::{build_pade_complex, partial_fractions_complex};
use eisum_core::{Error, Result};

/// Default [n/n] order of the z-plane approximant.
pub const DEFAULT_Z_ORDER: usize = 80;
/// Working precision for the z-plane solve and root finding; the Toeplitz
/// system at the default order loses most of it.
pub const DEFAULT_Z_PRECISION: u32 = 2400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Genuine,
    Spurious,
    Borderline,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Self::Genuine => "genuine",
            Self::Spurious => "spurious",
            Self::Borderline => "borderline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleConfig {
    /// Genuine needs residue ≥ tau · median.
    pub tau: f64,
    /// Spurious below tau_prime · median.
    pub tau_prime: f64,
    /// Genuine also needs displacement ≤ this under the (n−2, m−2) rerun.
    pub stability_tol: f64,
    /// Root pairs closer than this with cancelling residues are one double pole.
    pub merge_radius: f64,
    pub precision_bits: u32,
}

impl Default for PoleConfig {
    fn default() -> Self {
        Self { tau: 1e-2, tau_prime: 1e-6, stability_tol: 1e-4, merge_radius: 0.05, precision_bits: DEFAULT_Z_PRECISION }
    }
}

#[derive(Debug, Clone)]
pub struct PoleReport {
    pub location: Complex,
    pub residue_magnitude: f64,
    pub classification: Classification,
    /// Distance to the nearest pole of the lower-order rerun.
    pub stability: f64,
    /// Denominator roots merged into this report (2 for a split double pole).
    pub roots: usize,
}

impl PoleReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "location": fmt_complex(&self.location),
            "residue_magnitude": self.residue_magnitude,
            "classification": self.classification.name(),
            "stability": self.stability,
            "roots": self.roots,
        })
    }

    pub fn csv_row(&self) -> String {
        let (re, im) = to_c64(&self.location);
        format!(
            "{re:.15e},{im:.15e},{:.6e},{},{:.6e}",
            self.residue_magnitude,
            self.classification.name(),
            self.stability
        )
    }
}

struct Candidate {
    location: Complex,
    residue: f64,
    roots: usize,
}

/// Poles of the [n/m] approximant in absolute z, split double poles merged.
fn candidates(coeffs: &[Complex], z0: &Complex, n: usize, m: usize, cfg: &PoleConfig) -> Result<Vec<Candidate>> {
    let prec = cfg.precision_bits;
    let pade = build_pade_complex(coeffs, z0, n, m, prec)?;
    let set = partial_fractions_complex(&pade, prec)?;
    let raw: Vec<(Complex, Complex)> = set
        .entries
        .into_iter()
        .map(|e| (Complex::with_val(prec, &e.pole + z0), e.residue))
        .collect();
    let mut used = vec![false; raw.len()];
    let mut out = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let ci = abs_f64(&raw[i].1);
        // nearest unused partner with a nearly opposite residue
        let partner = (i + 1..raw.len())
            .filter(|&j| !used[j])
            .map(|j| (j, abs_f64(&Complex::with_val(prec, &raw[i].0 - &raw[j].0))))
            .filter(|&(_, d)| d < cfg.merge_radius)
            .filter(|&(j, _)| {
                let cj = abs_f64(&raw[j].1);
                let sum = abs_f64(&Complex::with_val(prec, &raw[i].1 + &raw[j].1));
                sum < 0.5 * ci.max(cj)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => {
                used[j] = true;
                let mid = Complex::with_val(prec, &raw[i].0 + &raw[j].0) / 2u32;
                out.push(Candidate { location: mid, residue: ci.max(abs_f64(&raw[j].1)), roots: 2 });
            }
            None => out.push(Candidate { location: raw[i].0.clone(), residue: ci, roots: 1 }),
        }
    }
    Ok(out)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Poles of the [n/m] z-plane approximant about z₀, classified.
///
/// A P_I pole is double, so the Padé denominator usually shows it as two
/// close roots with large opposite residues; those are merged and the
/// larger residue is reported. The classifier keys on residue magnitude:
/// Genuine needs residue ≥ τ·median and a stable location, Spurious has
/// residue < τ′·median, anything else is Borderline. Stability is the
/// distance to the nearest pole of the [n−2/m−2] approximant.
pub fn locate_poles(coeffs: &[Complex], z0: &Complex, n: usize, m: usize, cfg: &PoleConfig) -> Result<Vec<PoleReport>> {
    if !(cfg.tau > cfg.tau_prime && cfg.tau_prime >= 0.0 && cfg.stability_tol > 0.0) {
        return Err(Error::InvalidArgument("need tau > tau' >= 0 and a positive stability tolerance".into()));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let (n2, m2) = (n.saturating_sub(2), m.saturating_sub(2).max(1));
    let (main, rerun) = rayon::join(
        || candidates(coeffs, z0, n, m, cfg),
        || candidates(coeffs, z0, n2, m2, cfg),
    );
    let main = main?;
    let rerun = rerun?;
    if main.is_empty() {
        return Ok(Vec::new());
    }
    let med = median(&main.iter().map(|c| c.residue).collect::<Vec<_>>());
    let prec = cfg.precision_bits;
    let mut reports: Vec<PoleReport> = main
        .into_iter()
        .map(|c| {
            let stability = rerun
                .iter()
                .map(|r| abs_f64(&Complex::with_val(prec, &c.location - &r.location)))
                .fold(f64::INFINITY, f64::min);
            let classification = if c.residue < cfg.tau_prime * med {
                Classification::Spurious
            } else if c.residue >= cfg.tau * med && stability <= cfg.stability_tol {
                Classification::Genuine
            } else {
                Classification::Borderline
            };
            PoleReport { location: c.location, residue_magnitude: c.residue, classification, stability, roots: c.roots }
        })
        .collect();
    sort_by_distance(&mut reports, z0);
    Ok(reports)
}

/// Nearest to z₀ first; ties by argument about z₀.
pub(crate) fn sort_by_distance(reports: &mut [PoleReport], z0: &Complex) {
    let key = |r: &PoleReport| {
        let d = Complex::with_val(64, &r.location - z0);
        let (re, im) = to_c64(&d);
        (re.hypot(im), im.atan2(re))
    };
    reports.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

