//! Exact series work and Padé machinery underneath the Ei-sum resummation.
//!
//! Everything up to the Padé denominator is exact rational arithmetic;
//! floating point (MPFR via `rug`) enters only at root finding.
#![forbid(unsafe_code)]

pub mod error;
pub mod mp;
pub mod pade;
pub mod poly;
pub mod roots;
pub mod series;

pub use error::{Error, ErrorClass, Result};
pub use pade::{
    build_pade, build_pade_complex, build_pade_dense, denominator_roots, partial_fractions,
    partial_fractions_complex, ComplexPade, PadeApproximant, PoleResidue, PoleResidueSet,
};
pub use series::{borel_transform, generate_h_coefficients, RationalSeries, SeriesKind};

/// Default working precision for root finding, growing with the Padé order.
pub fn default_precision_bits(n: usize) -> u32 {
    (8 * n as u32 + 128).max(512)
}
