//! Ei⁺ and E(t) = e^{-t} Ei⁺(t).
//!
//! Two evaluators: an entire-series oracle (`ei_plus`) good for moderate
//! |t|, and the dyadic factorial expansion (`ei_dyadic`) which converges
//! geometrically in the plane cut along β(−∞, 0] and comes with explicit
//! remainder bounds.
//!
//! Branches are labelled by a surface argument `a`: the value on the sheet
//! where arg t = a. Ei⁺ gains 2πi per positive turn.
#![forbid(unsafe_code)]

mod dyadic;
mod oracle;

pub use dyadic::{
    default_region_c, dyadic_pole_locations, ei_dyadic, ei_dyadic_adaptive, remainder_kernel, rho_tail,
    DyadicTruncation, EiEvaluation, Region, RemainderParams,
};
pub use oracle::{e_oracle, e_surface, ei_plus, ein_neg, winding_for, OracleConfig, DEFAULT_CUTOFF};

use rug::Complex;

/// Rising factorial x(x+1)⋯(x+k−1), with (x)_0 = 1.
pub fn pochhammer(x: &Complex, k: u32) -> Complex {
    let prec = x.prec().0;
    let mut acc = Complex::with_val(prec, 1);
    let mut f = x.clone();
    for _ in 0..k {
        acc *= &f;
        f += 1u32;
    }
    acc
}
