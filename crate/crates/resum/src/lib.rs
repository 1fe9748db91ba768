//! Sums of exponential integrals built from Borel-plane poles.
//!
//! A pole set {(p_k, c_k)} together with a polynomial part Σ d_j p^j is
//! Laplace transformed along a direction θ, giving
//! f(x) = −Σ c_k e^{−p_k x} Ei⁺(p_k x) + Σ d_j j!/x^{j+1}.

#![forbid(unsafe_code)]

mod approximant;
mod grid;

pub use approximant::{
    borel_pade_poles, EiSumApproximant, Evaluation, Jet, Strategy, DEFAULT_STOKES_MARGIN,
};
pub use grid::{residual_grid, GridField, GridPoint, GridPreset, GridSpec, DEFAULT_GRID_CAP};
