//! Poles of the tritronquée solution of y″ = 6y² − z.
//!
//! The resummed h gives y and y′ at a seed point z₀ through
//! y = −√(z/6)(1 + h(x)), x = (24z)^{5/4}/30. The Taylor series of y about z₀
//! follows from the equation, and a Padé approximant of that series places
//! the poles.

#![forbid(unsafe_code)]

mod locate;
mod seed;

pub use locate::{locate_poles, Classification, PoleConfig, PoleReport, DEFAULT_Z_ORDER, DEFAULT_Z_PRECISION};
pub use seed::{seed_from_approximant, taylor_coefficients, x_of_z, TaylorSeed};
