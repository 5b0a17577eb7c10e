//! Special functions and quadrature primitives.
//!
//! Everything here is pure and thread-safe. Modified Bessel functions are
//! only exposed in exponentially scaled form, e^{−x} I_m(x); callers combine
//! the exponents analytically so that nothing overflows.

mod bessel;
mod identities;
mod quad;

pub use bessel::{bessel_i_scaled, bessel_j, bessel_zero, bessel_zeros};
pub use identities::{gauss_bessel_identity, sommerfeld_check, SommerfeldSides};
pub use quad::{gauss_legendre, integrate, QuadratureRule};
