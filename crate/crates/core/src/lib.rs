//! Dual-engine numerical laboratory for three-dimensional stimulated Raman
//! scattering (superradiance) from a Gaussian, cigar-shaped atomic ensemble.
//!
//! Two independent engines compute the radiated Stokes light:
//!
//! * [`analytic`] evaluates the closed mode-sum expressions for the field
//!   correlation function and the radiated power, with the Fresnel number
//!   and the optical depth as the only control parameters.
//! * [`pointsim`] evolves a sampled cloud of discrete atoms through the
//!   complex symmetric interaction matrix and extracts the radiated power
//!   from a trace formula.
//!
//! The engines validate each other; [`modes`] holds the transverse-mode
//! (Gaussian-weighted Bessel Gram matrix) machinery together with its
//! consistency checks, and [`specfun`] provides the special functions and
//! quadrature rules everything else is built on.
//!
//! Conventions: lengths are measured in units of the inverse Stokes wave
//! number (k_S = 1) and rates in units of the single-atom scattering rate
//! (Γ = 1), so times are reported as Γt throughout.

pub mod analytic;
pub mod error;
pub mod modes;
pub mod params;
pub mod pointsim;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{EnsembleParams, Truncation};
