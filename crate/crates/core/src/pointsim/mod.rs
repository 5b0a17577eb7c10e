//! The direct point-particle engine.
//!
//! A sampled cloud of N atoms evolves through the complex symmetric
//! interaction matrix M̄ (diagonal −Γ/2, off-diagonal from the scalar
//! projection of the dipole propagator). The radiated power comes from the
//! trace formula P_N(t) = Re tr[(Γ𝟙 + M̄) C(t)] with C(t) = e^{M̄t}(e^{M̄t})†,
//! normalized by the factor ½ that counts emission from one end of the
//! ensemble. Monte Carlo over position realizations gives mean and
//! standard-error curves.

mod cloud;
mod evolve;
mod matrix;
mod montecarlo;
mod propagator;

pub use cloud::{sample_cloud, AtomCloud, DEFAULT_R_MIN};
pub use evolve::{evolve, Covariance, Evolution};
pub use matrix::{interaction_matrix, InteractionMatrix};
pub use montecarlo::{monte_carlo, McCurve, McSettings};
pub use propagator::scalar_propagator;
