//! Error type shared by all engines.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid term index: {0}")]
    InvalidIndex(String),

    #[error("series truncation failed to converge: residual estimate {residual:.3e} after {levels} refinement levels (target {target:.3e})")]
    TruncationFailure {
        residual: f64,
        target: f64,
        levels: usize,
    },

    #[error("quadrature failed to converge: {context} (last change {residual:.3e}, target {target:.3e})")]
    QuadratureFailure {
        context: String,
        residual: f64,
        target: f64,
    },

    #[error("matrices do not commute: relative commutator residual {residual:.3e} exceeds {threshold:.3e}")]
    NonCommutingInput { residual: f64, threshold: f64 },

    #[error("atoms {i} and {j} are closer than the minimum separation ({sep:.3e} < {min_sep:.3e})")]
    CoincidentAtoms {
        i: usize,
        j: usize,
        sep: f64,
        min_sep: f64,
    },

    #[error("resampling budget exhausted: {remaining} close pairs left after {rounds} rounds (r_min = {r_min})")]
    SamplingFailed {
        remaining: usize,
        rounds: usize,
        r_min: f64,
    },

    #[error("matrix exponential failed accuracy certification: relative deviation {deviation:.3e}")]
    EvolutionFailed { deviation: f64 },

    #[error("no crossover found in bracket Γt ∈ [{lo}, {hi}]: SRS never exceeds the spontaneous baseline")]
    NoCrossover { lo: f64, hi: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),
}
