//! Physical parameters of the Gaussian ensemble and the series truncation
//! configuration.
//!
//! The cloud density is ρ(r) = ρ₀ exp(−r²/2σ⊥² − z²/2σ∥²) with lengths in
//! units of 1/k_S. Everything downstream is controlled by the derived
//! quantities
//!
//! * effective length      L  = √(2π) σ∥
//! * Fresnel number        F  = σ⊥²/L
//! * optical depth         d  = 6π ρ₀ L
//! * gain constant         λ₀ = (3π/2) ρ₀ Γ
//!
//! which satisfy λ₀ t L = d Γ t / 4 identically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry, density and rate parameters of the atomic ensemble.
///
/// Immutable once constructed; all derived quantities are recomputed from
/// the stored fields so they can never drift out of sync.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    /// Transverse Gaussian width σ⊥ (units of 1/k_S).
    pub sigma_perp: f64,
    /// Longitudinal Gaussian width σ∥ (units of 1/k_S).
    pub sigma_par: f64,
    /// Peak density ρ₀ (atoms per unit (1/k_S)³).
    pub rho0: f64,
    /// Single-atom scattering rate Γ (defaults to 1; times are Γt).
    pub gamma: f64,
}

/// A soft warning that the parameters leave the validity regime of the
/// underlying theory. These never abort a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegimeWarning {
    /// σ⊥ is not ≫ 1 (cloud width comparable to the wavelength).
    SigmaPerpNotLarge,
    /// σ⊥ is not ≪ σ∥ (cloud not cigar shaped).
    NotCigarShaped,
    /// σ⊥² is not > σ∥.
    SigmaPerpSqNotAboveSigmaPar,
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeWarning::SigmaPerpNotLarge => {
                write!(f, "validity regime 1 ≪ σ⊥ is marginal (σ⊥ < 3)")
            }
            RegimeWarning::NotCigarShaped => {
                write!(f, "validity regime σ⊥ ≪ σ∥ is marginal (σ∥ < 3 σ⊥)")
            }
            RegimeWarning::SigmaPerpSqNotAboveSigmaPar => {
                write!(f, "validity condition σ⊥² > σ∥ is violated")
            }
        }
    }
}

impl EnsembleParams {
    /// Create parameters from the raw widths, density and rate.
    pub fn new(sigma_perp: f64, sigma_par: f64, rho0: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [
            ("sigma_perp", sigma_perp),
            ("sigma_par", sigma_par),
            ("rho0", rho0),
            ("gamma", gamma),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            sigma_perp,
            sigma_par,
            rho0,
            gamma,
        })
    }

    /// Solve for the unique parameter set (with Γ = 1) that realizes a given
    /// Fresnel number, optical depth and total atom number.
    ///
    /// Closed form: L = 3N/(dF), ρ₀ = d/(6πL), σ∥ = L/√(2π), σ⊥ = √(FL).
    pub fn from_geometry(fresnel: f64, depth: f64, atoms: f64) -> Result<Self> {
        for (name, v) in [("fresnel", fresnel), ("depth", depth), ("atoms", atoms)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let length = 3.0 * atoms / (depth * fresnel);
        let rho0 = depth / (6.0 * std::f64::consts::PI * length);
        let sigma_par = length / (2.0 * std::f64::consts::PI).sqrt();
        let sigma_perp = (fresnel * length).sqrt();
        Self::new(sigma_perp, sigma_par, rho0, 1.0)
    }

    /// Effective length L = √(2π) σ∥.
    pub fn length(&self) -> f64 {
        (2.0 * std::f64::consts::PI).sqrt() * self.sigma_par
    }

    /// Fresnel number F = σ⊥²/L.
    pub fn fresnel(&self) -> f64 {
        self.sigma_perp * self.sigma_perp / self.length()
    }

    /// Optical depth d = 6π ρ₀ L.
    pub fn optical_depth(&self) -> f64 {
        6.0 * std::f64::consts::PI * self.rho0 * self.length()
    }

    /// Gain constant λ₀ = (3π/2) ρ₀ Γ.
    pub fn gain_constant(&self) -> f64 {
        1.5 * std::f64::consts::PI * self.rho0 * self.gamma
    }

    /// Total atom number N = ρ₀ (2π)^{3/2} σ⊥² σ∥ of the Gaussian cloud.
    pub fn atom_number(&self) -> f64 {
        self.rho0
            * (2.0 * std::f64::consts::PI).powf(1.5)
            * self.sigma_perp
            * self.sigma_perp
            * self.sigma_par
    }

    /// Soft validity-regime warnings. A factor is flagged when it is within
    /// 3× of its bound; the theory's own reference configuration
    /// (F = 4, d = 90, N = 6000) only marginally satisfies σ⊥ ≪ σ∥, which is
    /// why these are warnings and not errors.
    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut w = Vec::new();
        if self.sigma_perp < 3.0 {
            w.push(RegimeWarning::SigmaPerpNotLarge);
        }
        if self.sigma_par < 3.0 * self.sigma_perp {
            w.push(RegimeWarning::NotCigarShaped);
        }
        if self.sigma_perp * self.sigma_perp <= self.sigma_par {
            w.push(RegimeWarning::SigmaPerpSqNotAboveSigmaPar);
        }
        w
    }
}

/// Series cutoffs and quadrature configuration for the analytic mode sums.
///
/// The cutoffs are starting values: evaluators grow them geometrically until
/// two successive refinement levels agree to `rel_tol`, up to `max_levels`
/// enlargements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Highest azimuthal order |m| included in mode sums.
    pub m_max: usize,
    /// Cutoff for the l (and l') sums.
    pub l_max: usize,
    /// Cutoff for the q (and q') sums; the n-sums are bounded by q.
    pub q_max: usize,
    /// Cutoff for the k (and k') sums.
    pub k_max: usize,
    /// Gauss–Legendre node count on [0, 2F] (and on the auxiliary [0, 1]
    /// integral); doubled adaptively together with the cutoffs.
    pub quad_nodes: usize,
    /// Target relative tolerance for adaptive refinement.
    pub rel_tol: f64,
    /// Maximum number of refinement levels before reporting failure.
    pub max_levels: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            m_max: 8,
            l_max: 8,
            q_max: 6,
            k_max: 10,
            quad_nodes: 24,
            rel_tol: 1e-7,
            max_levels: 4,
        }
    }
}

impl Truncation {
    pub fn validate(&self) -> Result<()> {
        if self.quad_nodes < 2 {
            return Err(Error::InvalidParameter(format!(
                "quad_nodes must be ≥ 2, got {}",
                self.quad_nodes
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }

    /// The next refinement level: cutoffs grow by half, nodes double.
    pub(crate) fn refined(&self) -> Self {
        Self {
            m_max: self.m_max,
            l_max: self.l_max + self.l_max / 2 + 2,
            q_max: self.q_max + self.q_max / 2 + 2,
            k_max: self.k_max + self.k_max / 2 + 2,
            quad_nodes: self.quad_nodes * 2,
            rel_tol: self.rel_tol,
            max_levels: self.max_levels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_geometry() {
        // σ⊥=14.14, σ∥=19.95, ρ₀=0.0955 realizes F≈4, d≈90, L≈50.
        let p = EnsembleParams::new(14.14, 19.95, 0.0955, 1.0).unwrap();
        assert_relative_eq!(p.fresnel(), 4.0, max_relative = 1e-2);
        assert_relative_eq!(p.optical_depth(), 90.0, max_relative = 1e-2);
        assert_relative_eq!(p.length(), 50.0, max_relative = 1e-2);
    }

    #[test]
    fn from_geometry_reference() {
        let p = EnsembleParams::from_geometry(4.0, 90.0, 6000.0).unwrap();
        assert_relative_eq!(p.length(), 50.0, max_relative = 1e-12);
        assert_relative_eq!(p.sigma_par, 19.947114020071635, max_relative = 1e-12);
        assert_relative_eq!(p.sigma_perp, 14.142135623730951, max_relative = 1e-12);
        assert_relative_eq!(p.rho0, 0.09549296585513721, max_relative = 1e-12);
    }

    #[test]
    fn from_geometry_halving_atoms_doubles_density() {
        let a = EnsembleParams::from_geometry(4.0, 90.0, 6000.0).unwrap();
        let b = EnsembleParams::from_geometry(4.0, 90.0, 3000.0).unwrap();
        assert_relative_eq!(b.length(), 25.0, max_relative = 1e-12);
        assert_relative_eq!(b.rho0, 2.0 * a.rho0, max_relative = 1e-12);
    }

    #[test]
    fn geometry_round_trip() {
        for (f, d, n) in [(4.0, 90.0, 6000.0), (1.0, 160.0, 2500.0), (8.0, 30.0, 1e5)] {
            let p = EnsembleParams::from_geometry(f, d, n).unwrap();
            assert_relative_eq!(p.fresnel(), f, max_relative = 1e-12);
            assert_relative_eq!(p.optical_depth(), d, max_relative = 1e-12);
            assert_relative_eq!(p.atom_number(), n, max_relative = 1e-12);
        }
    }

    #[test]
    fn gain_identity() {
        // λ₀ t L = d Γ t / 4 exactly.
        let p = EnsembleParams::from_geometry(2.5, 77.0, 4321.0).unwrap();
        for t in [0.01, 0.5, 3.0] {
            assert_relative_eq!(
                p.gain_constant() * t * p.length(),
                p.optical_depth() * p.gamma * t / 4.0,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(EnsembleParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(EnsembleParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(EnsembleParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(EnsembleParams::from_geometry(4.0, 0.0, 100.0).is_err());
    }

    #[test]
    fn unit_cloud_fires_all_warnings() {
        let p = EnsembleParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let w = p.regime_warnings();
        assert!(w.contains(&RegimeWarning::SigmaPerpNotLarge));
        assert!(w.contains(&RegimeWarning::NotCigarShaped));
        assert!(w.contains(&RegimeWarning::SigmaPerpSqNotAboveSigmaPar));
    }

    #[test]
    fn reference_cloud_is_marginally_cigar() {
        // The reference configuration warns about σ⊥ ≪ σ∥ but nothing else.
        let p = EnsembleParams::from_geometry(4.0, 90.0, 6000.0).unwrap();
        let w = p.regime_warnings();
        assert_eq!(w, vec![RegimeWarning::NotCigarShaped]);
    }
}
