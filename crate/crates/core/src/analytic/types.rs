//! Value types produced by the analytic engine.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One term of the mode sum: the summation indices of the unprimed and
/// primed branches. The n-sums are bounded by q (n ≤ q, n' ≤ q').
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermIndex {
    pub l: usize,
    pub q: usize,
    pub k: usize,
    pub n: usize,
    pub lp: usize,
    pub qp: usize,
    pub kp: usize,
    pub np: usize,
}

impl TermIndex {
    /// All indices zero except the listed unprimed ones.
    pub fn unprimed(l: usize, q: usize, k: usize, n: usize) -> Self {
        Self {
            l,
            q,
            k,
            n,
            lp: 0,
            qp: 0,
            kp: 0,
            np: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > self.q || self.np > self.qp {
            return Err(Error::InvalidIndex(format!(
                "n ≤ q and n' ≤ q' required, got n={} q={} n'={} q'={}",
                self.n, self.q, self.np, self.qp
            )));
        }
        Ok(())
    }

    /// The kernel denominator D = 2 + 2(k+k') + q + q' + n + n'.
    pub fn kernel_denominator(&self) -> usize {
        2 + 2 * (self.k + self.kp) + self.q + self.qp + self.n + self.np
    }
}

/// Radial intensity data for one azimuthal order at a fixed time.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    /// Γt of the snapshot.
    pub time: f64,
    /// Azimuthal order |m|.
    pub m: usize,
    pub samples: Vec<RadialSample>,
    /// Truncation residual estimate attached to the intensities.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RadialSample {
    /// Detection radius in units of σ⊥.
    pub r_over_sigma: f64,
    /// C_m(r, r, t) — photons per unit area and time, φ-integrated.
    pub intensity: f64,
    /// r·C_m(r, r, t), the quantity whose radial integral is P_m(t).
    pub power_density: f64,
}

/// Per-mode total power at one time.
#[derive(Debug, Clone)]
pub struct PowerPoint {
    /// Γt.
    pub time: f64,
    /// P_m(t) keyed by signed m (P_{−m} = P_m).
    pub per_m: BTreeMap<i32, f64>,
    /// Truncation residual estimate for the total.
    pub residual: f64,
}

impl PowerPoint {
    /// Σ_m P_m over the stored modes.
    pub fn total(&self) -> f64 {
        self.per_m.values().sum()
    }
}

/// A tabulated power curve.
#[derive(Debug, Clone)]
pub struct PowerCurve {
    pub points: Vec<PowerPoint>,
}
