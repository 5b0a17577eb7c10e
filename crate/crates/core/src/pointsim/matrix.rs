//! The N×N complex symmetric interaction matrix.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::cloud::{separation, AtomCloud};
use super::propagator::scalar_propagator;
use crate::error::{Error, Result};

/// M̄: diagonal −Γ/2, off-diagonal (−3πiΓ)·scalar_propagator(r_j, r_j').
/// Exactly symmetric (the propagator depends on u and Δz² only), not
/// Hermitian.
#[derive(Debug, Clone)]
pub struct InteractionMatrix {
    pub entries: Array2<Complex64>,
    pub gamma: f64,
}

impl InteractionMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

/// Build M̄ from a sampled cloud.
pub fn interaction_matrix(cloud: &AtomCloud) -> Result<InteractionMatrix> {
    let n = cloud.len();
    let gamma = cloud.params.gamma;
    // guard: sampling enforces r_min, but clouds can be constructed by hand
    for i in 0..n {
        for j in 0..i {
            let sep = separation(&cloud.positions[i], &cloud.positions[j]);
            if sep < cloud.r_min {
                return Err(Error::CoincidentAtoms {
                    i,
                    j,
                    sep,
                    min_sep: cloud.r_min,
                });
            }
        }
    }
    let coupling = Complex64::new(0.0, -3.0 * std::f64::consts::PI * gamma);
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for (j, item) in row.iter_mut().enumerate() {
                *item = if i == j {
                    Complex64::new(-0.5 * gamma, 0.0)
                } else {
                    coupling * scalar_propagator(&cloud.positions[i], &cloud.positions[j])
                };
            }
            row
        })
        .collect();
    let mut entries = Array2::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            entries[(i, j)] = v;
        }
    }
    Ok(InteractionMatrix { entries, gamma })
}
