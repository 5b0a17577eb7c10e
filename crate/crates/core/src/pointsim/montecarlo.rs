//! Monte Carlo over position realizations.

use super::cloud::sample_cloud;
use super::evolve::Evolution;
use super::matrix::interaction_matrix;
use crate::error::Result;
use crate::params::EnsembleParams;

/// Settings for a Monte Carlo run.
#[derive(Debug, Clone)]
pub struct McSettings {
    pub fresnel: f64,
    pub depth: f64,
    pub atoms: usize,
    pub realizations: usize,
    pub base_seed: u64,
    pub r_min: f64,
}

/// Mean ± standard-error power curve, with per-realization data retained
/// for re-aggregation.
#[derive(Debug, Clone)]
pub struct McCurve {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// P_N(t) per surviving realization, indexed [realization][time].
    pub per_realization: Vec<Vec<f64>>,
    /// Seeds of the surviving realizations, in order.
    pub seeds: Vec<u64>,
    /// (realization index, error text) for realizations that failed and
    /// were excluded.
    pub failures: Vec<(usize, String)>,
    /// Total resampled atoms across realizations (minimum-separation
    /// enforcement).
    pub resampled: usize,
}

fn derived_seed(base: u64, index: usize) -> u64 {
    // splitmix-style stream derivation
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run the point-particle engine over `realizations` clouds drawn with
/// seeds derived from `base_seed`; deterministic for fixed settings.
/// Realizations run sequentially (the dense linear algebra inside is the
/// parallel resource); failures are excluded and reported.
pub fn monte_carlo(settings: &McSettings, t_grid: &[f64]) -> Result<McCurve> {
    let params =
        EnsembleParams::from_geometry(settings.fresnel, settings.depth, settings.atoms as f64)?;
    let t_max = t_grid.iter().cloned().fold(0.0, f64::max).max(1e-6);

    let mut per_realization = Vec::new();
    let mut seeds = Vec::new();
    let mut failures = Vec::new();
    let mut resampled = 0;
    for idx in 0..settings.realizations {
        let seed = derived_seed(settings.base_seed, idx);
        let run = || -> Result<(Vec<f64>, usize)> {
            let cloud = sample_cloud(&params, settings.atoms, seed, settings.r_min)?;
            let n_resampled = cloud.resampled;
            let matrix = interaction_matrix(&cloud)?;
            let ev = Evolution::new(&matrix, t_max)?;
            Ok((t_grid.iter().map(|&t| ev.power(t)).collect(), n_resampled))
        };
        match run() {
            Ok((curve, n_res)) => {
                per_realization.push(curve);
                seeds.push(seed);
                resampled += n_res;
            }
            Err(e) => {
                log::warn!("realization {idx} failed and is excluded: {e}");
                failures.push((idx, e.to_string()));
            }
        }
    }

    let n_ok = per_realization.len();
    let nt = t_grid.len();
    let mut mean = vec![0.0; nt];
    let mut stderr = vec![0.0; nt];
    if n_ok > 0 {
        for curve in &per_realization {
            for (m, v) in mean.iter_mut().zip(curve) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n_ok as f64;
        }
        if n_ok > 1 {
            for curve in &per_realization {
                for ((s, v), m) in stderr.iter_mut().zip(curve).zip(&mean) {
                    *s += (v - m) * (v - m);
                }
            }
            for s in &mut stderr {
                *s = (*s / (n_ok - 1) as f64).sqrt() / (n_ok as f64).sqrt();
            }
        }
    }
    Ok(McCurve {
        times: t_grid.to_vec(),
        mean,
        stderr,
        per_realization,
        seeds,
        failures,
        resampled,
    })
}
