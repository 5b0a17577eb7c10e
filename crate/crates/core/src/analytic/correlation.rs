//! The correlation function C_m(r, r', t) and its radial/on-axis views.

use ndarray::Array2;
use num_complex::Complex64;

use super::engine::SeriesTables;
use super::types::{RadialProfile, RadialSample};
use crate::error::{Error, Result};
use crate::params::{EnsembleParams, Truncation};
use crate::specfun::bessel_j;

/// Reusable evaluator for one (params, t, m): builds the series tables and
/// the y-space weight matrix once, after which each (r, r') evaluation is a
/// cheap bilinear contraction.
pub struct CorrelationEvaluator {
    m: usize,
    sigma_perp: f64,
    /// λ₀ e^{−Γt} / (4F)
    prefactor: f64,
    ys: Vec<f64>,
    wy: Vec<f64>,
    weight: Array2<Complex64>,
    /// Truncation residual estimate on the integrated intensity.
    pub residual: f64,
}

impl CorrelationEvaluator {
    /// Adaptive build: refines cutoffs/nodes until the radially integrated
    /// intensity changes by less than `trunc.rel_tol`. `r_max_hint` (in
    /// units of σ⊥) sizes the y-quadrature so that the Bessel oscillation
    /// at the largest radius is resolved.
    pub fn build(
        params: &EnsembleParams,
        trunc: &Truncation,
        t: f64,
        m: usize,
        r_max_hint: f64,
    ) -> Result<Self> {
        trunc.validate()?;
        let fresnel = params.fresnel();
        let d_gamma_t = params.optical_depth() * params.gamma * t;
        let prefactor = params.gain_constant() * (-params.gamma * t).exp() / (4.0 * fresnel);

        let osc_nodes = (0.45 * r_max_hint * (2.0 * fresnel).sqrt()) as usize + 8;
        let mut level = *trunc;
        let mut prev: Option<(f64, SeriesTables, Array2<Complex64>)> = None;
        for _ in 0..=trunc.max_levels {
            let ny = level.quad_nodes.max(osc_nodes);
            let nu = u_nodes(&level);
            let tables = SeriesTables::build(m, fresnel, d_gamma_t, &level, ny, nu, false);
            let weight = tables.correlation_matrix();
            // integrated intensity as the convergence scalar
            let probe: Complex64 = (0..ny)
                .map(|i| tables.wy[i] * weight[(i, i)])
                .fold(Complex64::new(0.0, 0.0), |a, b| a + b);
            let probe = probe.norm();
            if let Some((p, tb, wm)) = prev {
                let change = (probe - p).abs();
                if change <= trunc.rel_tol * probe.max(1e-300) {
                    // converged at the PREVIOUS level already; keep the finer one
                    let _ = (tb, wm);
                    return Ok(Self {
                        m,
                        sigma_perp: params.sigma_perp,
                        prefactor,
                        ys: tables.ys,
                        wy: tables.wy,
                        weight,
                        residual: change * prefactor,
                    });
                }
            }
            prev = Some((probe, tables, weight));
            level = level.refined();
        }
        let probe = prev.map(|(p, _, _)| p).unwrap_or(f64::NAN);
        Err(Error::TruncationFailure {
            residual: probe,
            target: trunc.rel_tol,
            levels: trunc.max_levels,
        })
    }

    /// C_m(r, r', t) for radii in units of 1/k_S.
    pub fn eval(&self, r: f64, r_prime: f64) -> Complex64 {
        let ja: Vec<f64> = self
            .ys
            .iter()
            .map(|&y| bessel_j(self.m, y.sqrt() * r / self.sigma_perp))
            .collect();
        let jb: Vec<f64> = if r_prime == r {
            ja.clone()
        } else {
            self.ys
                .iter()
                .map(|&y| bessel_j(self.m, y.sqrt() * r_prime / self.sigma_perp))
                .collect()
        };
        let n = self.ys.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let wi = self.wy[i] * ja[i];
            if wi == 0.0 {
                continue;
            }
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.wy[j] * jb[j] * self.weight[(i, j)];
            }
            acc += wi * row;
        }
        acc * self.prefactor
    }

    /// σ⊥² ∫₀^{r_max} x C_m(xσ⊥, xσ⊥, t) dx with the tail oscillation
    /// averaged over one period — the radial contraction that must equal
    /// P_m(t).
    pub fn contracted_power(&self, r_max_over_sigma: f64) -> f64 {
        let fresnel_like = self.ys.last().copied().unwrap_or(1.0); // 2F
        let period = std::f64::consts::PI / fresnel_like.sqrt();
        let body = self.integrate_diag(0.0, r_max_over_sigma);
        // average I(R) over R ∈ [r_max, r_max + period] (8 sub-steps)
        let steps = 8;
        let h = period / steps as f64;
        let mut partials = vec![body];
        let mut acc = body;
        for s in 0..steps {
            let a = r_max_over_sigma + s as f64 * h;
            acc += self.integrate_diag(a, a + h);
            partials.push(acc);
        }
        // trapezoid average of the cumulative integral over the period
        let mut avg = 0.5 * (partials[0] + partials[steps]);
        for p in partials.iter().take(steps).skip(1) {
            avg += p;
        }
        avg /= steps as f64;
        avg * self.sigma_perp * self.sigma_perp
    }

    fn integrate_diag(&self, a: f64, b: f64) -> f64 {
        let rule = crate::specfun::gauss_legendre(8);
        // panel per oscillation of J²
        let freq = (2.0 * self.ys.last().copied().unwrap_or(1.0)).sqrt();
        let panels = (((b - a) * freq / std::f64::consts::PI).ceil() as usize).max(2);
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            acc += rule.integrate(lo, lo + h, |x| {
                x * self.eval(x * self.sigma_perp, x * self.sigma_perp).re
            });
        }
        acc
    }
}

pub(crate) fn u_nodes(trunc: &Truncation) -> usize {
    // the u-integrand is a polynomial of degree ≤ 2(k+l+3q); this node count
    // integrates it exactly
    trunc.k_max + trunc.l_max + 3 * trunc.q_max + 2
}

/// C_m(r, r', t): the m-th azimuthal component of the Stokes correlation
/// function (photons per unit area and time, φ-integrated; k_S = 1).
pub fn correlation(
    params: &EnsembleParams,
    trunc: &Truncation,
    r: f64,
    r_prime: f64,
    t: f64,
    m: usize,
) -> Result<Complex64> {
    let hint = (r.max(r_prime) / params.sigma_perp).max(1.0);
    let ev = CorrelationEvaluator::build(params, trunc, t, m, hint)?;
    Ok(ev.eval(r, r_prime))
}

/// On-axis SRS intensity C(0, 0, t); only m = 0 survives at r = 0.
pub fn on_axis_srs(params: &EnsembleParams, trunc: &Truncation, t: f64) -> Result<f64> {
    let ev = CorrelationEvaluator::build(params, trunc, t, 0, 0.5)?;
    Ok(ev.eval(0.0, 0.0).re)
}

/// Radial intensity and power-density profiles at one time for a set of
/// azimuthal orders. `r_grid` is in units of σ⊥ and must be non-negative
/// and increasing. Negative-from-truncation intensities are stored as-is,
/// with the residual estimate alongside.
pub fn radial_profile(
    params: &EnsembleParams,
    trunc: &Truncation,
    t: f64,
    m_list: &[usize],
    r_grid: &[f64],
) -> Result<Vec<RadialProfile>> {
    if r_grid.windows(2).any(|w| w[1] <= w[0]) || r_grid.first().is_some_and(|&r| r < 0.0) {
        return Err(Error::InvalidParameter(
            "r_grid must be non-negative and strictly increasing".into(),
        ));
    }
    let r_max = r_grid.last().copied().unwrap_or(1.0).max(1.0);
    let mut out = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let ev = CorrelationEvaluator::build(params, trunc, t, m, r_max)?;
        let samples = r_grid
            .iter()
            .map(|&x| {
                let c = ev.eval(x * params.sigma_perp, x * params.sigma_perp).re;
                RadialSample {
                    r_over_sigma: x,
                    intensity: c,
                    // σ⊥² ∫ power_density d(r/σ⊥) = P_m(t)
                    power_density: x * c,
                }
            })
            .collect();
        out.push(RadialProfile {
            time: t,
            m,
            samples,
            residual: ev.residual,
        });
    }
    Ok(out)
}
