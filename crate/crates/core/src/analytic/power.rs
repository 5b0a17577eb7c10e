//! Total radiated power of the superradiant beam and the closed-form
//! comparison expressions, all in photons per unit Γt.

use std::collections::BTreeMap;

use super::correlation::u_nodes;
use super::engine::SeriesTables;
use super::types::PowerPoint;
use crate::error::{Error, Result};
use crate::params::{EnsembleParams, Truncation};
use crate::specfun::{bessel_i_scaled, gauss_legendre};

/// P_m(t) for one azimuthal order, with adaptive refinement.
/// Returns (value, residual estimate).
fn power_m(params: &EnsembleParams, trunc: &Truncation, t: f64, m: usize) -> Result<(f64, f64)> {
    trunc.validate()?;
    let fresnel = params.fresnel();
    let depth = params.optical_depth();
    let d_gamma_t = depth * params.gamma * t;
    let prefactor = depth * params.gamma * (-params.gamma * t).exp() / 8.0;

    let mut level = *trunc;
    let mut prev: Option<f64> = None;
    for _ in 0..=trunc.max_levels {
        let tables = SeriesTables::build(
            m,
            fresnel,
            d_gamma_t,
            &level,
            level.quad_nodes,
            u_nodes(&level),
            false,
        );
        let v = tables.power_reduced().re;
        if let Some(p) = prev {
            let change = (v - p).abs();
            if change <= trunc.rel_tol * v.abs().max(1e-300) {
                return Ok((prefactor * v, prefactor * change));
            }
        }
        prev = Some(v);
        level = level.refined();
    }
    Err(Error::TruncationFailure {
        residual: prev.unwrap_or(f64::NAN),
        target: trunc.rel_tol,
        levels: trunc.max_levels,
    })
}

/// Per-mode radiated power P_m(t) for the requested signed m values
/// (P_{−m} = P_m is computed once).
pub fn total_power(
    params: &EnsembleParams,
    trunc: &Truncation,
    t: f64,
    m_list: &[i32],
) -> Result<PowerPoint> {
    let mut cache: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    let mut per_m = BTreeMap::new();
    let mut residual = 0.0;
    for &m in m_list {
        let mu = m.unsigned_abs() as usize;
        let (v, r) = match cache.get(&mu) {
            Some(&vr) => vr,
            None => {
                let vr = power_m(params, trunc, t, mu)?;
                cache.insert(mu, vr);
                vr
            }
        };
        per_m.insert(m, v);
        residual += r;
    }
    Ok(PowerPoint {
        time: t,
        per_m,
        residual,
    })
}

/// All-m total with the mode list grown until the next mode contributes
/// less than `rel_tol` of the running sum. Returns the PowerPoint holding
/// every included signed mode.
pub fn total_power_all_m(
    params: &EnsembleParams,
    trunc: &Truncation,
    t: f64,
) -> Result<PowerPoint> {
    let mut per_m = BTreeMap::new();
    let mut residual = 0.0;
    let (p0, r0) = power_m(params, trunc, t, 0)?;
    per_m.insert(0, p0);
    residual += r0;
    let mut total = p0;
    for m in 1..=trunc.m_max.max(1) as i32 {
        let (pm, rm) = power_m(params, trunc, t, m as usize)?;
        per_m.insert(m, pm);
        per_m.insert(-m, pm);
        residual += 2.0 * rm;
        total += 2.0 * pm;
        if pm.abs() <= trunc.rel_tol * total.abs() {
            break;
        }
    }
    Ok(PowerPoint {
        time: t,
        per_m,
        residual,
    })
}

/// Single-transverse-mode Raymer–Mostowski power
/// (dΓ e^{−Γt}/4)(I₀²(√(dΓt)) − I₁²(√(dΓt))).
pub fn rm_mode_power(depth: f64, t: f64) -> f64 {
    let s = (depth * t).max(0.0).sqrt();
    let i0 = bessel_i_scaled(0, s);
    let i1 = bessel_i_scaled(1, s);
    0.25 * depth * (-t).exp() * (2.0 * s).exp() * (i0 * i0 - i1 * i1)
}

/// The小 geometry-free approximation
/// P₀ = (dΓ e^{−Γt}/4)(3/2 − 2e^{−F} + e^{−2F}/2)(I₀² − I₁²).
pub fn power_p0(params: &EnsembleParams, t: f64) -> f64 {
    let fresnel = params.fresnel();
    let shape = 1.5 - 2.0 * (-fresnel).exp() + 0.5 * (-2.0 * fresnel).exp();
    shape * rm_mode_power(params.optical_depth(), params.gamma * t)
}

/// Lowest-order finite-size power
///
/// P₁ = (dΓ e^{−Γt}/8) Σ_m Σ_{kk'} ∫₀^{2F} dy e^{−y/(1+k+k')} I_m(y/(1+k+k'))
///      (dΓt/4)^{k+k'} / (k!² k'!² (1+k+k')²),
///
/// the m-sum running over all signed m.
pub fn power_p1(params: &EnsembleParams, trunc: &Truncation, t: f64) -> Result<f64> {
    trunc.validate()?;
    let fresnel = params.fresnel();
    let depth = params.optical_depth();
    let x = 0.25 * depth * params.gamma * t;

    let mut m_max = trunc.m_max.max(2);
    let mut k_max = trunc.k_max.max(6);
    let mut nodes = trunc.quad_nodes;
    let mut prev: Option<f64> = None;
    for _ in 0..=trunc.max_levels {
        let (ys, wy) = gauss_legendre(nodes).mapped(0.0, 2.0 * fresnel);
        let mut sum: f64 = 0.0;
        for k in 0..=k_max {
            for kp in 0..=k_max {
                let dm = (1 + k + kp) as f64;
                let mut tf = 1.0;
                for j in 1..=k {
                    tf *= x / (j * j) as f64;
                }
                for j in 1..=kp {
                    tf *= x / (j * j) as f64;
                }
                if tf / (dm * dm) < 1e-18 * sum.abs().max(1.0) {
                    continue;
                }
                let mut kernel = 0.0;
                for (y, w) in ys.iter().zip(&wy) {
                    // e^{−y/dm} I_m(y/dm) is exactly the scaled Bessel
                    let mut msum = bessel_i_scaled(0, y / dm);
                    for m in 1..=m_max {
                        msum += 2.0 * bessel_i_scaled(m, y / dm);
                    }
                    kernel += w * msum;
                }
                sum += kernel * tf / (dm * dm);
            }
        }
        if let Some(p) = prev {
            if (sum - p).abs() <= trunc.rel_tol * sum.abs().max(1e-300) {
                return Ok(0.125 * depth * params.gamma * (-params.gamma * t).exp() * sum);
            }
        }
        prev = Some(sum);
        m_max += m_max / 2 + 2;
        k_max += k_max / 2 + 2;
        nodes *= 2;
    }
    Err(Error::TruncationFailure {
        residual: prev.unwrap_or(f64::NAN),
        target: trunc.rel_tol,
        levels: trunc.max_levels,
    })
}

/// Small-Fresnel reduction of P₁ (valid for F ≪ 1/2 + dΓt/8):
/// (F dΓ e^{−Γt}/4)(I₀² − 2I₁² + I₀I₂) at √(dΓt).
pub fn power_p1_small_f(params: &EnsembleParams, t: f64) -> f64 {
    let depth = params.optical_depth();
    let s = (depth * params.gamma * t).max(0.0).sqrt();
    let i0 = bessel_i_scaled(0, s);
    let i1 = bessel_i_scaled(1, s);
    let i2 = bessel_i_scaled(2, s);
    0.25 * params.fresnel()
        * depth
        * params.gamma
        * (-params.gamma * t).exp()
        * (2.0 * s).exp()
        * (i0 * i0 - 2.0 * i1 * i1 + i0 * i2)
}

/// N_P(t) = ∫₀^t P(t') dt' with the full mode sum, by Gauss–Legendre in
/// time with order doubling.
pub fn photon_count(params: &EnsembleParams, trunc: &Truncation, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut order = 12;
    let mut prev: Option<f64> = None;
    for _ in 0..3 {
        let (ts, ws) = gauss_legendre(order).mapped(0.0, t);
        let mut acc = 0.0;
        for (tp, w) in ts.iter().zip(&ws) {
            acc += w * total_power_all_m(params, trunc, *tp)?.total();
        }
        if let Some(p) = prev {
            if (acc - p).abs() <= 10.0 * trunc.rel_tol * acc.abs() {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        order *= 2;
    }
    Ok(prev.unwrap())
}

/// N_P(t) with P ≈ P₁ in the integrand.
pub fn photon_count_p1(params: &EnsembleParams, trunc: &Truncation, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut order = 16;
    let mut prev: Option<f64> = None;
    for _ in 0..4 {
        let (ts, ws) = gauss_legendre(order).mapped(0.0, t);
        let mut acc = 0.0;
        for (tp, w) in ts.iter().zip(&ws) {
            acc += w * power_p1(params, trunc, *tp)?;
        }
        if let Some(p) = prev {
            if (acc - p).abs() <= 10.0 * trunc.rel_tol * acc.abs() {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        order *= 2;
    }
    Ok(prev.unwrap())
}

/// Closed-form photon count in the d, N ≫ 1 limit (and Γt ≪ 1, so the
/// e^{−Γt} decay is dropped):
///
/// 2N_P/F = dΓt [I₀² − 2I₁² + I₀I₂] − I₀², all at √(dΓt).
///
/// At t = 0 this is −F/2: the approximation drops a constant, so small
/// times are outside its validity.
pub fn photon_count_asymptotic(params: &EnsembleParams, t: f64) -> f64 {
    let x = params.optical_depth() * params.gamma * t;
    let s = x.max(0.0).sqrt();
    let i0 = bessel_i_scaled(0, s);
    let i1 = bessel_i_scaled(1, s);
    let i2 = bessel_i_scaled(2, s);
    let e2s = (2.0 * s).exp();
    0.5 * params.fresnel() * e2s * (x * (i0 * i0 - 2.0 * i1 * i1 + i0 * i2) - i0 * i0)
}

/// Depletion time: the Γt at which the asymptotic photon count reaches the
/// cloud's atom number. Bracketed bisection on Γt ∈ (0, 50].
pub fn depletion_time(params: &EnsembleParams) -> Result<f64> {
    let n_atoms = params.atom_number();
    let f = |t: f64| photon_count_asymptotic(params, t) - n_atoms;
    let mut lo = 1e-9;
    let mut hi = 1e-3;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 50.0 {
            return Err(Error::RootFinding(format!(
                "photon count never reaches N = {n_atoms} for Γt ≤ 50"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params_fd(fresnel: f64, depth: f64) -> EnsembleParams {
        let length = 50.0;
        EnsembleParams::new(
            (fresnel * length).sqrt(),
            length / (2.0 * std::f64::consts::PI).sqrt(),
            depth / (6.0 * std::f64::consts::PI * length),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn rm_power_at_zero() {
        assert_relative_eq!(rm_mode_power(160.0, 0.0), 40.0, max_relative = 1e-14);
    }

    #[test]
    fn rm_power_rises_then_decays() {
        // monotone increasing before the e^{−Γt} factor dominates
        let d = 20.0;
        let times = [0.05, 0.1, 0.2, 0.4];
        let mut prev = rm_mode_power(d, 0.01);
        for &t in &times {
            let v = rm_mode_power(d, t);
            assert!(v > prev);
            prev = v;
        }
        assert!(rm_mode_power(d, 40.0) < rm_mode_power(d, 20.0));
    }

    #[test]
    fn rm_power_matches_asymptotic_growth() {
        // (I₀² − I₁²)(s) → e^{2s}/(2πs²)·(1 + O(1/s)): the ratio of the
        // closed form to the asymptotic stabilizes at large dΓt
        let d = 1.0;
        let ratio = |t: f64| {
            let s = t.sqrt();
            let asym = (2.0 * s).exp() / (2.0 * std::f64::consts::PI * s * s);
            rm_mode_power(d, t) / (0.25 * (-t).exp() * asym)
        };
        let r1 = ratio(400.0);
        let r2 = ratio(1600.0);
        assert!((r1 - 1.0).abs() < 0.1);
        assert!((r2 - 1.0).abs() < (r1 - 1.0).abs());
    }

    #[test]
    fn p0_shape_factor_exact() {
        // P₀ / rm_mode_power ≡ (3/2 − 2e^{−F} + e^{−2F}/2) for all t
        let p = params_fd(1.0, 70.0);
        let shape = 1.5 - 2.0 * (-1.0_f64).exp() + 0.5 * (-2.0_f64).exp();
        for t in [0.0, 0.05, 0.3, 1.0] {
            let ratio = power_p0(&p, t) / rm_mode_power(70.0, t);
            assert_relative_eq!(ratio, shape, max_relative = 1e-14);
        }
        // F=1, t=0 value
        assert_relative_eq!(
            power_p0(&p, 0.0),
            70.0 / 4.0 * 0.8319117443217641,
            max_relative = 1e-12
        );
    }

    #[test]
    fn p0_large_fresnel_limit() {
        let p = params_fd(60.0, 40.0);
        assert_relative_eq!(power_p0(&p, 0.0), 40.0 / 4.0 * 1.5, max_relative = 1e-12);
    }

    #[test]
    fn p1_small_f_agreement() {
        // F = 0.25, dΓt = 20: |P₁ − P₁_smallF|/P₁ < 5%
        let depth = 80.0;
        let p = params_fd(0.25, depth);
        let t = 20.0 / depth;
        let tr = Truncation {
            rel_tol: 1e-8,
            ..Truncation::default()
        };
        let full = power_p1(&p, &tr, t).unwrap();
        let small = power_p1_small_f(&p, t);
        assert!(
            (full - small).abs() / full < 0.05,
            "P1 {full} vs smallF {small}"
        );
    }

    #[test]
    fn photon_count_asymptotic_at_zero() {
        let p = params_fd(4.0, 90.0);
        assert_relative_eq!(
            photon_count_asymptotic(&p, 0.0),
            -p.fresnel() / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn depletion_time_reference() {
        // F=4, d=90, N=6000 → Γt_c ≈ 0.54
        let p = EnsembleParams::from_geometry(4.0, 90.0, 6000.0).unwrap();
        let tc = depletion_time(&p).unwrap();
        assert!((tc - 0.54).abs() <= 0.05, "Γt_c = {tc}");
    }

    #[test]
    fn depletion_unreachable_errors() {
        // absurd atom number at tiny depth: the count never reaches N
        let p = EnsembleParams::from_geometry(0.5, 0.05, 1e9).unwrap();
        assert!(depletion_time(&p).is_err());
    }

    #[test]
    fn photon_count_p1_matches_asymptotic_at_large_gain() {
        // with d large, Γt stays ≪ 1 at dΓt = 30 and the closed form holds
        let depth = 3000.0;
        let p = params_fd(1.0, depth);
        let tr = Truncation {
            rel_tol: 1e-7,
            ..Truncation::default()
        };
        let t = 30.0 / depth;
        let quad = photon_count_p1(&p, &tr, t).unwrap();
        let asym = photon_count_asymptotic(&p, t);
        assert!(
            (quad - asym).abs() / quad.abs() < 0.02,
            "quad {quad} vs asym {asym}"
        );
    }
}
