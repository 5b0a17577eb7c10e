//! Crossover from spontaneous emission to superradiance on the axis.

use super::correlation::on_axis_srs;
use super::spontaneous::spontaneous_on_axis;
use crate::error::{Error, Result};
use crate::params::{EnsembleParams, Truncation};

/// Γτ_c at which the on-axis SRS intensity first exceeds the (time
/// independent) spontaneous baseline, by bracketed bisection in dΓt.
///
/// The SRS side carries its e^{−Γt} factor and the baseline has none,
/// exactly as the two closed forms are stated. Because both sides scale
/// with λ₀, the root in x = dΓt depends on d only through the e^{−x/d}
/// decay, so τ_c·dΓ is nearly d-invariant.
pub fn crossover_time(params: &EnsembleParams, trunc: &Truncation) -> Result<f64> {
    let baseline = spontaneous_on_axis(params);
    let depth = params.optical_depth();
    let gamma = params.gamma;
    let srs = |x: f64| -> Result<f64> {
        let t = x / (depth * gamma);
        on_axis_srs(params, trunc, t)
    };

    // geometric bracket scan in x = dΓt
    let budget = 256.0;
    let mut lo = 0.25;
    let mut flo = srs(lo)? - baseline;
    if flo > 0.0 {
        // already superradiant at the smallest resolvable time
        return Ok(lo / (depth * gamma));
    }
    let mut hi = lo;
    let mut fhi = flo;
    while fhi <= 0.0 {
        hi *= 2.0;
        if hi > budget {
            return Err(Error::NoCrossover {
                lo: lo / (depth * gamma),
                hi: budget / (depth * gamma),
            });
        }
        fhi = srs(hi)? - baseline;
        if fhi <= 0.0 {
            lo = hi;
            flo = fhi;
        }
    }
    let _ = flo;
    // bisection to ~1e-6 relative in x
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let fm = srs(mid)? - baseline;
        if fm <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-6 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi) / (depth * gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_fdl(fresnel: f64, depth: f64, length: f64) -> EnsembleParams {
        EnsembleParams::new(
            (fresnel * length).sqrt(),
            length / (2.0 * std::f64::consts::PI).sqrt(),
            depth / (6.0 * std::f64::consts::PI * length),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn crossover_d_doubling_invariance() {
        // τ_c·dΓ moves by less than 1e-3 relative when d doubles at fixed
        // F and L (deep optical depth so the e^{−Γt} correction is tiny)
        let tr = Truncation {
            rel_tol: 1e-8,
            ..Truncation::default()
        };
        let a = params_fdl(4.0, 4000.0, 300.0);
        let b = params_fdl(4.0, 8000.0, 300.0);
        let xa = crossover_time(&a, &tr).unwrap() * 4000.0;
        let xb = crossover_time(&b, &tr).unwrap() * 8000.0;
        assert!(
            (xa - xb).abs() / xa < 1e-3,
            "τ_c·dΓ: {xa} vs {xb} (rel {})",
            (xa - xb).abs() / xa
        );
    }

    #[test]
    fn no_crossover_at_negligible_depth() {
        let tr = Truncation::default();
        let p = params_fdl(4.0, 2.0, 300.0);
        match crossover_time(&p, &tr) {
            Err(Error::NoCrossover { .. }) => {}
            other => panic!("expected NoCrossover, got {other:?}"),
        }
    }
}
