//! Two closed-form integral identities used as validation oracles.

use num_complex::Complex64;

use super::{bessel_i_scaled, bessel_j, gauss_legendre};
use crate::error::{Error, Result};

/// Closed form of the Weber–Schafheitlin-type integral
///
/// ∫₀^∞ r e^{−α²r²} J_m(βr) J_m(γr) dr
///   = 1/(2α²) · e^{−(β²+γ²)/4α²} · I_m(βγ/2α²)
///
/// evaluated through the scaled I_m so that large β, γ never overflow:
/// the combined exponent is −(β−γ)²/4α².
pub fn gauss_bessel_identity(alpha: f64, beta: f64, gamma_: f64, m: usize) -> f64 {
    debug_assert!(alpha > 0.0 && beta >= 0.0 && gamma_ >= 0.0);
    let a2 = alpha * alpha;
    let arg = beta * gamma_ / (2.0 * a2);
    let expo = -(beta - gamma_) * (beta - gamma_) / (4.0 * a2);
    expo.exp() * bessel_i_scaled(m, arg) / (2.0 * a2)
}

/// Both sides of the Sommerfeld-type identity behind the short-time
/// propagator,
///
/// ∫₀^∞ x dx · i e^{i√(1−x²)Δz} J₀(xR) / √(1−x²) = e^{i√(R²+Δz²)} / √(R²+Δz²),
///
/// where the branch for x > 1 is √(1−x²) = i√(x²−1) (the decaying one).
#[derive(Debug, Clone, Copy)]
pub struct SommerfeldSides {
    pub numeric: Complex64,
    pub closed_form: Complex64,
}

/// Evaluate the identity above at transverse offset `R` and axial distance
/// `dz > 0`. Used only as a validation oracle.
///
/// The propagating part [0, 1] is integrated after the substitution
/// x = sinθ (which removes the inverse-square-root endpoint), the evanescent
/// part after v = √(x²−1) (integrand e^{−vΔz} J₀(R√(1+v²))); both by
/// Gauss–Legendre with order doubling. The evanescent cut is placed where
/// the dropped tail is below 1e-12 of scale.
pub fn sommerfeld_check(r_offset: f64, dz: f64, rel_tol: f64) -> Result<SommerfeldSides> {
    debug_assert!(r_offset >= 0.0 && dz > 0.0);
    let u = (r_offset * r_offset + dz * dz).sqrt();
    let closed_form = Complex64::new(0.0, u).exp() / u;

    // propagating: ∫₀^{π/2} sinθ · i e^{i cosθ Δz} J₀(R sinθ) dθ
    let prop = |th: f64| {
        let (s, c) = th.sin_cos();
        Complex64::i() * Complex64::new(0.0, c * dz).exp() * s * bessel_j(0, s * r_offset)
    };
    // evanescent: ∫₀^{v_cut} e^{−vΔz} J₀(R √(1+v²)) dv, tail e^{−v_cut Δz} < 1e-12
    let v_cut = 28.0 / dz;
    let evan = |v: f64| {
        Complex64::new((-v * dz).exp() * bessel_j(0, r_offset * (1.0 + v * v).sqrt()), 0.0)
    };

    // oscillation count sets the starting order
    let start = (((dz + r_offset) / 3.0) as usize).next_power_of_two().max(16);
    let mut order = start;
    let mut prev: Option<Complex64> = None;
    for _ in 0..8 {
        let rule = gauss_legendre(order);
        let int_c = |f: &dyn Fn(f64) -> Complex64, a: f64, b: f64| -> Complex64 {
            let (xs, ws) = rule.mapped(a, b);
            xs.iter()
                .zip(&ws)
                .map(|(&x, &w)| f(x).scale(w))
                .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
        };
        let total = int_c(&prop, 0.0, std::f64::consts::FRAC_PI_2) + int_c(&evan, 0.0, v_cut);
        if let Some(p) = prev {
            let change = (total - p).norm();
            if change <= rel_tol * total.norm().max(1e-300) {
                return Ok(SommerfeldSides {
                    numeric: total,
                    closed_form,
                });
            }
        }
        prev = Some(total);
        order *= 2;
    }
    Err(Error::QuadratureFailure {
        context: format!("sommerfeld_check(R={r_offset}, dz={dz}): oscillatory integral did not settle at order {order}"),
        residual: prev.map(|p| p.norm()).unwrap_or(f64::NAN),
        target: rel_tol,
    })
}
