//! Spontaneous-emission intensity on the symmetry axis at t ≈ 0.
//!
//! After the axial integration the on-axis intensity takes the closed form
//!
//! C₀(0,0) = λ₀ L ∫₀^∞ r dr e^{−(L²/2σ⊥²) r²} (1/32)
//!           [ (−13 − 11r²)/(1+r²)² + 19 arctan(1/r)/r ]
//!
//! (k_S = 1). The arctan term diverges like π/(2r) at the origin, but the
//! r dr measure makes the integrand analytic there with value 19π/64. The
//! integrand before z-integration — used by the validation oracle — is
//! ρ-weighted (½r'² + Δz²)²/(r'² + Δz²)³.

use crate::params::EnsembleParams;
use crate::specfun::gauss_legendre;

/// Integrand r·f(r) written in its analytic form (the arctan divergence
/// cancelled explicitly, so r → 0 is exact).
fn integrand(r: f64, c: f64) -> f64 {
    let r2 = r * r;
    let bracket_smooth = r * (-13.0 - 11.0 * r2) / ((1.0 + r2) * (1.0 + r2));
    let arctan_part = 19.0 * (std::f64::consts::FRAC_PI_2 - r.atan());
    (-c * r2).exp() * (bracket_smooth + arctan_part) / 32.0
}

/// C₀(0,0): the spontaneous on-axis intensity; no e^{−Γt} factor.
pub fn spontaneous_on_axis(params: &EnsembleParams) -> f64 {
    let length = params.length();
    let c = length * length / (2.0 * params.sigma_perp * params.sigma_perp);
    // Gaussian support: e^{−c r²} < 1e-60 beyond r_up; the bracket decays too
    let r_up = (12.0 / c.sqrt()).max(2.0);
    let mut order = 32;
    let mut prev = f64::NAN;
    for _ in 0..5 {
        let v = gauss_legendre(order).integrate(0.0, r_up, |r| integrand(r, c));
        if (v - prev).abs() <= 1e-12 * v.abs() {
            return params.gain_constant() * length * v;
        }
        prev = v;
        order *= 2;
    }
    params.gain_constant() * length * prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrand_finite_at_origin() {
        // measure kills the arctan divergence: r·f → 19π/64 / 32·... at 0⁺
        let v0 = integrand(0.0, 1.0);
        assert_relative_eq!(
            v0,
            19.0 * std::f64::consts::PI / 2.0 / 32.0,
            max_relative = 1e-14
        );
        let v_eps = integrand(1e-9, 1.0);
        assert_relative_eq!(v0, v_eps, max_relative = 1e-7);
    }

    #[test]
    fn frozen_reference_values() {
        // 40-digit quadrature of the reduced integral I(c)
        for (c, want) in [(6.25_f64, 0.257315077575817614), (4.5, 0.290552057854071228), (0.08, 0.79842446750270565)]
        {
            let sigma_perp = 10.0;
            let length = (2.0 * c * sigma_perp * sigma_perp).sqrt();
            let sigma_par = length / (2.0 * std::f64::consts::PI).sqrt();
            let p = EnsembleParams::new(sigma_perp, sigma_par, 0.01, 1.0).unwrap();
            let got = spontaneous_on_axis(&p);
            let scale = p.gain_constant() * p.length();
            assert_relative_eq!(got / scale, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn scales_with_gain_and_length() {
        // C₀ ∝ λ₀·L at fixed L/σ⊥
        let p1 = EnsembleParams::new(10.0, 20.0, 0.02, 1.0).unwrap();
        let p2 = EnsembleParams::new(20.0, 40.0, 0.04, 1.0).unwrap();
        let r1 = spontaneous_on_axis(&p1) / (p1.gain_constant() * p1.length());
        let r2 = spontaneous_on_axis(&p2) / (p2.gain_constant() * p2.length());
        assert_relative_eq!(r1, r2, max_relative = 1e-10);
    }

    #[test]
    fn matches_two_dimensional_oracle() {
        // Independent 2D quadrature of the pre-z-integration form:
        // ∫₀^L dΔz ∫ r' dr' e^{−r'²/2σ⊥²} (½r'² + Δz²)²/(r'² + Δz²)³,
        // which also validates the analytic z-integration.
        let p = EnsembleParams::new(14.0, 20.0, 0.05, 1.0).unwrap();
        let length = p.length();
        let sp2 = p.sigma_perp * p.sigma_perp;
        let rule = gauss_legendre(96);
        let r_up = 10.0 * p.sigma_perp;
        let inner = |dz: f64| {
            rule.integrate(0.0, r_up, |rp| {
                let a = 0.5 * rp * rp + dz * dz;
                let b = rp * rp + dz * dz;
                rp * (-rp * rp / (2.0 * sp2)).exp() * a * a / (b * b * b)
            })
        };
        // Δz integrand has an integrable scale change near 0; split panels
        let mut outer = 0.0;
        let panels = 64;
        for i in 0..panels {
            let a = length * i as f64 / panels as f64;
            let b = length * (i + 1) as f64 / panels as f64;
            outer += rule.integrate(a, b, inner);
        }
        let oracle = p.gain_constant() * outer;
        let closed = spontaneous_on_axis(&p);
        assert_relative_eq!(closed, oracle, max_relative = 1e-6);
    }
}
