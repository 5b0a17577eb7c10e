//! Scalar (e₊-projected) dipole propagator between two atoms.

use num_complex::Complex64;

/// e₊*·P̄⁺(r, r')·e₊ / k_S³ — the closed form of applying (∇² + ∂_z²) to
/// the outgoing spherical wave e^{iu}/u:
///
///   (−1/8π)[ −e^{iu}/u + f''(u)·Δz²/u² + f'(u)(1/u − Δz²/u³) ]
///
/// with u = |r − r'|, Δz = z − z', f'(u) = e^{iu}(i/u − 1/u²),
/// f''(u) = e^{iu}(−1/u − 2i/u² + 2/u³). Far field this tends to
/// (1/4π) e^{iu} (Δz² + ½ρ²)/u³ with ρ² = u² − Δz².
pub fn scalar_propagator(r_j: &[f64; 3], r_jp: &[f64; 3]) -> Complex64 {
    let dx = r_j[0] - r_jp[0];
    let dy = r_j[1] - r_jp[1];
    let dz = r_j[2] - r_jp[2];
    let u2 = dx * dx + dy * dy + dz * dz;
    let u = u2.sqrt();
    debug_assert!(u > 0.0, "scalar_propagator needs distinct points");
    let inv = 1.0 / u;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let eiu = Complex64::new(0.0, u).exp();
    let fp = eiu * Complex64::new(-inv2, inv);
    let fpp = eiu * Complex64::new(-inv + 2.0 * inv3, -2.0 * inv2);
    let dz2 = dz * dz;
    let bracket = -eiu * inv + fpp * (dz2 * inv2) + fp * (inv - dz2 * inv3);
    bracket * (-1.0 / (8.0 * std::f64::consts::PI))
}
