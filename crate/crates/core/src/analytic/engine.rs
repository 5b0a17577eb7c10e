//! Series tables shared by the correlation and power evaluators.
//!
//! For one azimuthal order m the mode sum factorizes, apart from the
//! kernel e^{−(y+y')/D} I_m(2√(yy')/D) and the χ u-integral, into a product
//! of one branch sum per side. Grouping the branch terms by the half-degree
//! δ = 2k + q + n (so that D = 2 + δ + δ') reduces the eight-fold index sum
//! to a double sum over (δ, δ') of bilinear forms in precomputed branch
//! tables
//!
//!   S_δ(y, u) = Σ_{2k+q+n=δ} (−iy/2F)^l (−i/√8F)^q (8iπF)^n u^{k+l+2q}
//!               g_{qn}(u) · (dΓt/4)^{k+q} / (k! (l+2q+k)!)
//!
//! with the primed branch the complex conjugate of the same table.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::chi::{branch_poly, factorials};
use crate::params::Truncation;
use crate::specfun::{bessel_i_scaled, gauss_legendre};

/// Branch tables for one (m, F, dΓt) and one truncation level.
pub(crate) struct SeriesTables {
    pub m: usize,
    /// Distinct half-degrees δ with a nonzero table, ascending.
    pub deltas: Vec<usize>,
    /// S_δ(y_i, u_j), one (ny × nu) table per δ.
    pub tables: Vec<Array2<Complex64>>,
    /// max |S_δ| per table, for pair pruning.
    pub norms: Vec<f64>,
    pub ys: Vec<f64>,
    pub wy: Vec<f64>,
    pub wu: Vec<f64>,
}

impl SeriesTables {
    /// Build the tables. `flip_chi_sign` is a test-only hook that perturbs
    /// the χ branch polynomial (see `chi::branch_poly`).
    pub fn build(
        m: usize,
        fresnel: f64,
        d_gamma_t: f64,
        trunc: &Truncation,
        ny: usize,
        nu: usize,
        flip_chi_sign: bool,
    ) -> Self {
        let fact = factorials();
        let x_gain = 0.25 * d_gamma_t; // (dΓt/4), the series time factor

        let (ys, wy) = gauss_legendre(ny).mapped(0.0, 2.0 * fresnel);
        let (us, wu) = gauss_legendre(nu).mapped(0.0, 1.0);

        let delta_max = 2 * trunc.k_max + 2 * trunc.q_max;
        let mut tables = vec![Array2::<Complex64>::zeros((ny, nu)); delta_max + 1];

        // u^p lookup
        let p_max = trunc.k_max + trunc.l_max + 2 * trunc.q_max + trunc.q_max;
        let mut u_pows = Array2::<f64>::zeros((p_max + 1, nu));
        for j in 0..nu {
            let mut p = 1.0;
            for row in 0..=p_max {
                u_pows[(row, j)] = p;
                p *= us[j];
            }
        }

        // (−i y / 2F)^l tables, built incrementally in l
        let base_y: Vec<Complex64> = ys
            .iter()
            .map(|&y| Complex64::new(0.0, -y / (2.0 * fresnel)))
            .collect();
        let cq_base = Complex64::new(0.0, -1.0 / (8.0f64.sqrt() * fresnel));
        let cn_base = Complex64::new(0.0, 8.0 * std::f64::consts::PI * fresnel);

        let mut yl: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); ny];
        for l in 0..=trunc.l_max {
            if l > 0 {
                for (v, b) in yl.iter_mut().zip(&base_y) {
                    *v *= b;
                }
            }
            let mut cq = Complex64::new(1.0, 0.0);
            for q in 0..=trunc.q_max {
                if q > 0 {
                    cq *= cq_base;
                }
                // time factor t_k = x^{k+q} / (k! (l+2q+k)!), by recurrence in k
                let mut tf = x_gain.powi(q as i32) / fact[l + 2 * q];
                for k in 0..=trunc.k_max {
                    if k > 0 {
                        tf *= x_gain / (k as f64 * (l + 2 * q + k) as f64);
                    }
                    let kappa = k + l + 2 * q;
                    let mut cn = Complex64::new(1.0, 0.0);
                    for n in 0..=q {
                        if n > 0 {
                            cn *= cn_base;
                        }
                        let delta = 2 * k + q + n;
                        let poly = branch_poly(q, n, flip_chi_sign, &fact);
                        let coeff = cq * cn * tf;
                        let table = &mut tables[delta];
                        for i in 0..ny {
                            let ci = coeff * yl[i];
                            for j in 0..nu {
                                // g_{qn}(u) u^{κ+Q} summed over Q
                                let mut g = 0.0;
                                for (qq, c) in poly.iter().enumerate() {
                                    g += c * u_pows[(kappa + qq, j)];
                                }
                                table[(i, j)] += ci * g;
                            }
                        }
                    }
                }
            }
        }

        let mut deltas = Vec::new();
        let mut kept = Vec::new();
        let mut norms = Vec::new();
        for (delta, t) in tables.into_iter().enumerate() {
            let norm = t.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if norm > 0.0 {
                deltas.push(delta);
                norms.push(norm);
                kept.push(t);
            }
        }
        SeriesTables {
            m,
            deltas,
            tables: kept,
            norms,
            ys,
            wy,
            wu,
        }
    }

    /// Pairs (a, b) of table indices that survive magnitude pruning.
    fn pairs(&self) -> Vec<(usize, usize)> {
        let max_norm = self.norms.iter().cloned().fold(0.0, f64::max);
        let cut = 1e-18 * max_norm * max_norm;
        let mut out = Vec::new();
        for a in 0..self.deltas.len() {
            for b in 0..self.deltas.len() {
                if self.norms[a] * self.norms[b] > cut {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Contracted power sum: Σ_{δδ'} (2/D) ∫dy K̃_D(y) ∫du S_δ conj(S_δ'),
    /// K̃_D(y) = e^{−2y/D} I_m(2y/D). This equals P_m(t)·8/(dΓ e^{−Γt}).
    pub fn power_reduced(&self) -> Complex64 {
        let ny = self.ys.len();
        // kernel per D value
        let d_max = 2 + 2 * self.deltas.last().copied().unwrap_or(0);
        let mut kernels: Vec<Vec<f64>> = vec![Vec::new(); d_max + 1];
        for &da in &self.deltas {
            for &db in &self.deltas {
                let d = 2 + da + db;
                if kernels[d].is_empty() {
                    kernels[d] = self
                        .ys
                        .iter()
                        .map(|&y| bessel_i_scaled(self.m, 2.0 * y / d as f64))
                        .collect();
                }
            }
        }
        self.pairs()
            .par_iter()
            .map(|&(a, b)| {
                let d = 2 + self.deltas[a] + self.deltas[b];
                let kern = &kernels[d];
                let sa = &self.tables[a];
                let sb = &self.tables[b];
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..ny {
                    let mut udot = Complex64::new(0.0, 0.0);
                    for (j, &wuj) in self.wu.iter().enumerate() {
                        udot += wuj * sa[(i, j)] * sb[(i, j)].conj();
                    }
                    acc += self.wy[i] * kern[i] * udot;
                }
                acc * (2.0 / d as f64)
            })
            .reduce(|| Complex64::new(0.0, 0.0), |x, y| x + y)
    }

    /// The correlation weight matrix W(y_i, y_j): contracting it with
    /// w_i w_j J_m(√y_i r/σ⊥) J_m(√y_j r'/σ⊥) gives C_m(r,r',t)·4F/(λ₀e^{−Γt}).
    ///
    /// W(i, j) = Σ_{δδ'} (2/D) e^{−(y_i+y_j)/D} I_m(2√(y_iy_j)/D)
    ///           · Σ_u w_u S_δ(i, u) conj(S_δ'(j, u))
    pub fn correlation_matrix(&self) -> Array2<Complex64> {
        let ny = self.ys.len();
        // scaled kernel matrices per D
        let d_max = 2 + 2 * self.deltas.last().copied().unwrap_or(0);
        let mut kernels: Vec<Array2<f64>> = vec![Array2::zeros((0, 0)); d_max + 1];
        for &da in &self.deltas {
            for &db in &self.deltas {
                let d = 2 + da + db;
                if kernels[d].is_empty() {
                    let df = d as f64;
                    let mut k = Array2::zeros((ny, ny));
                    for i in 0..ny {
                        for j in 0..=i {
                            let si = self.ys[i].sqrt();
                            let sj = self.ys[j].sqrt();
                            let v = (-(si - sj) * (si - sj) / df).exp()
                                * bessel_i_scaled(self.m, 2.0 * si * sj / df);
                            k[(i, j)] = v;
                            k[(j, i)] = v;
                        }
                    }
                    kernels[d] = k;
                }
            }
        }
        self.pairs()
            .par_iter()
            .map(|&(a, b)| {
                let d = 2 + self.deltas[a] + self.deltas[b];
                let kern = &kernels[d];
                let sa = &self.tables[a];
                let sb = &self.tables[b];
                let scale = 2.0 / d as f64;
                let mut w = Array2::<Complex64>::zeros((ny, ny));
                for i in 0..ny {
                    for j in 0..ny {
                        let mut udot = Complex64::new(0.0, 0.0);
                        for (jj, &wuj) in self.wu.iter().enumerate() {
                            udot += wuj * sa[(i, jj)] * sb[(j, jj)].conj();
                        }
                        w[(i, j)] += scale * kern[(i, j)] * udot;
                    }
                }
                w
            })
            .reduce(
                || Array2::<Complex64>::zeros((ny, ny)),
                |x, y| x + y,
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn t0_power_reduces_to_kernel_integral() {
        // At t = 0 only k=k'=q=q'=n=n'=0 survive and the l-sums collapse to
        // a pure phase: P_m(0)·8/(dΓ) = ∫₀^{2F} e^{−y} I_m(y) dy.
        let trunc = Truncation {
            l_max: 18,
            q_max: 4,
            k_max: 4,
            ..Truncation::default()
        };
        let refs = [
            (4.0, 0, 2.22059420119638791),
            (4.0, 1, 1.36402598305323822),
            (4.0, 2, 0.77574275149548489),
            (8.0, 0, 3.16629987388352162),
            (8.0, 1, 2.26684400124477364),
            (8.0, 2, 1.56208735811896183),
        ];
        for &(fresnel, m, want) in &refs {
            let t = SeriesTables::build(m, fresnel, 0.0, &trunc, 48, 24, false);
            let v = t.power_reduced();
            assert_relative_eq!(v.re, want, max_relative = 1e-9);
            assert!(v.im.abs() < 1e-12 * v.re.abs());
        }
    }

    #[test]
    fn correlation_matrix_contracts_to_power_at_t0() {
        // Radial contraction at t=0 via the exact Dini identity:
        // (1/2)∫ x dx C_red(x) = P_red. Done here in the y-representation:
        // ∫₀^∞ r dr J_m(√y r/σ)J_m(√y' r/σ) = 2σ² δ(y−y'), so contracting W
        // against the quadrature diagonal must reproduce power_reduced.
        let trunc = Truncation {
            l_max: 14,
            q_max: 0,
            k_max: 0,
            ..Truncation::default()
        };
        let t = SeriesTables::build(0, 4.0, 0.0, &trunc, 40, 16, false);
        let w = t.correlation_matrix();
        // delta contraction: Σ_i wy_i W(i,i) · (1/2)·2 = Σ wy_i W(i,i)
        // (the kernel at y=y' carries I_m(2y/D) e^{0} already equal to the
        // power kernel, and the (2/D)s match term by term)
        let contracted: Complex64 = (0..t.ys.len())
            .map(|i| t.wy[i] * w[(i, i)])
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b);
        let p = t.power_reduced();
        assert_relative_eq!(contracted.re, p.re, max_relative = 1e-12);
    }
}
