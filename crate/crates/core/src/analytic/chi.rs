//! The combinatorial χ coefficient coupling the primed and unprimed
//! summation branches.
//!
//! χ is a finite double lattice sum over (s, Q) and (s', Q'); the only
//! factors that do not factorize between the branches are the denominator
//! 1 + Q + Q' + k + k' + l + l' + 2(q + q') and the overall kernel
//! denominator D. Writing 1/(1 + Q + Q' + K) = ∫₀¹ u^{Q+Q'+K} du turns χ
//! into a u-integral of a product of one polynomial per branch, which is
//! what the series engine uses; [`chi_coeff`] is the direct sum and serves
//! as the reference.

use super::types::TermIndex;
use crate::error::Result;

/// Factorials 0! .. 170! as f64.
pub(crate) const FACT_LEN: usize = 171;

pub(crate) fn factorials() -> [f64; FACT_LEN] {
    let mut f = [1.0; FACT_LEN];
    for k in 1..FACT_LEN {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Direct evaluation of χ for one index combination.
pub fn chi_coeff(idx: &TermIndex) -> Result<f64> {
    idx.validate()?;
    let fact = factorials();
    let two_pi = 2.0 * std::f64::consts::PI;
    let big_d = idx.kernel_denominator() as f64;
    let k_sum = idx.k + idx.kp + idx.l + idx.lp + 2 * (idx.q + idx.qp);
    let mut total = 0.0;
    for s in 0..=idx.n / 2 {
        for sp in 0..=idx.np / 2 {
            for qq in 0..=(idx.n - 2 * s) {
                for qqp in 0..=(idx.np - 2 * sp) {
                    let sign = if (qq + qqp + s + sp) % 2 == 0 { 1.0 } else { -1.0 };
                    let num = 2.0 * sign * two_pi.powi(-((s + sp) as i32));
                    let den = fact[idx.q - idx.n]
                        * fact[idx.qp - idx.np]
                        * fact[idx.n - 2 * s - qq]
                        * fact[idx.np - 2 * sp - qqp]
                        * fact[s]
                        * fact[sp]
                        * fact[qq]
                        * fact[qqp]
                        * (1 + qq + qqp + k_sum) as f64
                        * big_d;
                    total += num / den;
                }
            }
        }
    }
    Ok(total)
}

/// Polynomial coefficients (in powers of u) of one branch's (s, Q) sum:
///
/// g_{qn}(u) = Σ_Q u^Q (−1)^Q/((q−n)! Q!) Σ_{s ≤ (n−Q)/2} (−1)^s (2π)^{−s} / ((n−2s−Q)! s!)
///
/// The test-only `flip_sign` negates the (−1)^Q factor; it exists so the
/// mutation-sensitivity check can verify that the radial-contraction oracle
/// actually notices a wrong χ.
pub(crate) fn branch_poly(q: usize, n: usize, flip_sign: bool, fact: &[f64; FACT_LEN]) -> Vec<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut coeffs = vec![0.0; n + 1];
    for (qq, c) in coeffs.iter_mut().enumerate() {
        let mut s_sum = 0.0;
        for s in 0..=(n - qq) / 2 {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            s_sum += sign * two_pi.powi(-(s as i32)) / (fact[n - 2 * s - qq] * fact[s]);
        }
        let mut sign_q = if qq % 2 == 0 { 1.0 } else { -1.0 };
        if flip_sign {
            sign_q = -sign_q;
        }
        *c = sign_q * s_sum / (fact[q - n] * fact[qq]);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chi_all_zero() {
        let idx = TermIndex::unprimed(0, 0, 0, 0);
        assert_relative_eq!(chi_coeff(&idx).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn chi_single_l() {
        let idx = TermIndex::unprimed(1, 0, 0, 0);
        assert_relative_eq!(chi_coeff(&idx).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn chi_q1_n1() {
        // (q=1, n=1): Q ∈ {0, 1} → 2[1/(3·4) − 1/(4·4)] = 1/6 − 1/8 = 1/24
        let idx = TermIndex::unprimed(0, 1, 0, 1);
        assert_relative_eq!(chi_coeff(&idx).unwrap(), 1.0 / 24.0, max_relative = 1e-14);
    }

    #[test]
    fn chi_rejects_bad_index() {
        assert!(chi_coeff(&TermIndex::unprimed(0, 0, 0, 1)).is_err());
    }

    /// Brute-force enumeration written independently of chi_coeff's loop
    /// nesting (iterates the full rectangular lattice and skips invalid
    /// combinations explicitly).
    fn chi_brute(idx: &TermIndex) -> f64 {
        let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut total = 0.0;
        for s in 0..=8_usize {
            for sp in 0..=8_usize {
                for qq in 0..=16_usize {
                    for qqp in 0..=16_usize {
                        if 2 * s + qq > idx.n || 2 * sp + qqp > idx.np {
                            continue;
                        }
                        let sign = [1.0, -1.0][(qq + qqp + s + sp) % 2];
                        total += 2.0 * sign * two_pi.powf(-((s + sp) as f64))
                            / (fact(idx.q - idx.n)
                                * fact(idx.qp - idx.np)
                                * fact(idx.n - 2 * s - qq)
                                * fact(idx.np - 2 * sp - qqp)
                                * fact(s)
                                * fact(sp)
                                * fact(qq)
                                * fact(qqp)
                                * (1 + qq
                                    + qqp
                                    + idx.k
                                    + idx.kp
                                    + idx.l
                                    + idx.lp
                                    + 2 * (idx.q + idx.qp)) as f64
                                * idx.kernel_denominator() as f64);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn chi_matches_brute_force_enumeration() {
        let cases = [
            TermIndex {
                l: 2,
                q: 3,
                k: 1,
                n: 2,
                lp: 0,
                qp: 4,
                kp: 2,
                np: 3,
            },
            TermIndex {
                l: 0,
                q: 5,
                k: 0,
                n: 5,
                lp: 1,
                qp: 5,
                kp: 1,
                np: 4,
            },
            TermIndex::unprimed(3, 2, 4, 1),
        ];
        for idx in &cases {
            assert_relative_eq!(
                chi_coeff(idx).unwrap(),
                chi_brute(idx),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn branch_poly_reproduces_chi() {
        // χ = (2/D) ∫₀¹ u^{κ+κ'} g_{qn}(u) g_{q'n'}(u) du with κ = k+l+2q,
        // the integral done exactly on the polynomial coefficients
        let fact = factorials();
        let cases = [
            TermIndex {
                l: 1,
                q: 4,
                k: 2,
                n: 3,
                lp: 2,
                qp: 2,
                kp: 0,
                np: 2,
            },
            TermIndex::unprimed(0, 1, 0, 1),
        ];
        for idx in &cases {
            let a = branch_poly(idx.q, idx.n, false, &fact);
            let b = branch_poly(idx.qp, idx.np, false, &fact);
            let kappa = idx.k + idx.l + 2 * idx.q;
            let kappap = idx.kp + idx.lp + 2 * idx.qp;
            let mut integral = 0.0;
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    integral += ai * bj / (1 + i + j + kappa + kappap) as f64;
                }
            }
            let chi = 2.0 / idx.kernel_denominator() as f64 * integral;
            assert_relative_eq!(chi, chi_coeff(idx).unwrap(), max_relative = 1e-13);
        }
    }
}
