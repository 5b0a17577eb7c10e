//! Bessel functions J_m, exponentially scaled I_m, and zeros of J_m.
//!
//! J_m uses the ascending power series for small argument and Miller's
//! normalized backward recurrence otherwise; both are accurate to ~1e-14
//! relative away from zeros, uniformly in the order. The scaled modified
//! Bessel e^{−x} I_m(x) uses the (all-positive) power series for small x
//! and backward recurrence with the e^{x} normalization sum for large x,
//! so it never overflows.

/// J_m(x) for integer order m ≥ 0 and x ≥ 0.
pub fn bessel_j(m: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x <= 9.0 {
        bessel_j_series(m, x)
    } else {
        bessel_j_miller(m, x)
    }
}

/// Ascending series J_m(x) = (x/2)^m Σ_k (−x²/4)^k / (k! (m+k)!).
///
/// Alternating, so only safe where the largest term stays within ~e^9 of the
/// result; the caller restricts it to x ≤ 9.
fn bessel_j_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^m / m! without overflow for the m, x we ever see here.
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}

/// Miller's algorithm: downward recurrence J_{k−1} = (2k/x) J_k − J_{k+1}
/// from a seed order well above both m and x, normalized with
/// J₀ + 2 Σ_{k≥1} J_{2k} = 1.
fn bessel_j_miller(m: usize, x: f64) -> f64 {
    let start = {
        let base = x.max(m as f64);
        let pad = 16.0 * (x + 1.0).powf(1.0 / 3.0) + 24.0;
        let s = (base + pad).ceil() as usize;
        s + (s & 1) // even
    };
    let mut jp1 = 0.0_f64; // J_{k+1}
    let mut jk = 1e-30_f64; // J_k (arbitrary seed, normalized away)
    let mut norm = 0.0_f64;
    let mut result = if m == start { jk } else { 0.0 };
    let mut k = start;
    while k > 0 {
        let jm1 = (2.0 * k as f64 / x) * jk - jp1;
        jp1 = jk;
        jk = jm1;
        k -= 1;
        if k == m {
            result = jk;
        }
        if k % 2 == 0 && k > 0 {
            norm += 2.0 * jk;
        }
        // rescale to avoid overflow of the unnormalized recurrence
        if jk.abs() > 1e250 {
            jk *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += jk; // J_0 term
    result / norm
}

/// Exponentially scaled modified Bessel function e^{−x} I_m(x) for integer
/// m ≥ 0 and x ≥ 0. Never overflows (tested up to x = 10⁶).
pub fn bessel_i_scaled(m: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x <= 35.0 {
        // all-positive series, then scale
        let half = 0.5 * x;
        let mut term = 1.0;
        for k in 1..=m {
            term *= half / k as f64;
        }
        let q = half * half;
        let mut sum = term;
        for k in 1..300 {
            term *= q / (k as f64 * (m + k) as f64);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        bessel_i_scaled_miller(m, x)
    }
}

/// Downward recurrence I_{k−1} = I_{k+1} + (2k/x) I_k normalized with
/// e^{−x} (I₀ + 2 Σ_{k≥1} I_k) = 1.
fn bessel_i_scaled_miller(m: usize, x: f64) -> f64 {
    // I_k/I_0 ~ e^{−k²/2x}; start where the ratio is below 1e-19.
    let start = {
        let s = (m as f64).max(9.3 * x.sqrt()) + 40.0;
        s.ceil() as usize
    };
    let mut ip1 = 0.0_f64;
    let mut ik = 1e-30_f64;
    let mut norm = 0.0_f64;
    let mut result = if m == start { ik } else { 0.0 };
    let mut k = start;
    while k > 0 {
        let im1 = ip1 + (2.0 * k as f64 / x) * ik;
        ip1 = ik;
        ik = im1;
        k -= 1;
        if k == m {
            result = ik;
        }
        if k > 0 {
            norm += 2.0 * ik;
        }
        if ik > 1e250 {
            ik *= 1e-250;
            ip1 *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += ik;
    result / norm
}

/// The n-th positive zero X_{mn} of J_m (n starts at 1).
pub fn bessel_zero(m: usize, n: usize) -> f64 {
    debug_assert!(n >= 1);
    *bessel_zeros(m, n).last().unwrap()
}

/// The first `count` positive zeros of J_m, strictly increasing.
///
/// Sequential bracket scan (consecutive zeros are at least π apart, so a
/// step of 1.5 cannot skip one) followed by Newton polish with
/// J_m'(x) = (J_{m−1}(x) − J_{m+1}(x))/2.
pub fn bessel_zeros(m: usize, count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    // J_m > 0 on (0, X_{m1}); start just inside that interval.
    let mut lo = if m == 0 {
        2.0
    } else {
        let mf = m as f64;
        mf + 1.8557571 * mf.powf(1.0 / 3.0)
    };
    for _ in 0..count {
        let mut flo = bessel_j(m, lo);
        let mut hi = lo;
        let mut fhi = flo;
        for _ in 0..10_000 {
            hi += 1.5;
            fhi = bessel_j(m, hi);
            if flo * fhi < 0.0 {
                break;
            }
            lo = hi;
            flo = fhi;
        }
        let z = refine_zero(m, lo, hi, flo, fhi);
        zeros.push(z);
        lo = z + 2.0; // next zero is more than 2 away for all m
    }
    zeros
}

fn refine_zero(m: usize, mut lo: f64, mut hi: f64, mut flo: f64, _fhi: f64) -> f64 {
    // a few bisections to shrink the bracket, then Newton
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j(m, mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..30 {
        let f = bessel_j(m, x);
        let fp = if m == 0 {
            -bessel_j(1, x)
        } else {
            0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
        };
        let dx = f / fp;
        let xn = (x - dx).clamp(lo, hi);
        if (xn - x).abs() <= 1e-15 * x {
            return xn;
        }
        x = xn;
    }
    x
}
