//! Orthonormalized associated Legendre functions.
//!
//! `p̄_lm(μ) = sqrt((2l+1)/(4π) (l-m)!/(l+m)!) P_l^m(μ)` without the
//! Condon–Shortley phase, so that `∫₋₁¹ p̄_lm² dμ = 1/(2π)` and the real
//! harmonics `p̄_l0`, `√2 p̄_lm cos mφ`, `√2 p̄_lm sin mφ` are orthonormal on
//! the unit sphere.

use crate::scalar::Real;

/// Offset of order `m` in a triangular `(m, l)` table with `m ≤ l ≤ lmax`.
#[inline]
pub(crate) fn order_offset(lmax: usize, m: usize) -> usize {
    m * (lmax + 1) - m * m.saturating_sub(1) / 2
}

/// Number of `(l, m)` pairs with `0 ≤ m ≤ l ≤ lmax`.
#[inline]
pub(crate) fn triangle_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 2) / 2
}

/// Tabulates `p̄_lm` and `dp̄_lm/dμ` at every node.
///
/// Both tables are laid out as `[(order_offset(m) + l - m) * nodes.len() + j]`.
/// Nodes must lie strictly inside `(-1, 1)`.
pub(crate) fn tabulate<T: Real>(lmax: usize, nodes: &[T]) -> (Vec<T>, Vec<T>) {
    let n = nodes.len();
    let len = triangle_len(lmax) * n;
    let mut p = vec![T::zero(); len];
    let mut dp = vec![T::zero(); len];
    let two = T::of(2.0);
    let four = T::of(4.0);

    for (j, &mu) in nodes.iter().enumerate() {
        let s = (T::one() - mu * mu).sqrt();
        let mut pmm = T::one() / (four * T::PI()).sqrt();
        for m in 0..=lmax {
            let mf = T::of_usize(m);
            if m > 0 {
                pmm = pmm * ((two * mf + T::one()) / (two * mf)).sqrt() * s;
            }
            let base = order_offset(lmax, m);
            p[base * n + j] = pmm;
            if m < lmax {
                p[(base + 1) * n + j] = (two * mf + T::of(3.0)).sqrt() * mu * pmm;
            }
            for l in (m + 2)..=lmax {
                let lf = T::of_usize(l);
                let l1 = lf - T::one();
                let a = ((four * lf * lf - T::one()) / (lf * lf - mf * mf)).sqrt();
                let b = ((l1 * l1 - mf * mf) / (four * l1 * l1 - T::one())).sqrt();
                let k = base + l - m;
                p[k * n + j] = a * (mu * p[(k - 1) * n + j] - b * p[(k - 2) * n + j]);
            }
            // (1 - μ²) dp̄_lm/dμ = -l μ p̄_lm + sqrt((2l+1)(l² - m²)/(2l-1)) p̄_{l-1,m}
            let inv = T::one() / (T::one() - mu * mu);
            for l in m..=lmax {
                let lf = T::of_usize(l);
                let k = base + l - m;
                let mut v = -lf * mu * p[k * n + j];
                if l > m {
                    let c = ((two * lf + T::one()) * (lf * lf - mf * mf) / (two * lf - T::one())).sqrt();
                    v += c * p[(k - 1) * n + j];
                }
                dp[k * n + j] = v * inv;
            }
        }
    }
    (p, dp)
}
