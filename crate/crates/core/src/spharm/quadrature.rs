//! Gauss–Legendre quadrature on `[-1, 1]`.

use crate::scalar::Real;

/// Nodes (ascending) and weights of the `n`-point Gauss–Legendre rule.
///
/// Roots of `P_n` are found by Newton iteration from the Tricomi-type
/// initial guess `cos(π(i + 3/4)/(n + 1/2))`; the rule integrates
/// polynomials of degree `2n - 1` exactly.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    if n == 0 {
        return (nodes, weights);
    }
    let nf = T::of_usize(n);
    let half = T::of(0.5);
    for i in 0..n.div_ceil(2) {
        let mut x = (T::PI() * (T::of_usize(i) + T::of(0.75)) / (nf + half)).cos();
        let mut dp = T::one();
        let mut polished = false;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if polished {
                break;
            }
            if dx.abs() <= T::epsilon() * T::of(4.0) {
                // one extra step once converged
                polished = true;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_and_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = T::of_usize(k);
        let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::of_usize(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}
