use serde::Serialize;

use super::field::GridField;
use super::legendre::{order_offset, tabulate};
use super::quadrature::gauss_legendre;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Quadrature grid and normalized Legendre tables for truncation `L`.
///
/// Latitudes are the `⌈(3L+1)/2⌉` Gauss–Legendre nodes in `μ = cos θ`;
/// longitudes are `n_lon` equispaced points with `n_lon` the even number
/// at or above `3L+2`. With this grid, products of two degree-`L` fields
/// project back onto degree `L` without aliasing.
///
/// Tables are immutable after construction and can be shared across threads.
#[derive(Debug, Clone, Serialize)]
pub struct BasisTables<T> {
    truncation: usize,
    gauss_nodes: Vec<T>,
    gauss_weights: Vec<T>,
    n_lon: usize,
    #[serde(skip)]
    plm: Vec<T>,
    #[serde(skip)]
    dplm: Vec<T>,
    #[serde(skip)]
    cos_table: Vec<T>,
    #[serde(skip)]
    sin_table: Vec<T>,
}

/// Builds the tables for truncation `L ≥ 1`.
pub fn build_basis<T: Real>(truncation: usize) -> Result<BasisTables<T>> {
    if truncation < 1 {
        return Err(invalid("truncation L must be at least 1"));
    }
    let n_lat = (3 * truncation + 1).div_ceil(2);
    let n_lon = (3 * truncation + 2).next_multiple_of(2);
    let (gauss_nodes, gauss_weights) = gauss_legendre::<T>(n_lat);
    let (plm, dplm) = tabulate(truncation, &gauss_nodes);

    let mut cos_table = vec![T::zero(); (truncation + 1) * n_lon];
    let mut sin_table = vec![T::zero(); (truncation + 1) * n_lon];
    for m in 0..=truncation {
        for k in 0..n_lon {
            // reduce m·k mod n_lon before forming the angle
            let phase = (m * k) % n_lon;
            let ang = T::of(2.0) * T::PI() * T::of_usize(phase) / T::of_usize(n_lon);
            cos_table[m * n_lon + k] = ang.cos();
            sin_table[m * n_lon + k] = ang.sin();
        }
    }
    Ok(BasisTables { truncation, gauss_nodes, gauss_weights, n_lon, plm, dplm, cos_table, sin_table })
}

impl<T: Real> BasisTables<T> {
    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    pub fn n_lat(&self) -> usize {
        self.gauss_nodes.len()
    }

    #[inline]
    pub fn n_lon(&self) -> usize {
        self.n_lon
    }

    /// Gauss nodes `μ_j = cos θ_j`, ascending.
    pub fn gauss_nodes(&self) -> &[T] {
        &self.gauss_nodes
    }

    pub fn gauss_weights(&self) -> &[T] {
        &self.gauss_weights
    }

    /// Longitude `φ_k = 2πk / n_lon`.
    pub fn longitude(&self, k: usize) -> T {
        T::of(2.0) * T::PI() * T::of_usize(k) / T::of_usize(self.n_lon)
    }

    /// `p̄_lm(μ_j)` for `0 ≤ m ≤ l ≤ L`.
    #[inline]
    pub fn plm(&self, l: usize, m: usize, j: usize) -> T {
        self.plm[self.table_row(l, m) * self.n_lat() + j]
    }

    /// `dp̄_lm/dμ` at node `j`.
    #[inline]
    pub fn dplm(&self, l: usize, m: usize, j: usize) -> T {
        self.dplm[self.table_row(l, m) * self.n_lat() + j]
    }

    #[inline]
    fn table_row(&self, l: usize, m: usize) -> usize {
        debug_assert!(m <= l && l <= self.truncation);
        order_offset(self.truncation, m) + l - m
    }

    /// Contiguous `p̄_lm(μ_j)` for `l = m..=L`, node-fastest.
    #[inline]
    pub(crate) fn plm_order(&self, m: usize) -> &[T] {
        let n = self.n_lat();
        let start = order_offset(self.truncation, m) * n;
        &self.plm[start..start + (self.truncation - m + 1) * n]
    }

    #[inline]
    pub(crate) fn dplm_order(&self, m: usize) -> &[T] {
        let n = self.n_lat();
        let start = order_offset(self.truncation, m) * n;
        &self.dplm[start..start + (self.truncation - m + 1) * n]
    }

    #[inline]
    pub(crate) fn cos_row(&self, m: usize) -> &[T] {
        &self.cos_table[m * self.n_lon..(m + 1) * self.n_lon]
    }

    #[inline]
    pub(crate) fn sin_row(&self, m: usize) -> &[T] {
        &self.sin_table[m * self.n_lon..(m + 1) * self.n_lon]
    }

    /// Samples `f(μ, φ)` on the grid.
    pub fn grid_from_fn(&self, f: impl Fn(T, T) -> T) -> GridField<T> {
        let mut g = GridField::zeros(self.n_lat(), self.n_lon);
        for (j, &mu) in self.gauss_nodes.iter().enumerate() {
            for k in 0..self.n_lon {
                g.values_mut()[j * self.n_lon + k] = f(mu, self.longitude(k));
            }
        }
        g
    }

    /// Quadrature of `∫ f dx` over the unit sphere.
    pub fn integrate(&self, f: &GridField<T>) -> Result<T> {
        self.check_grid(f)?;
        let dphi = T::of(2.0) * T::PI() / T::of_usize(self.n_lon);
        let total = (0..self.n_lat()).map(|j| self.gauss_weights[j] * f.row(j).iter().copied().sum::<T>()).sum::<T>();
        Ok(total * dphi)
    }

    pub(crate) fn check_grid(&self, f: &GridField<T>) -> Result<()> {
        if f.n_lat() != self.n_lat() || f.n_lon() != self.n_lon {
            return Err(invalid(format!(
                "grid {}×{} does not match tables {}×{}",
                f.n_lat(),
                f.n_lon(),
                self.n_lat(),
                self.n_lon
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_zero_truncation() {
        assert!(build_basis::<f64>(0).is_err());
    }

    #[test]
    fn grid_sizes_satisfy_dealiasing() {
        for l in 1..=42 {
            let t = build_basis::<f64>(l).unwrap();
            assert!(t.n_lon() > 3 * l && t.n_lon().is_multiple_of(2));
            assert!(2 * t.n_lat() > 3 * l);
        }
        let t = build_basis::<f64>(21).unwrap();
        assert_eq!((t.n_lat(), t.n_lon()), (32, 66));
    }

    #[test]
    fn l1_weights_sum_to_two() {
        let t = build_basis::<f64>(1).unwrap();
        assert!(t.n_lat() >= 2);
        let s: f64 = t.gauss_weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cos_squared_integral() {
        let t = build_basis::<f64>(21).unwrap();
        let g = t.grid_from_fn(|mu, _| mu * mu);
        let v = t.integrate(&g).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_tables() {
        let a = build_basis::<f64>(9).unwrap();
        let b = build_basis::<f64>(9).unwrap();
        assert_eq!(a.plm, b.plm);
        assert_eq!(a.gauss_nodes, b.gauss_nodes);
    }
}
