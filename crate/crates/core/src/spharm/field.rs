//! Spectral and grid representations of scalar fields on the unit sphere.

use std::ops::{Add, Mul, Neg, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Flat index of mode `(l, m)`, `l ≥ 1`, `|m| ≤ l`.
#[inline]
pub fn mode_index(l: usize, m: i64) -> usize {
    debug_assert!(l >= 1 && m.unsigned_abs() as usize <= l);
    ((l * (l + 1)) as i64 - 1 + m) as usize
}

/// Number of modes `1 ≤ l ≤ L`, `|m| ≤ l`.
#[inline]
pub fn mode_count(truncation: usize) -> usize {
    (truncation + 1) * (truncation + 1) - 1
}

/// Iterates `(l, m)` in storage order.
pub fn modes(truncation: usize) -> impl Iterator<Item = (usize, i64)> {
    (1..=truncation).flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
}

/// Coefficients `α_lm` of a zero-mean field in the real orthonormal harmonic
/// basis, triangularly truncated at degree `L`.
///
/// The `l = 0` coefficient is not stored: every `SpectralField` has zero
/// total circulation. `m > 0` indexes `cos mφ` harmonics and `m < 0` the
/// `sin |m|φ` ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralField<T> {
    truncation: usize,
    coeffs: Vec<T>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(truncation: usize) -> Self {
        Self { truncation, coeffs: vec![T::zero(); mode_count(truncation)] }
    }

    pub fn from_coeffs(truncation: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != mode_count(truncation) {
            return Err(invalid(format!(
                "expected {} coefficients for truncation {truncation}, got {}",
                mode_count(truncation),
                coeffs.len()
            )));
        }
        Ok(Self { truncation, coeffs })
    }

    /// The unit vector `e_lm`.
    pub fn basis(truncation: usize, l: usize, m: i64) -> Result<Self> {
        let mut w = Self::zeros(truncation);
        w.set(l, m, T::one())?;
        Ok(w)
    }

    /// Builds a field from `(l, m, value)` triples; repeated modes accumulate.
    pub fn from_modes(truncation: usize, entries: &[(usize, i64, T)]) -> Result<Self> {
        let mut w = Self::zeros(truncation);
        for &(l, m, v) in entries {
            let i = w.index(l, m).ok_or_else(|| invalid(format!("mode ({l}, {m}) outside truncation {truncation}")))?;
            w.coeffs[i] += v;
        }
        Ok(w)
    }

    /// Gaussian random coefficients with standard deviation `l^(-decay)`.
    pub fn random(truncation: usize, seed: u64, decay: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = modes(truncation)
            .map(|(l, _)| {
                let z: f64 = StandardNormal.sample(&mut rng);
                T::of(z * (l as f64).powf(-decay))
            })
            .collect();
        Self { truncation, coeffs }
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn index(&self, l: usize, m: i64) -> Option<usize> {
        (l >= 1 && l <= self.truncation && m.unsigned_abs() as usize <= l).then(|| mode_index(l, m))
    }

    /// `α_lm`, or zero for modes outside the truncation.
    pub fn get(&self, l: usize, m: i64) -> T {
        self.index(l, m).map_or(T::zero(), |i| self.coeffs[i])
    }

    pub fn set(&mut self, l: usize, m: i64, value: T) -> Result<()> {
        let i = self
            .index(l, m)
            .ok_or_else(|| invalid(format!("mode ({l}, {m}) outside truncation {}", self.truncation)))?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// `(l, m, α_lm)` in storage order.
    pub fn iter_modes(&self) -> impl Iterator<Item = (usize, i64, T)> + '_ {
        modes(self.truncation).zip(&self.coeffs).map(|((l, m), &v)| (l, m, v))
    }

    /// `‖w‖₂² = Σ α_lm²`.
    pub fn norm_sq(&self) -> T {
        self.coeffs.iter().map(|&a| a * a).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Coefficient-space inner product; both fields must share a truncation.
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.check_same(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a * b).sum())
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { truncation: self.truncation, coeffs: self.coeffs.iter().map(|&a| a * s).collect() }
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: T, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(())
    }

    /// Applies `f(l, m, α_lm)` to every coefficient.
    pub fn map_modes(&self, f: impl Fn(usize, i64, T) -> T) -> Self {
        let coeffs = self.iter_modes().map(|(l, m, v)| f(l, m, v)).collect();
        Self { truncation: self.truncation, coeffs }
    }

    /// Zero-pads or truncates to a new truncation degree.
    pub fn resized(&self, truncation: usize) -> Self {
        let mut out = Self::zeros(truncation);
        let keep = mode_count(truncation.min(self.truncation));
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_finite())
    }

    /// True when every coefficient with `m ≠ 0` vanishes exactly.
    pub fn is_zonal(&self) -> bool {
        self.iter_modes().all(|(_, m, v)| m == 0 || v == T::zero())
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(invalid(format!("truncation mismatch: {} vs {}", self.truncation, other.truncation)));
        }
        Ok(())
    }
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;

    /// Panics on truncation mismatch; use [`SpectralField::axpy`] for a checked sum.
    fn add(self, rhs: Self) -> SpectralField<T> {
        let mut out = self.clone();
        out.axpy(T::one(), rhs).expect("truncation mismatch in field sum");
        out
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn sub(self, rhs: Self) -> SpectralField<T> {
        let mut out = self.clone();
        out.axpy(-T::one(), rhs).expect("truncation mismatch in field difference");
        out
    }
}

impl<T: Real> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn mul(self, s: T) -> SpectralField<T> {
        self.scaled(s)
    }
}

impl<T: Real> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn neg(self) -> SpectralField<T> {
        self.scaled(-T::one())
    }
}

/// Values on the Gauss-node × equispaced-longitude grid, row-major by node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField<T> {
    n_lat: usize,
    n_lon: usize,
    values: Vec<T>,
}

impl<T: Real> GridField<T> {
    pub fn zeros(n_lat: usize, n_lon: usize) -> Self {
        Self { n_lat, n_lon, values: vec![T::zero(); n_lat * n_lon] }
    }

    pub fn from_values(n_lat: usize, n_lon: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n_lat * n_lon {
            return Err(invalid(format!(
                "grid of {n_lat}×{n_lon} needs {} values, got {}",
                n_lat * n_lon,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("grid values must be finite"));
        }
        Ok(Self { n_lat, n_lon, values })
    }

    #[inline]
    pub fn n_lat(&self) -> usize {
        self.n_lat
    }

    #[inline]
    pub fn n_lon(&self) -> usize {
        self.n_lon
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Value at node `j`, longitude `k`.
    #[inline]
    pub fn at(&self, j: usize, k: usize) -> T {
        self.values[j * self.n_lon + k]
    }

    #[inline]
    pub(crate) fn row(&self, j: usize) -> &[T] {
        &self.values[j * self.n_lon..(j + 1) * self.n_lon]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.values[j * self.n_lon..(j + 1) * self.n_lon]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n_lat == other.n_lat && self.n_lon == other.n_lon
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(invalid("grid shape mismatch"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a * b).collect();
        Ok(Self { n_lat: self.n_lat, n_lon: self.n_lon, values })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_layout() {
        assert_eq!(mode_index(1, -1), 0);
        assert_eq!(mode_index(1, 0), 1);
        assert_eq!(mode_index(1, 1), 2);
        assert_eq!(mode_index(2, -2), 3);
        assert_eq!(mode_index(3, 3), mode_count(3) - 1);
        let all: Vec<_> = modes(4).collect();
        assert_eq!(all.len(), mode_count(4));
        for (i, &(l, m)) in all.iter().enumerate() {
            assert_eq!(mode_index(l, m), i);
        }
    }

    #[test]
    fn set_outside_truncation_fails() {
        let mut w = SpectralField::<f64>::zeros(3);
        assert!(w.set(4, 0, 1.0).is_err());
        assert!(w.set(2, 3, 1.0).is_err());
        assert!(w.set(0, 0, 1.0).is_err());
        assert_eq!(w.get(9, 0), 0.0);
    }

    #[test]
    fn resize_keeps_low_modes() {
        let w = SpectralField::<f64>::random(5, 3, 1.0);
        let up = w.resized(8);
        let down = up.resized(5);
        assert_eq!(w, down);
        assert_eq!(up.get(7, 2), 0.0);
    }

    #[test]
    fn random_is_deterministic() {
        let a = SpectralField::<f64>::random(6, 11, 1.0);
        let b = SpectralField::<f64>::random(6, 11, 1.0);
        let c = SpectralField::<f64>::random(6, 12, 1.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
