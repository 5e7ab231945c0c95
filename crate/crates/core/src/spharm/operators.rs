use super::field::SpectralField;
use crate::scalar::Real;

/// Laplace–Beltrami eigenvalue on degree `l`: `-l(l+1)`.
#[inline]
pub fn laplacian_eigenvalue<T: Real>(l: usize) -> T {
    -T::of_usize(l * (l + 1))
}

/// Eigenvalue of the Green operator `G = Δ⁻¹` on degree `l ≥ 1`: `-1/[l(l+1)]`.
#[inline]
pub fn green_eigenvalue<T: Real>(l: usize) -> T {
    -T::one() / T::of_usize(l * (l + 1))
}

/// `α_lm ↦ -l(l+1) α_lm`.
pub fn apply_laplacian<T: Real>(w: &SpectralField<T>) -> SpectralField<T> {
    w.map_modes(|l, _, a| laplacian_eigenvalue::<T>(l) * a)
}

/// Stream function `ψ = G w`: `α_lm ↦ -α_lm / [l(l+1)]`.
pub fn apply_green<T: Real>(w: &SpectralField<T>) -> SpectralField<T> {
    w.map_modes(|l, _, a| a / laplacian_eigenvalue::<T>(l))
}
