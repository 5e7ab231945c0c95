//! Real spherical-harmonic basis on the unit sphere: Gauss–Legendre grid,
//! transforms, and the spectral Laplacian and Green operators.

mod basis;
mod field;
mod legendre;
mod operators;
mod quadrature;
mod transform;

pub use basis::{build_basis, BasisTables};
pub use field::{mode_count, mode_index, modes, GridField, SpectralField};
pub use operators::{apply_green, apply_laplacian, green_eigenvalue, laplacian_eigenvalue};
pub use quadrature::gauss_legendre;
pub use transform::{analyze, inner_product, synthesize};

pub(crate) use transform::{analyze_with_mean, synthesize_component, Component};

use crate::scalar::Real;

/// Evaluates the expansion of `w` at a single point `(μ, φ)`.
///
/// Independent of the grid transforms; intended for spot checks.
pub fn evaluate<T: Real>(w: &SpectralField<T>, mu: T, phi: T) -> T {
    let lmax = w.truncation();
    let (p, _) = legendre::tabulate(lmax, &[mu]);
    let mut sum = T::zero();
    for (l, m, a) in w.iter_modes() {
        let am = m.unsigned_abs() as usize;
        let pl = p[legendre::order_offset(lmax, am) + l - am];
        let angular = match m {
            0 => T::one(),
            m if m > 0 => T::SQRT_2() * (T::of_usize(am) * phi).cos(),
            _ => T::SQRT_2() * (T::of_usize(am) * phi).sin(),
        };
        sum += a * pl * angular;
    }
    sum
}
