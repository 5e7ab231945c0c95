//! Pseudospectral Jacobian `J(a, b) = a_φ b_μ - a_μ b_φ`.

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spharm::{analyze_with_mean, synthesize_component, BasisTables, Component, GridField, SpectralField};

/// `J(ψ, q)` on the grid. Both derivative pairs are synthesized exactly from
/// the spectral coefficients.
pub fn jacobian_grid<T: Real>(
    psi: &SpectralField<T>,
    q: &SpectralField<T>,
    tables: &BasisTables<T>,
) -> Result<GridField<T>> {
    if psi.truncation() != q.truncation() {
        return Err(invalid(format!("truncation mismatch: ψ at {} vs q at {}", psi.truncation(), q.truncation())));
    }
    let a_phi = synthesize_component(psi, tables, Component::DPhi)?;
    let a_mu = synthesize_component(psi, tables, Component::DMu)?;
    let b_phi = synthesize_component(q, tables, Component::DPhi)?;
    let b_mu = synthesize_component(q, tables, Component::DMu)?;
    let values = a_phi
        .values()
        .iter()
        .zip(b_mu.values())
        .zip(a_mu.values().iter().zip(b_phi.values()))
        .map(|((&ap, &bm), (&am, &bp))| ap * bm - am * bp)
        .collect();
    GridField::from_values(tables.n_lat(), tables.n_lon(), values)
}

/// Spectral coefficients of `J(ψ, q)` on degrees `1..=L`.
///
/// The grid must resolve the cubic products in the projection, which the
/// standard tables do. The `l = 0` part vanishes analytically and is dropped.
pub fn jacobian<T: Real>(
    psi: &SpectralField<T>,
    q: &SpectralField<T>,
    tables: &BasisTables<T>,
) -> Result<SpectralField<T>> {
    let j = jacobian_grid(psi, q, tables)?;
    let (_, out) = analyze_with_mean(&j, tables)?;
    Ok(out.resized(psi.truncation()))
}
