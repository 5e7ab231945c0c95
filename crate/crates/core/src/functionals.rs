//! Scalar functionals of the relative vorticity: kinetic and pseudo-energy,
//! the shifted positive-definite energy, enstrophies, angular momentum and
//! the angular-momentum bound at fixed relative enstrophy.
//!
//! Unit sphere, unit mass density. With `C = ‖cos θ‖₂` and `cos θ = C ψ_10`:
//!
//! * `E[w] = ½ Σ α_lm² / [l(l+1)]`
//! * `Λ[w] = α_10 C / 2`, physical moment `⟨w, cos θ⟩ = α_10 C`
//! * `H[w] = E[w] + Ω Λ[w]`
//! * `H[w] - H₀ = ¼(α_10 + ΩC)² + ¼(α_11² + α_1,-1²) + ½ Σ_{l>1} α_lm²/[l(l+1)]`,
//!   `H₀ = -¼ Ω² C²`
//! * `Γ[q] = ‖w + 2Ω cos θ‖² = Σ α_lm² + 4Ω α_10 C + 4Ω²C²`

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::{cos_theta_norm, Real};
use crate::spharm::{synthesize, BasisTables, SpectralField};

/// Spin rate, relative-enstrophy budget and `C = ‖cos θ‖₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams<T> {
    pub omega: T,
    pub q_rel: T,
    pub c_const: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, q_rel: T) -> Result<Self> {
        if !omega.is_finite() || omega < T::zero() {
            return Err(invalid(format!("spin rate must be finite and non-negative, got {omega}")));
        }
        if !q_rel.is_finite() || q_rel <= T::zero() {
            return Err(invalid(format!("relative enstrophy Q_rel must be finite and positive, got {q_rel}")));
        }
        Ok(Self { omega, q_rel, c_const: cos_theta_norm() })
    }

    /// `ΩC`, the offset of the energy ellipsoid's centre along `ψ_10`.
    #[inline]
    pub fn omega_c(&self) -> T {
        self.omega * self.c_const
    }

    /// Checks `C` against the quadrature value of `‖cos θ‖₂` on `tables`.
    pub fn check_c_const(&self, tables: &BasisTables<T>) -> Result<()> {
        let g = tables.grid_from_fn(|mu, _| mu * mu);
        let c = tables.integrate(&g)?.sqrt();
        if (c - self.c_const).abs() > T::tol(1e-12) {
            return Err(invalid(format!("quadrature ‖cos θ‖ = {c} disagrees with C = {}", self.c_const)));
        }
        Ok(())
    }
}

/// Kinetic energy of the relative motion, `E[w] = -½⟨w, G w⟩`.
pub fn kinetic_energy<T: Real>(w: &SpectralField<T>) -> T {
    let half = T::of(0.5);
    w.iter_modes().map(|(l, _, a)| half * a * a / T::of_usize(l * (l + 1))).sum()
}

/// `Λ[w] = -C⟨ψ_10, G w⟩ = α_10 C / 2`.
pub fn angular_momentum<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> T {
    w.get(1, 0) * p.c_const * T::of(0.5)
}

/// Physical angular momentum `⟨w, cos θ⟩ = α_10 C` (unit density).
pub fn physical_angular_momentum<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> T {
    w.get(1, 0) * p.c_const
}

/// Pseudo-energy `H = E[w] + Ω Λ[w]`.
pub fn pseudo_energy<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> T {
    kinetic_energy(w) + p.omega * angular_momentum(w, p)
}

/// The constant `H₀ = -¼ Ω² C²` separating `H` from its shifted form.
pub fn energy_offset<T: Real>(p: &ModelParams<T>) -> T {
    let oc = p.omega_c();
    -T::of(0.25) * oc * oc
}

/// The positive-definite shifted energy `H - H₀`, evaluated as a sum of squares.
pub fn shifted_energy<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> T {
    let quarter = T::of(0.25);
    let half = T::of(0.5);
    let d = w.get(1, 0) + p.omega_c();
    let rest: T = w
        .iter_modes()
        .map(|(l, m, a)| match (l, m) {
            (1, 0) => T::zero(),
            (1, _) => quarter * a * a,
            _ => half * a * a / T::of_usize(l * (l + 1)),
        })
        .sum();
    quarter * d * d + rest
}

/// `(relative, total)` enstrophy: `Σ α²` and `‖w + 2Ω cos θ‖²`.
pub fn enstrophies<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> (T, T) {
    let rel = w.norm_sq();
    let four = T::of(4.0);
    let oc = p.omega_c();
    let total = rel + four * p.omega * physical_angular_momentum(w, p) + four * oc * oc;
    (rel, total)
}

/// Total circulation `∫ w dx` by quadrature; zero up to round-off for any
/// `SpectralField`.
pub fn circulation<T: Real>(w: &SpectralField<T>, tables: &BasisTables<T>) -> Result<T> {
    tables.integrate(&synthesize(w, tables)?)
}

/// Every functional of one state at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalReport<T> {
    pub energy_e: T,
    pub angular_momentum_lambda: T,
    pub pseudo_energy_h: T,
    pub shifted_h: T,
    pub rel_enstrophy: T,
    pub total_enstrophy: T,
    pub circulation: T,
}

impl<T: Real> FunctionalReport<T> {
    /// Spectral evaluation; `circulation` is structurally zero.
    pub fn evaluate(w: &SpectralField<T>, p: &ModelParams<T>) -> Self {
        let (rel, total) = enstrophies(w, p);
        Self {
            energy_e: kinetic_energy(w),
            angular_momentum_lambda: angular_momentum(w, p),
            pseudo_energy_h: pseudo_energy(w, p),
            shifted_h: shifted_energy(w, p),
            rel_enstrophy: rel,
            total_enstrophy: total,
            circulation: T::zero(),
        }
    }

    /// As [`FunctionalReport::evaluate`], with circulation measured by quadrature.
    pub fn evaluate_on_grid(w: &SpectralField<T>, p: &ModelParams<T>, tables: &BasisTables<T>) -> Result<Self> {
        let mut r = Self::evaluate(w, p);
        r.circulation = circulation(w, tables)?;
        Ok(r)
    }
}

/// Outcome of the angular-momentum bound `|⟨w, cos θ⟩| ≤ C √Q_rel`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumBound<T> {
    /// `⟨w, cos θ⟩`
    pub moment: T,
    /// `C √Q_rel`
    pub bound: T,
    /// `bound - |moment|`, non-negative.
    pub gap: T,
    /// The bound is attained, i.e. `w ∝ ψ_10`.
    pub saturated: bool,
}

/// Checks the angular-momentum inequality for a state on the enstrophy sphere.
///
/// Fails with [`Error::ConstraintViolation`] unless `|Σ α² - Q_rel| ≤ 1e-8`.
pub fn check_momentum_bound<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> Result<MomentumBound<T>> {
    let q = w.norm_sq();
    if (q - p.q_rel).abs() > T::tol(1e-8) {
        return Err(Error::ConstraintViolation { expected: p.q_rel.as_f64(), actual: q.as_f64() });
    }
    let moment = physical_angular_momentum(w, p);
    let bound = p.c_const * p.q_rel.sqrt();
    let gap = (bound - moment.abs()).max(T::zero());
    let saturated = gap <= T::tol(1e-12) * bound.max(T::one());
    Ok(MomentumBound { moment, bound, gap, saturated })
}
