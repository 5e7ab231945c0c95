//! Closed-form extremals of the pseudo-energy at fixed relative enstrophy.
//!
//! Stationary points of `H + λ Γ_rel` solve the linear Euler–Lagrange
//! equation `[G - 2λ] w = ½ ΩC ψ_10`. Away from the bifurcation values
//! `λ = -1/[2l(l+1)]` the unique solution is the solid-body state
//! `k ψ_10` with `k = -ΩC / (2(½ + 2λ))`; at `λ = -1/[2l(l+1)]`, `l ≥ 2`,
//! the whole degree-`l` eigenspace joins as a kernel; `λ = -¼` with `Ω > 0`
//! is a pole with no solution. Imposing `‖w‖² = Q_rel` selects the two
//! branches `±√Q_rel ψ_10` with multipliers `λ± = -¼[1 ± ΩC/√Q_rel]`.

mod figures;
mod regime;

pub use figures::{coefficient_for_multiplier, figure_curves, CurvePoint, Curves, Figure, Sweep};
pub use regime::{classify_regime, critical_degree, regime_thresholds, spin_threshold, RegimeClass, RegimeKind};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::functionals::ModelParams;
use crate::scalar::Real;
use crate::spharm::{green_eigenvalue, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ProRotating,
    CounterRotating,
    Bifurcation(usize),
}

/// Solution set of the Euler–Lagrange equation at one multiplier value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElSolution<T> {
    /// Trivial kernel: the unique solid-body solution.
    Unique { lambda_rel: T, state: SpectralField<T> },
    /// `λ = -1/[2l(l+1)]`: `particular + span(kernel)`, kernel = `{e_lm : |m| ≤ l}`.
    Family { lambda_rel: T, degree: usize, particular: SpectralField<T>, kernel: Vec<SpectralField<T>> },
    /// `λ = -¼` with `Ω > 0`.
    NoSolution { lambda_rel: T },
}

impl<T: Real> ElSolution<T> {
    pub fn kernel_dimension(&self) -> usize {
        match self {
            Self::Family { kernel, .. } => kernel.len(),
            _ => 0,
        }
    }
}

/// Degree `l ≤ truncation` whose bifurcation value `-1/[2l(l+1)]` equals
/// `lambda_rel` to within 16 ulps, if any.
fn bifurcation_degree<T: Real>(lambda_rel: T, truncation: usize) -> Option<usize> {
    (1..=truncation).find(|&l| {
        let value = T::of(0.5) * green_eigenvalue::<T>(l);
        (lambda_rel - value).abs() <= T::epsilon() * T::of(16.0) * value.abs()
    })
}

/// Solves `[G - 2λ] w = ½ ΩC ψ_10` at truncation `L`.
pub fn solve_euler_lagrange<T: Real>(lambda_rel: T, p: &ModelParams<T>, truncation: usize) -> Result<ElSolution<T>> {
    if !lambda_rel.is_finite() {
        return Err(invalid("multiplier must be finite"));
    }
    if !p.omega.is_finite() || p.omega < T::zero() {
        return Err(invalid("spin rate must be finite and non-negative"));
    }
    if truncation < 1 {
        return Err(invalid("truncation must be at least 1"));
    }
    let degree = bifurcation_degree(lambda_rel, truncation);
    let kernel_of = |l: usize| -> Vec<SpectralField<T>> {
        (-(l as i64)..=l as i64)
            .map(|m| SpectralField::basis(truncation, l, m).expect("mode inside truncation"))
            .collect()
    };

    if degree == Some(1) {
        if p.omega > T::zero() {
            return Ok(ElSolution::NoSolution { lambda_rel });
        }
        return Ok(ElSolution::Family {
            lambda_rel,
            degree: 1,
            particular: SpectralField::zeros(truncation),
            kernel: kernel_of(1),
        });
    }

    let mut particular = SpectralField::zeros(truncation);
    particular.set(1, 0, coefficient_for_multiplier(lambda_rel, p))?;
    Ok(match degree {
        Some(l) => ElSolution::Family { lambda_rel, degree: l, particular, kernel: kernel_of(l) },
        None => ElSolution::Unique { lambda_rel, state: particular },
    })
}

/// Kernel residual `‖[G - 2λ] e‖` for a direction `e`.
pub fn operator_residual<T: Real>(w: &SpectralField<T>, lambda_rel: T) -> T {
    let two = T::of(2.0);
    w.iter_modes()
        .map(|(l, _, a)| {
            let r = (green_eigenvalue::<T>(l) - two * lambda_rel) * a;
            r * r
        })
        .sum::<T>()
        .sqrt()
}

/// `‖[G - 2λ] w - ½ ΩC e_10‖` in coefficient space.
pub fn euler_lagrange_residual<T: Real>(w: &SpectralField<T>, lambda_rel: T, p: &ModelParams<T>) -> T {
    let two = T::of(2.0);
    let rhs = T::of(0.5) * p.omega_c();
    w.iter_modes()
        .map(|(l, m, a)| {
            let mut r = (green_eigenvalue::<T>(l) - two * lambda_rel) * a;
            if l == 1 && m == 0 {
                r -= rhs;
            }
            r * r
        })
        .sum::<T>()
        .sqrt()
}

/// `(λ⁺, λ⁻) = (-¼[1 + ΩC/√Q_rel], -¼[1 - ΩC/√Q_rel])`.
pub fn multipliers<T: Real>(p: &ModelParams<T>) -> Result<(T, T)> {
    if p.q_rel.is_nan() || p.q_rel <= T::zero() {
        return Err(invalid("relative enstrophy must be positive"));
    }
    let r = p.omega_c() / p.q_rel.sqrt();
    let q = T::of(0.25);
    Ok((-q * (T::one() + r), -q * (T::one() - r)))
}

/// Pseudo-energy of the solid-body extremal expressed through its multiplier,
/// `-Ω²C² (1 + 8λ) / [16 (½ + 2λ)²]`. Undefined for `Ω = 0`.
pub fn energy_from_multiplier<T: Real>(lambda_rel: T, p: &ModelParams<T>) -> T {
    let oc = p.omega_c();
    let d = T::of(0.5) + T::of(2.0) * lambda_rel;
    -oc * oc * (T::one() + T::of(8.0) * lambda_rel) / (T::of(16.0) * d * d)
}

/// One constrained extremal with its multiplier, energies and character.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport<T> {
    pub branch: Branch,
    pub lambda_rel: T,
    pub state: SpectralField<T>,
    /// Pseudo-energy `H`.
    pub energy_original: T,
    /// `H - H₀ = ¼(α_10 + ΩC)²`.
    pub energy_shifted: T,
    pub regime: RegimeClass<T>,
    pub params: ModelParams<T>,
}

/// The pro-rotating maximizer `+√Q ψ_10` and the counter-rotating `-√Q ψ_10`.
pub fn extremal_states<T: Real>(
    p: &ModelParams<T>,
    truncation: usize,
) -> Result<(ExtremalReport<T>, ExtremalReport<T>)> {
    if truncation < 1 {
        return Err(invalid("truncation must be at least 1"));
    }
    let (lp, lm) = multipliers(p)?;
    let sq = p.q_rel.sqrt();
    let oc = p.omega_c();
    let quarter = T::of(0.25);
    let half = T::of(0.5);

    let state = |sign: T| {
        let mut w = SpectralField::zeros(truncation);
        w.set(1, 0, sign * sq).expect("l = 1 inside truncation");
        w
    };
    let max = ExtremalReport {
        branch: Branch::ProRotating,
        lambda_rel: lp,
        state: state(T::one()),
        energy_original: quarter * p.q_rel + half * oc * sq,
        energy_shifted: quarter * (sq + oc) * (sq + oc),
        regime: regime::global_max(p),
        params: *p,
    };
    let min = ExtremalReport {
        branch: Branch::CounterRotating,
        lambda_rel: lm,
        state: state(-T::one()),
        energy_original: quarter * p.q_rel - half * oc * sq,
        energy_shifted: quarter * (oc - sq) * (oc - sq),
        regime: classify_regime(p),
        params: *p,
    };
    Ok((max, min))
}
