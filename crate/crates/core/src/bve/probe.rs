//! Energy–enstrophy stability probes around the solid-body extremals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::integrator::{Integrator, TrajectoryLog};
use crate::error::{invalid, Result};
use crate::functionals::ModelParams;
use crate::oracle::stationary_multiplier;
use crate::scalar::Real;
use crate::spharm::{BasisTables, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseState<T> {
    /// `+√Q e_10`
    WMax,
    /// `-√Q e_10`
    WMin,
    /// Any stationary point of `H + λ Γ_rel` on the enstrophy sphere.
    Custom(SpectralField<T>),
}

impl<T: Real> BaseState<T> {
    /// The base field at truncation `L`, validated as an extremal.
    pub fn resolve(&self, p: &ModelParams<T>, truncation: usize) -> Result<SpectralField<T>> {
        let solid = |sign: T| {
            let mut w = SpectralField::zeros(truncation);
            w.set(1, 0, sign * p.q_rel.sqrt()).map(|_| w)
        };
        match self {
            Self::WMax => solid(T::one()),
            Self::WMin => solid(-T::one()),
            Self::Custom(w) => {
                if w.truncation() != truncation {
                    return Err(invalid("custom base truncation differs from the run truncation"));
                }
                let q = w.norm_sq();
                if (q - p.q_rel).abs() > T::tol(1e-8) * p.q_rel {
                    return Err(invalid(format!("custom base has ‖w‖² = {q}, expected Q_rel = {}", p.q_rel)));
                }
                let (_, residual) = stationary_multiplier(w, p)?;
                if residual > T::tol(1e-8) {
                    return Err(invalid(format!("custom base is not an extremal (residual {:e})", residual.as_f64())));
                }
                Ok(w.clone())
            }
        }
    }
}

/// Perturbation of an extremal: listed `(l, m, amplitude)` modes, optionally
/// with random phases and rescaled to a prescribed norm `‖Δw‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationSpec<T> {
    pub base: BaseState<T>,
    pub modes: Vec<(usize, i64, T)>,
    /// When set, each `(l, m)` amplitude with `m ≠ 0` is split between
    /// `(l, |m|)` and `(l, -|m|)` by a random phase.
    pub phase_seed: Option<u64>,
    pub target_norm: Option<T>,
}

impl<T: Real> PerturbationSpec<T> {
    pub fn perturbation(&self, truncation: usize) -> Result<SpectralField<T>> {
        let mut d = SpectralField::zeros(truncation);
        let mut rng = self.phase_seed.map(ChaCha8Rng::seed_from_u64);
        for &(l, m, a) in &self.modes {
            if l == 0 || l > truncation || m.unsigned_abs() as usize > l {
                return Err(invalid(format!("perturbation mode ({l}, {m}) invalid at truncation {truncation}")));
            }
            match (&mut rng, m) {
                (Some(r), m) if m != 0 => {
                    let ph = T::of(r.random::<f64>() * std::f64::consts::TAU);
                    let am = m.abs();
                    d.set(l, am, d.get(l, am) + a * ph.cos())?;
                    d.set(l, -am, d.get(l, -am) + a * ph.sin())?;
                }
                _ => d.set(l, m, d.get(l, m) + a)?,
            }
        }
        if let Some(target) = self.target_norm {
            let n = d.norm();
            if n == T::zero() {
                return Err(invalid("cannot rescale a zero perturbation"));
            }
            d = d.scaled(target / n);
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    /// `sup (Q1+Q2) ≤ 1.05 (Q1+Q2)(0)`
    Stable,
    /// Total or tilt deviation grew tenfold.
    Unstable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOutcome<T> {
    pub verdict: ProbeVerdict,
    /// `sup_t (Q1+Q2)(t) / (Q1+Q2)(0)`
    pub max_ratio: T,
    /// `sup_t tilt(t) / tilt(0)`, with `Q2(0)` as reference when `tilt(0) = 0`.
    pub max_tilt_ratio: T,
    pub log: TrajectoryLog<T>,
}

pub const STABLE_SLACK: f64 = 0.05;
pub const GROWTH_FACTOR: f64 = 10.0;

/// Evolves `base + Δw` and classifies the deviation history.
pub fn stability_probe<T: Real>(
    spec: &PerturbationSpec<T>,
    p: &ModelParams<T>,
    tables: &BasisTables<T>,
    dt: T,
    t_end: T,
    sample_every: usize,
) -> Result<ProbeOutcome<T>> {
    let l_max = tables.truncation();
    let base = spec.base.resolve(p, l_max)?;
    let d = spec.perturbation(l_max)?;
    let w0 = &base + &d;
    let log = Integrator::new(*p, tables).run(&w0, dt, t_end, sample_every, Some(&base))?;

    let first = log.monitors[0];
    let n0 = first.q1_plus_q2();
    let max_ratio = log.monitors.iter().map(|m| m.q1_plus_q2() / n0).fold(T::zero(), T::max);
    let tilt_ref = if first.tilt > T::zero() { first.tilt } else { first.q2 };
    let max_tilt_ratio = log.monitors.iter().map(|m| m.tilt / tilt_ref).fold(T::zero(), T::max);
    let growth = T::of(GROWTH_FACTOR);
    let verdict = if log.blown_up || max_ratio >= growth || max_tilt_ratio >= growth {
        ProbeVerdict::Unstable
    } else if max_ratio <= T::one() + T::of(STABLE_SLACK) {
        ProbeVerdict::Stable
    } else {
        ProbeVerdict::Inconclusive
    };
    Ok(ProbeOutcome { verdict, max_ratio, max_tilt_ratio, log })
}
