//! Classic RK4 stepping of `∂w/∂t = -J(ψ, w + 2Ωμ)`, `ψ = G w`.

use serde::Serialize;

use super::jacobian::jacobian;
use crate::error::{invalid, Result};
use crate::functionals::{angular_momentum, enstrophies, kinetic_energy, pseudo_energy, ModelParams};
use crate::output::csv_line;
use crate::scalar::Real;
use crate::spharm::{apply_green, BasisTables, SpectralField};

/// Diagnostics recorded at one sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monitor<T> {
    pub t: T,
    /// Pseudo-energy `H`.
    pub h: T,
    pub total_enstrophy: T,
    /// `Λ = α_10 C / 2`.
    pub ang_mom: T,
    /// Energy of the deviation from the base state.
    pub q1: T,
    /// Relative enstrophy of the deviation.
    pub q2: T,
    /// `Σ ᾱ²` over the `(1, ±1)` modes of the deviation.
    pub tilt: T,
}

impl<T: Real> Monitor<T> {
    pub fn q1_plus_q2(&self) -> T {
        self.q1 + self.q2
    }
}

/// Sampled trajectory with conservation and deviation monitors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryLog<T> {
    pub params: ModelParams<T>,
    pub truncation: usize,
    pub dt: T,
    pub t_end: T,
    pub filter: bool,
    pub blown_up: bool,
    pub times: Vec<T>,
    pub monitors: Vec<Monitor<T>>,
    #[serde(skip)]
    pub states: Vec<SpectralField<T>>,
}

pub const TRAJECTORY_COLUMNS: &str = "t,H,total_enstrophy,ang_mom,q1,q2,q1_plus_q2";

impl<T: Real> TrajectoryLog<T> {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{TRAJECTORY_COLUMNS}\n");
        for m in &self.monitors {
            s.push_str(&csv_line(
                &[m.t, m.h, m.total_enstrophy, m.ang_mom, m.q1, m.q2, m.q1_plus_q2()].map(|v| v.as_f64()),
            ));
        }
        s
    }

    /// Largest `|x(t) - x(0)| / |x(0)|` of a monitored quantity.
    pub fn max_relative_drift(&self, f: impl Fn(&Monitor<T>) -> T) -> T {
        let Some(first) = self.monitors.first() else { return T::zero() };
        let x0 = f(first);
        self.monitors.iter().map(|m| (f(m) - x0).abs() / x0.abs()).fold(T::zero(), T::max)
    }

    pub fn final_state(&self) -> Option<&SpectralField<T>> {
        self.states.last()
    }
}

/// Deviation energy `Q1 = ᾱ_10²/4 + ½ Σ_{lm≠10} ᾱ²/[l(l+1)]` (equal to `E[Δw]`),
/// deviation enstrophy `Q2 = ‖Δw‖²`, and the `(1, ±1)` part of `Q2`.
pub fn perturbation_norms<T: Real>(w: &SpectralField<T>, base: &SpectralField<T>) -> Result<(T, T, T)> {
    base.check_same(w)?;
    let d = w - base;
    let tilt = d.get(1, 1) * d.get(1, 1) + d.get(1, -1) * d.get(1, -1);
    Ok((kinetic_energy(&d), d.norm_sq(), tilt))
}

pub struct Integrator<'a, T> {
    params: ModelParams<T>,
    tables: &'a BasisTables<T>,
    filter: Option<Vec<T>>,
}

impl<'a, T: Real> Integrator<'a, T> {
    pub fn new(params: ModelParams<T>, tables: &'a BasisTables<T>) -> Self {
        Self { params, tables, filter: None }
    }

    /// Enables an exponential damping `exp(-36 ((l - l_c)/(L - l_c))⁸)` for
    /// `l > l_c = ⌊0.9 L⌋`, applied after every step. Conservation no longer holds.
    pub fn with_filter(mut self, enabled: bool) -> Self {
        self.filter = enabled.then(|| {
            let l_max = self.tables.truncation();
            let lc = (0.9 * l_max as f64).floor() as usize;
            (0..=l_max)
                .map(|l| {
                    if l <= lc || l_max == lc {
                        T::one()
                    } else {
                        let x = (l - lc) as f64 / (l_max - lc) as f64;
                        T::of((-36.0 * x.powi(8)).exp())
                    }
                })
                .collect()
        });
        self
    }

    pub fn filter_enabled(&self) -> bool {
        self.filter.is_some()
    }

    /// `-J(G w, w + 2ΩC e_10)`.
    pub fn rhs(&self, w: &SpectralField<T>) -> Result<SpectralField<T>> {
        let psi = apply_green(w);
        let mut q = w.clone();
        q.set(1, 0, q.get(1, 0) + T::of(2.0) * self.params.omega_c())?;
        Ok(-&jacobian(&psi, &q, self.tables)?)
    }

    /// One RK4 step of size `dt` (either sign).
    pub fn step(&self, w: &SpectralField<T>, dt: T) -> Result<SpectralField<T>> {
        let half = T::of(0.5) * dt;
        let k1 = self.rhs(w)?;
        let mut y = w.clone();
        y.axpy(half, &k1)?;
        let k2 = self.rhs(&y)?;
        let mut y = w.clone();
        y.axpy(half, &k2)?;
        let k3 = self.rhs(&y)?;
        let mut y = w.clone();
        y.axpy(dt, &k3)?;
        let k4 = self.rhs(&y)?;
        let sixth = dt / T::of(6.0);
        let mut out = w.clone();
        out.axpy(sixth, &k1)?;
        out.axpy(T::of(2.0) * sixth, &k2)?;
        out.axpy(T::of(2.0) * sixth, &k3)?;
        out.axpy(sixth, &k4)?;
        if let Some(f) = &self.filter {
            out = out.map_modes(|l, _, a| a * f[l]);
        }
        Ok(out)
    }

    fn monitor(&self, t: T, w: &SpectralField<T>, base: &SpectralField<T>) -> Result<Monitor<T>> {
        let (q1, q2, tilt) = perturbation_norms(w, base)?;
        Ok(Monitor {
            t,
            h: pseudo_energy(w, &self.params),
            total_enstrophy: enstrophies(w, &self.params).1,
            ang_mom: angular_momentum(w, &self.params),
            q1,
            q2,
            tilt,
        })
    }

    /// Integrates from `t = 0` to `t_end` with `n = ⌈t_end/dt⌉` equal steps of
    /// `t_end/n`, sampling every `sample_every` steps and at the end.
    ///
    /// Deviation monitors are taken against `base` (zero when `None`). A
    /// non-finite state stops the run and sets `blown_up`; the samples so far
    /// are kept.
    pub fn run(
        &self,
        w0: &SpectralField<T>,
        dt: T,
        t_end: T,
        sample_every: usize,
        base: Option<&SpectralField<T>>,
    ) -> Result<TrajectoryLog<T>> {
        if dt <= T::zero() || !dt.is_finite() {
            return Err(invalid("time step must be positive"));
        }
        if t_end <= T::zero() || !t_end.is_finite() {
            return Err(invalid("end time must be positive"));
        }
        if sample_every == 0 {
            return Err(invalid("sample interval must be at least one step"));
        }
        if w0.truncation() > self.tables.truncation() {
            return Err(invalid("initial state exceeds the grid truncation"));
        }
        if !w0.is_finite() {
            return Err(invalid("initial state is not finite"));
        }
        let zero = SpectralField::zeros(w0.truncation());
        let base = base.unwrap_or(&zero);
        let n = (t_end / dt - T::of(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
        let h = t_end / T::of_usize(n);

        let mut log = TrajectoryLog {
            params: self.params,
            truncation: w0.truncation(),
            dt: h,
            t_end,
            filter: self.filter_enabled(),
            blown_up: false,
            times: vec![T::zero()],
            monitors: vec![self.monitor(T::zero(), w0, base)?],
            states: vec![w0.clone()],
        };
        let mut w = w0.clone();
        for k in 1..=n {
            w = self.step(&w, h)?;
            if !w.is_finite() {
                log.blown_up = true;
                break;
            }
            if k % sample_every == 0 || k == n {
                let t = T::of_usize(k) * h;
                log.times.push(t);
                log.monitors.push(self.monitor(t, &w, base)?);
                log.states.push(w.clone());
            }
        }
        Ok(log)
    }
}

/// [`Integrator::run`] without filtering.
pub fn integrate<T: Real>(
    w0: &SpectralField<T>,
    p: &ModelParams<T>,
    tables: &BasisTables<T>,
    dt: T,
    t_end: T,
    sample_every: usize,
    base: Option<&SpectralField<T>>,
) -> Result<TrajectoryLog<T>> {
    Integrator::new(*p, tables).run(w0, dt, t_end, sample_every, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spharm::build_basis;

    fn p(omega: f64) -> ModelParams<f64> {
        ModelParams::new(omega, 1.0).unwrap()
    }

    #[test]
    fn solid_body_is_steady() {
        let t = build_basis::<f64>(10).unwrap();
        let w0 = SpectralField::from_modes(10, &[(1, 0, 1.7)]).unwrap();
        let log = integrate(&w0, &p(1.0), &t, 1e-2, 1.0, 10, None).unwrap();
        assert!((log.final_state().unwrap() - &w0).norm() < 1e-10);
    }

    #[test]
    fn rossby_haurwitz_phase() {
        let t = build_basis::<f64>(8).unwrap();
        let omega = 1.0;
        let (l, m) = (3usize, 2i64);
        let amp = 0.3;
        let w0 = SpectralField::from_modes(8, &[(l, m, amp)]).unwrap();
        let log = integrate(&w0, &p(omega), &t, 1e-3, 5.0, 1000, None).unwrap();
        let c = -2.0 * omega / (l * (l + 1)) as f64;
        for (time, w) in log.times.iter().zip(&log.states) {
            let ph = m as f64 * c * time;
            assert!((w.get(l, m) - amp * ph.cos()).abs() < 1e-6);
            assert!((w.get(l, -m) - amp * ph.sin()).abs() < 1e-6);
            let others = w.norm_sq() - w.get(l, m).powi(2) - w.get(l, -m).powi(2);
            assert!(others.abs() < 1e-12);
        }
    }

    #[test]
    fn zonal_state_stays_zonal() {
        let t = build_basis::<f64>(10).unwrap();
        let w0 = SpectralField::from_modes(10, &[(1, 0, 0.5), (2, 0, 1.0), (5, 0, -0.7)]).unwrap();
        let log = integrate(&w0, &p(0.6), &t, 1e-2, 0.5, 50, None).unwrap();
        assert!(log.final_state().unwrap().is_zonal());
    }

    #[test]
    fn perturbation_norm_identity() {
        // Q1 = H[b + d] - H[b] - DH[b]·d for H quadratic
        let par = p(0.9);
        let b = SpectralField::from_modes(6, &[(1, 0, 1.0)]).unwrap();
        let d = SpectralField::<f64>::random(6, 3, 1.0).scaled(1e-2);
        let w = &b + &d;
        let (q1, q2, _) = perturbation_norms(&w, &b).unwrap();
        let grad = crate::oracle::energy_gradient(&b, &par);
        let direct = pseudo_energy(&w, &par) - pseudo_energy(&b, &par) - grad.dot(&d).unwrap();
        assert!((q1 - direct).abs() < 1e-10);
        assert!((q2 - d.norm_sq()).abs() < 1e-15);
        assert!(q1 >= 0.0);
    }

    #[test]
    fn csv_layout() {
        let t = build_basis::<f64>(4).unwrap();
        let w0 = SpectralField::<f64>::random(4, 1, 1.0);
        let log = integrate(&w0, &p(1.0), &t, 0.1, 0.3, 1, None).unwrap();
        let csv = log.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_COLUMNS);
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
        assert_eq!(log.times.len(), log.monitors.len());
        assert!(log.times.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn filter_damps_top_degrees_only() {
        let t = build_basis::<f64>(20).unwrap();
        let w0 = SpectralField::from_modes(20, &[(20, 0, 1.0), (3, 0, 1.0)]).unwrap();
        let it = Integrator::new(p(0.0), &t).with_filter(true);
        let w1 = it.step(&w0, 0.01).unwrap();
        assert!(w1.get(20, 0) < 1e-10);
        assert_eq!(w1.get(3, 0), 1.0);
    }

    #[test]
    fn bad_arguments() {
        let t = build_basis::<f64>(4).unwrap();
        let w0 = SpectralField::<f64>::random(4, 1, 1.0);
        assert!(integrate(&w0, &p(1.0), &t, 0.0, 1.0, 1, None).is_err());
        assert!(integrate(&w0, &p(1.0), &t, 0.1, 1.0, 0, None).is_err());
        let big = SpectralField::<f64>::random(6, 1, 1.0);
        assert!(integrate(&big, &p(1.0), &t, 0.1, 1.0, 1, None).is_err());
    }
}
