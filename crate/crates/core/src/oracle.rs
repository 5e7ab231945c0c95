//! Independent numerical check of the closed-form extremals: projected-gradient
//! extremization of `H` on the enstrophy sphere `‖w‖² = Q_rel`, and the
//! tangent-space curvature of `H + λ* Γ_rel` at a stationary point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::extremal::ExtremalReport;
use crate::functionals::{pseudo_energy, ModelParams};
use crate::output::fmt_num;
use crate::scalar::Real;
use crate::spharm::{green_eigenvalue, SpectralField};

/// Radial retraction `w ↦ w √Q / ‖w‖`.
pub fn project_to_sphere<T: Real>(w: &SpectralField<T>, q_rel: T) -> Result<SpectralField<T>> {
    if q_rel <= T::zero() || !q_rel.is_finite() {
        return Err(invalid("relative enstrophy must be finite and positive"));
    }
    let n = w.norm();
    if n == T::zero() || !n.is_finite() {
        return Err(invalid("cannot project a zero or non-finite field onto the enstrophy sphere"));
    }
    Ok(w.scaled(q_rel.sqrt() / n))
}

/// `∇H = -G w + ½ΩC e_10` in coefficient space.
pub fn energy_gradient<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> SpectralField<T> {
    let half_oc = T::of(0.5) * p.omega_c();
    w.map_modes(|l, m, a| {
        let g = -green_eigenvalue::<T>(l) * a;
        if l == 1 && m == 0 {
            g + half_oc
        } else {
            g
        }
    })
}

/// Component of `∇H` tangent to the sphere through `w`.
pub fn tangent_gradient<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> SpectralField<T> {
    let g = energy_gradient(w, p);
    let q = w.norm_sq();
    let s = g.dot(w).expect("same truncation") / q;
    let mut t = g;
    t.axpy(-s, w).expect("same truncation");
    t
}

/// Point on the sphere from Gaussian coefficients; the sign of `α_10` is
/// drawn independently so both hemispheres are sampled.
pub fn random_sphere_point<T: Real>(truncation: usize, q_rel: T, seed: u64) -> Result<SpectralField<T>> {
    if truncation < 1 {
        return Err(invalid("truncation must be at least 1"));
    }
    let mut w = SpectralField::<T>::random(truncation, seed, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let a = w.get(1, 0).abs();
    let sign = if rng.random::<bool>() { T::one() } else { -T::one() };
    w.set(1, 0, sign * a)?;
    project_to_sphere(&w, q_rel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ascend,
    Descend,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascend" => Ok(Self::Ascend),
            "descend" => Ok(Self::Descend),
            other => Err(invalid(format!("direction must be `ascend` or `descend`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow<T> {
    pub iteration: usize,
    pub energy: T,
    pub gradient_norm: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult<T> {
    pub converged: bool,
    pub iterations: usize,
    pub direction: Direction,
    pub final_state: SpectralField<T>,
    pub final_energy: T,
    pub gradient_norm: T,
    /// Distance to the nearer of `±√Q e_10`.
    pub distance_to_analytic: T,
    pub params: ModelParams<T>,
    /// Largest `|‖w‖² - Q|` over all iterates.
    pub max_constraint_violation: T,
    /// Largest energy over all iterates.
    pub max_energy: T,
    #[serde(skip)]
    pub trace: Vec<TraceRow<T>>,
}

impl<T: Real> OracleResult<T> {
    /// `iteration,energy,gradient_norm` rows.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iteration,energy,gradient_norm\n");
        for r in &self.trace {
            s.push_str(&format!(
                "{},{},{}\n",
                r.iteration,
                fmt_num(r.energy.as_f64()),
                fmt_num(r.gradient_norm.as_f64())
            ));
        }
        s
    }
}

/// Distance from `w` to the nearer of the two solid-body states `±√Q e_10`.
pub fn distance_to_solid_body<T: Real>(w: &SpectralField<T>, q_rel: T) -> T {
    let sq = q_rel.sqrt();
    let a = w.get(1, 0);
    let rest: T = w.iter_modes().filter(|&(l, m, _)| (l, m) != (1, 0)).map(|(_, _, x)| x * x).sum();
    let d_plus = (a - sq) * (a - sq) + rest;
    let d_minus = (a + sq) * (a + sq) + rest;
    d_plus.min(d_minus).sqrt()
}

/// Projected-gradient extremization of `H` on `‖w‖² = Q_rel`.
///
/// Each iteration tries `w ± s g_t` followed by radial projection, halving
/// `s` (from the nominal `step`) until the energy does not get worse. Stops
/// once `‖g_t‖ < tol`; exhausting `max_iter` is reported through
/// `converged = false`.
pub fn extremize_on_sphere<T: Real>(
    p: &ModelParams<T>,
    direction: Direction,
    init: &SpectralField<T>,
    step: T,
    tol: T,
    max_iter: usize,
) -> Result<OracleResult<T>> {
    if step <= T::zero() || !step.is_finite() {
        return Err(invalid("step must be positive"));
    }
    if tol.is_nan() || tol <= T::zero() {
        return Err(invalid("tolerance must be positive"));
    }
    let sign = match direction {
        Direction::Ascend => T::one(),
        Direction::Descend => -T::one(),
    };
    let mut w = project_to_sphere(init, p.q_rel)?;
    let mut energy = pseudo_energy(&w, p);
    let mut g = tangent_gradient(&w, p);
    let mut gnorm = g.norm();
    let mut trace = vec![TraceRow { iteration: 0, energy, gradient_norm: gnorm }];
    let mut max_violation = (w.norm_sq() - p.q_rel).abs();
    let mut max_energy = energy;
    let slack = T::epsilon() * T::of(16.0);
    let mut iterations = 0;

    while gnorm >= tol && iterations < max_iter {
        iterations += 1;
        let mut s = step;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = w.clone();
            trial.axpy(sign * s, &g)?;
            let trial = project_to_sphere(&trial, p.q_rel)?;
            let e = pseudo_energy(&trial, p);
            if sign * (e - energy) >= -slack * T::one().max(energy.abs()) {
                accepted = Some((trial, e));
                break;
            }
            s *= T::of(0.5);
        }
        let Some((next, e)) = accepted else { break };
        w = next;
        energy = e;
        g = tangent_gradient(&w, p);
        gnorm = g.norm();
        max_violation = max_violation.max((w.norm_sq() - p.q_rel).abs());
        max_energy = max_energy.max(energy);
        trace.push(TraceRow { iteration: iterations, energy, gradient_norm: gnorm });
    }

    Ok(OracleResult {
        converged: gnorm < tol,
        iterations,
        direction,
        distance_to_analytic: distance_to_solid_body(&w, p.q_rel),
        final_state: w,
        final_energy: energy,
        gradient_norm: gnorm,
        params: *p,
        max_constraint_violation: max_violation,
        max_energy,
        trace,
    })
}

/// `λ*` from the first-order condition `∇H + 2λ w = 0`, with the residual
/// `‖∇H + 2λ* w‖`.
pub fn stationary_multiplier<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>) -> Result<(T, T)> {
    let q = w.norm_sq();
    if q == T::zero() {
        return Err(invalid("base state must be non-zero"));
    }
    let g = energy_gradient(w, p);
    let lambda = -g.dot(w)? / (T::of(2.0) * q);
    let mut r = g;
    r.axpy(T::of(2.0) * lambda, w)?;
    Ok((lambda, r.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCurvature<T> {
    pub l: usize,
    pub m: i64,
    pub c: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianSpectrum<T> {
    pub base_state: SpectralField<T>,
    pub lambda_star: T,
    pub curvatures: Vec<ModeCurvature<T>>,
    pub positive_count: usize,
    pub negative_count: usize,
    /// `|c| < 1e-10`
    pub zero_count: usize,
}

impl<T: Real> HessianSpectrum<T> {
    pub fn curvature(&self, l: usize, m: i64) -> Option<T> {
        self.curvatures.iter().find(|c| c.l == l && c.m == m).map(|c| c.c)
    }
}

/// Coordinate directions `e_lm` projected onto the tangent space at `base`,
/// dropping the one most aligned with `base` (the radial direction).
fn tangent_directions<T: Real>(base: &SpectralField<T>) -> Vec<(usize, i64, SpectralField<T>)> {
    let l_max = base.truncation();
    let radial = base
        .iter_modes()
        .fold((0usize, 0i64, -T::one()), |acc, (l, m, a)| if a.abs() > acc.2 { (l, m, a.abs()) } else { acc });
    let q = base.norm_sq();
    crate::spharm::modes(l_max)
        .filter(|&(l, m)| (l, m) != (radial.0, radial.1))
        .map(|(l, m)| {
            let mut t = SpectralField::basis(l_max, l, m).expect("mode inside truncation");
            t.axpy(-base.get(l, m) / q, base).expect("same truncation");
            (l, m, t)
        })
        .collect()
}

/// Tangent curvatures of `H + λ* Γ_rel` at a stationary `base`.
///
/// For each coordinate direction `e_lm` other than the radial one, `c_lm` is
/// the Rayleigh quotient of the augmented Hessian on the tangent projection of
/// `e_lm`; at `±√Q e_10` this is exactly `1/[l(l+1)] + 2λ*`.
pub fn projected_hessian<T: Real>(base: &SpectralField<T>, p: &ModelParams<T>) -> Result<HessianSpectrum<T>> {
    let (lambda, residual) = stationary_multiplier(base, p)?;
    let scale = T::one().max(energy_gradient(base, p).norm());
    if residual > T::tol(1e-8) * scale {
        return Err(Error::NotStationary { residual: residual.as_f64() });
    }
    let two_lambda = T::of(2.0) * lambda;
    let zero_tol = T::tol(1e-10);
    let mut out = HessianSpectrum {
        base_state: base.clone(),
        lambda_star: lambda,
        curvatures: Vec::new(),
        positive_count: 0,
        negative_count: 0,
        zero_count: 0,
    };
    for (l, m, t) in tangent_directions(base) {
        let nt = t.norm_sq();
        let quad: T = t.iter_modes().map(|(ll, _, a)| -green_eigenvalue::<T>(ll) * a * a).sum();
        let c = quad / nt + two_lambda;
        if c.abs() < zero_tol {
            out.zero_count += 1;
        } else if c > T::zero() {
            out.positive_count += 1;
        } else {
            out.negative_count += 1;
        }
        out.curvatures.push(ModeCurvature { l, m, c });
    }
    Ok(out)
}

/// Second differences `[H(R(w + h t)) - 2H(w) + H(R(w - h t))] / h²` along
/// the unit tangent directions used by [`projected_hessian`], with `R` the
/// radial retraction. Needs no multiplier.
pub fn finite_difference_curvatures<T: Real>(
    base: &SpectralField<T>,
    p: &ModelParams<T>,
    h: T,
) -> Result<Vec<ModeCurvature<T>>> {
    if h.is_nan() || h <= T::zero() {
        return Err(invalid("finite-difference step must be positive"));
    }
    let q = base.norm_sq();
    let e0 = pseudo_energy(base, p);
    tangent_directions(base)
        .into_iter()
        .map(|(l, m, t)| {
            let t = t.scaled(T::one() / t.norm());
            let mut fwd = base.clone();
            fwd.axpy(h, &t)?;
            let mut bwd = base.clone();
            bwd.axpy(-h, &t)?;
            let ef = pseudo_energy(&project_to_sphere(&fwd, q)?, p);
            let eb = pseudo_energy(&project_to_sphere(&bwd, q)?, p);
            Ok(ModeCurvature { l, m, c: (ef - T::of(2.0) * e0 + eb) / (h * h) })
        })
        .collect()
}

/// Central-difference tangent gradient `(H(R(w + h e)) - H(R(w - h e))) / 2h`
/// for every coordinate direction `e_lm`, projected onto the tangent space.
pub fn finite_difference_gradient<T: Real>(w: &SpectralField<T>, p: &ModelParams<T>, h: T) -> Result<SpectralField<T>> {
    let q = w.norm_sq();
    let mut g = SpectralField::zeros(w.truncation());
    for (l, m) in crate::spharm::modes(w.truncation()) {
        let e = SpectralField::basis(w.truncation(), l, m)?;
        let mut fwd = w.clone();
        fwd.axpy(h, &e)?;
        let mut bwd = w.clone();
        bwd.axpy(-h, &e)?;
        let d = (pseudo_energy(&project_to_sphere(&fwd, q)?, p) - pseudo_energy(&project_to_sphere(&bwd, q)?, p))
            / (T::of(2.0) * h);
        g.set(l, m, d)?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub distance: f64,
    pub energy_diff: f64,
    pub reason: String,
}

/// Compares an oracle run with a closed-form extremal: agreement means
/// state distance `< 1e-5` and energy difference `< 1e-6`. At `Ω = 0` every
/// point of the `l = 1` shell is a maximizer and only the energy is compared.
pub fn verify_against_analytic<T: Real>(oracle: &OracleResult<T>, report: &ExtremalReport<T>) -> Result<Verdict> {
    let (a, b) = (&oracle.params, &report.params);
    if a.omega != b.omega || a.q_rel != b.q_rel {
        return Err(invalid(format!(
            "parameter mismatch: oracle (Ω = {}, Q = {}) vs report (Ω = {}, Q = {})",
            a.omega, a.q_rel, b.omega, b.q_rel
        )));
    }
    let state = report.state.resized(oracle.final_state.truncation());
    let distance = (&oracle.final_state - &state).norm().as_f64();
    let energy_diff = (oracle.final_energy - report.energy_original).abs().as_f64();
    let energy_only = a.omega == T::zero();
    let energy_ok = energy_diff < 1e-6;
    let distance_ok = energy_only || distance < 1e-5;
    let (ok, reason) = if !oracle.converged {
        (false, "not converged".to_string())
    } else if !distance_ok {
        (false, format!("state distance {distance:e} exceeds 1e-5"))
    } else if !energy_ok {
        (false, format!("energy difference {energy_diff:e} exceeds 1e-6"))
    } else if energy_only {
        (true, "energy agrees (Ω = 0: l = 1 shell of maximizers)".to_string())
    } else {
        (true, "agrees".to_string())
    };
    Ok(Verdict { ok, distance, energy_diff, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{extremal_states, multipliers};
    use std::f64::consts::PI;

    fn p(omega: f64, q: f64) -> ModelParams<f64> {
        ModelParams::new(omega, q).unwrap()
    }

    fn solid(l_max: usize, a: f64) -> SpectralField<f64> {
        SpectralField::from_modes(l_max, &[(1, 0, a)]).unwrap()
    }

    #[test]
    fn projection_examples() {
        let w = solid(4, 2.0);
        let r = project_to_sphere(&w, 1.0).unwrap();
        assert_eq!(r.get(1, 0), 1.0);
        let again = project_to_sphere(&r, 1.0).unwrap();
        assert!((&again - &r).norm() < 1e-14);
        let w = SpectralField::<f64>::random(7, 3, 0.5);
        assert!((project_to_sphere(&w, 2.5).unwrap().norm_sq() - 2.5).abs() < 1e-12);
        assert!(project_to_sphere(&SpectralField::<f64>::zeros(3), 1.0).is_err());
    }

    #[test]
    fn ascent_and_descent() {
        let par = p(1.0, 1.0);
        let init = random_sphere_point(6, 1.0, 11).unwrap();
        let r = extremize_on_sphere(&par, Direction::Ascend, &init, 1.0, 1e-10, 20_000).unwrap();
        assert!(r.converged);
        assert!((r.final_state.get(1, 0) - 1.0).abs() < 1e-6);
        assert!((r.final_energy - (0.25 + 0.5 * par.c_const)).abs() < 1e-6);
        assert!(r.max_constraint_violation < 1e-10);

        let r = extremize_on_sphere(&par, Direction::Descend, &init, 1.0, 1e-10, 20_000).unwrap();
        assert!(r.converged);
        assert!((r.final_state.get(1, 0) + 1.0).abs() < 1e-6);
        assert!((r.final_energy - (0.25 - 0.5 * par.c_const)).abs() < 1e-6);
    }

    #[test]
    fn stationary_start() {
        let par = p(1.0, 1.0);
        let r = extremize_on_sphere(&par, Direction::Ascend, &solid(5, 1.0), 1.0, 1e-10, 100).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.converged && r.gradient_norm < 1e-10);
        assert!(extremize_on_sphere(&par, Direction::Ascend, &solid(5, 1.0), 0.0, 1e-10, 100).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let par = p(0.7, 2.0);
        for seed in 0..10 {
            let w = random_sphere_point(5, 2.0, seed).unwrap();
            let g = tangent_gradient(&w, &par);
            let fd = finite_difference_gradient(&w, &par, 1e-5).unwrap();
            // the FD gradient differentiates along e - (radial part), i.e. P_t e
            let err = (&g - &fd).norm() / g.norm();
            assert!(err < 1e-6, "seed {seed}: {err}");
        }
    }

    #[test]
    fn hessian_at_wmax_is_negative() {
        for &(om, q) in &[(1.0, 1.0), (0.3, 5.0), (2.0, 30.0)] {
            let par = p(om, q);
            let (mx, _) = extremal_states(&par, 6).unwrap();
            let h = projected_hessian(&mx.state, &par).unwrap();
            assert_eq!(h.negative_count, crate::spharm::mode_count(6) - 1);
            assert_eq!(h.positive_count, 0);
            assert!((h.lambda_star - multipliers(&par).unwrap().0).abs() < 1e-12);
        }
    }

    #[test]
    fn hessian_regime_patterns() {
        let cc = 4.0 * PI / 3.0;
        let par = p(1.0, 5.0 * cc);
        let (_, mn) = extremal_states(&par, 6).unwrap();
        let h = projected_hessian(&mn.state, &par).unwrap();
        assert_eq!(h.positive_count, 2);
        assert!(h.curvature(1, 1).unwrap() > 0.0 && h.curvature(1, -1).unwrap() > 0.0);

        let par = p(1.0, 2.0 * cc);
        let (_, mn) = extremal_states(&par, 6).unwrap();
        let h = projected_hessian(&mn.state, &par).unwrap();
        for c in &h.curvatures {
            assert_eq!(c.c > 0.0, c.l <= 2, "({}, {}) = {}", c.l, c.m, c.c);
        }

        let par = p(1.0, 0.5 * cc);
        let (_, mn) = extremal_states(&par, 6).unwrap();
        let h = projected_hessian(&mn.state, &par).unwrap();
        assert_eq!(h.negative_count, 0);
    }

    #[test]
    fn hessian_agrees_with_finite_differences() {
        let cc = 4.0 * PI / 3.0;
        for q in [0.5 * cc, 2.0 * cc, 5.0 * cc] {
            let par = p(1.0, q);
            let (mx, mn) = extremal_states(&par, 5).unwrap();
            for base in [&mx.state, &mn.state] {
                let h = projected_hessian(base, &par).unwrap();
                let fd = finite_difference_curvatures(base, &par, 1e-4).unwrap();
                for (a, b) in h.curvatures.iter().zip(&fd) {
                    assert_eq!((a.l, a.m), (b.l, b.m));
                    assert!((a.c - b.c).abs() < 1e-5, "({}, {}): {} vs {}", a.l, a.m, a.c, b.c);
                }
            }
        }
    }

    #[test]
    fn non_stationary_base_rejected() {
        let par = p(1.0, 1.0);
        let w = random_sphere_point(4, 1.0, 5).unwrap();
        assert!(matches!(projected_hessian(&w, &par), Err(Error::NotStationary { .. })));
    }

    #[test]
    fn verdicts() {
        let par = p(1.0, 1.0);
        let (mx, _) = extremal_states(&par, 4).unwrap();
        let good = extremize_on_sphere(&par, Direction::Ascend, &solid(4, 1.0), 1.0, 1e-10, 10).unwrap();
        assert!(verify_against_analytic(&good, &mx).unwrap().ok);

        let anti = extremize_on_sphere(&par, Direction::Descend, &solid(4, -1.0), 1.0, 1e-10, 10).unwrap();
        let v = verify_against_analytic(&anti, &mx).unwrap();
        assert!(!v.ok);
        assert!((v.distance - 2.0).abs() < 1e-14);

        let init = random_sphere_point(4, 1.0, 2).unwrap();
        let partial = extremize_on_sphere(&par, Direction::Ascend, &init, 1.0, 1e-10, 1).unwrap();
        let v = verify_against_analytic(&partial, &mx).unwrap();
        assert!(!v.ok && v.reason == "not converged");

        let (other, _) = extremal_states(&p(2.0, 1.0), 4).unwrap();
        assert!(verify_against_analytic(&good, &other).is_err());
    }

    #[test]
    fn zero_spin_checks_energy_only() {
        let par = p(0.0, 2.0);
        let (mx, _) = extremal_states(&par, 5).unwrap();
        let init = random_sphere_point(5, 2.0, 9).unwrap();
        let r = extremize_on_sphere(&par, Direction::Ascend, &init, 1.0, 1e-10, 20_000).unwrap();
        let v = verify_against_analytic(&r, &mx).unwrap();
        assert!(v.ok, "{v:?}");
    }
}
