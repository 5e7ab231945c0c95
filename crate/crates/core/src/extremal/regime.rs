use serde::Serialize;

use crate::functionals::ModelParams;
use crate::scalar::Real;

/// Character of an extremal on the enstrophy sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    /// Global constrained energy maximum (the pro-rotating state, always).
    GlobalMax,
    /// Constrained energy minimum: `Q_rel < Ω²C²`.
    ConstrainedMin,
    /// Saddle with a sign change at `l_crit`: `Ω²C² < Q_rel < 4Ω²C²`.
    Saddle,
    /// Local maximum except on `span{ψ_1,±1}`: `Q_rel > 4Ω²C²`.
    SpecialSaddle,
    /// `Q_rel` sits on a threshold, or `Ω = 0` where both thresholds vanish.
    DegenerateBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeClass<T> {
    pub kind: RegimeKind,
    /// Largest degree with positive tangent curvature (saddle regime only).
    pub l_crit: Option<usize>,
    /// `(Ω²C², 4Ω²C²)`
    pub thresholds: (T, T),
    /// Spin at which the counter-rotating state loses its minimum character
    /// for the given `Q_rel`: `√Q_rel / C`.
    pub omega_o: T,
}

/// Enstrophy thresholds `(Ω²C², 4Ω²C²)`.
pub fn regime_thresholds<T: Real>(p: &ModelParams<T>) -> (T, T) {
    let oc2 = p.omega_c() * p.omega_c();
    (oc2, T::of(4.0) * oc2)
}

/// `Ω_o = √Q_rel / C`.
pub fn spin_threshold<T: Real>(p: &ModelParams<T>) -> T {
    p.q_rel.sqrt() / p.c_const
}

/// `max{l ≥ 1 : l(l+1) < 2/(1 - ΩC/√Q_rel)}`, defined when `0 < ΩC/√Q_rel < 1`.
///
/// Tangent curvatures at the counter-rotating state are positive for
/// `l ≤ l_crit` and negative above.
pub fn critical_degree<T: Real>(p: &ModelParams<T>) -> Option<usize> {
    let ratio = p.omega_c() / p.q_rel.sqrt();
    if !(ratio > T::zero() && ratio < T::one()) {
        return None;
    }
    let bound = T::of(2.0) / (T::one() - ratio);
    let mut l = 1usize;
    while T::of_usize((l + 1) * (l + 2)) < bound {
        l += 1;
    }
    Some(l)
}

/// Classifies the counter-rotating extremal `-√Q_rel ψ_10`.
///
/// Equality with a threshold (to within 8 ulps) and `Ω = 0` are reported as
/// [`RegimeKind::DegenerateBoundary`].
pub fn classify_regime<T: Real>(p: &ModelParams<T>) -> RegimeClass<T> {
    let thresholds = regime_thresholds(p);
    let (low, high) = thresholds;
    let q = p.q_rel;
    let near = |t: T| (q - t).abs() <= T::epsilon() * T::of(8.0) * t;
    let kind = if p.omega == T::zero() || near(low) || near(high) {
        RegimeKind::DegenerateBoundary
    } else if q < low {
        RegimeKind::ConstrainedMin
    } else if q < high {
        RegimeKind::Saddle
    } else {
        RegimeKind::SpecialSaddle
    };
    let l_crit = (kind == RegimeKind::Saddle).then(|| critical_degree(p)).flatten();
    RegimeClass { kind, l_crit, thresholds, omega_o: spin_threshold(p) }
}

/// Regime descriptor of the pro-rotating state.
pub(crate) fn global_max<T: Real>(p: &ModelParams<T>) -> RegimeClass<T> {
    RegimeClass {
        kind: RegimeKind::GlobalMax,
        l_crit: None,
        thresholds: regime_thresholds(p),
        omega_o: spin_threshold(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn classify(omega: f64, q: f64) -> RegimeClass<f64> {
        classify_regime(&ModelParams::new(omega, q).unwrap())
    }

    #[test]
    fn three_regimes() {
        assert_eq!(classify(1.0, 1.0).kind, RegimeKind::ConstrainedMin);
        let r = classify(1.0, 2.0 * 4.0 * PI / 3.0);
        assert_eq!(r.kind, RegimeKind::Saddle);
        assert_eq!(r.l_crit, Some(2));
        assert_eq!(classify(1.0, 5.0 * 4.0 * PI / 3.0).kind, RegimeKind::SpecialSaddle);
    }

    #[test]
    fn boundaries_and_no_spin() {
        assert_eq!(classify(1.0, 4.0 * PI / 3.0).kind, RegimeKind::DegenerateBoundary);
        assert_eq!(classify(1.0, 16.0 * PI / 3.0).kind, RegimeKind::DegenerateBoundary);
        assert_eq!(classify(0.0, 1.0).kind, RegimeKind::DegenerateBoundary);
    }

    #[test]
    fn omega_o_formula() {
        let r = classify(0.3, 2.0);
        assert!((r.omega_o - 2f64.sqrt() / (4.0 * PI / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn critical_degree_brute_force() {
        // brute force over l against the defining inequality
        for &q in &[4.3f64, 5.0, 6.0, 8.0, 10.0, 12.0, 15.0, 16.5] {
            let p = ModelParams::new(1.0, q).unwrap();
            let ratio = p.omega_c() / q.sqrt();
            let bound = 2.0 / (1.0 - ratio);
            let want = (1..1000).filter(|&l| ((l * (l + 1)) as f64) < bound).max();
            assert_eq!(critical_degree(&p), want, "q = {q}");
        }
    }
}
