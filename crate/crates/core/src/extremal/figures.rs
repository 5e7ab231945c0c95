//! Tabulated curves of the closed-form extremal theory.
//!
//! 1. energy `H = ¼(k + ΩC)²` of solid-body extremals `k ψ_10` against `k`;
//! 2. enstrophy of the extremals at fixed energy, `Q_rel = (±ΩC + √(4H))²`;
//! 3. multipliers `λ±` against `√Q_rel`;
//! 4. extremal coefficient `k = -ΩC / (2(½ + 2λ))` against `λ`, with a pole at `λ = -¼`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::functionals::ModelParams;
use crate::output::fmt_num;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    EnergyVsCoefficient,
    EnergyEnstrophy,
    MultipliersVsEnstrophy,
    CoefficientVsMultiplier,
}

impl Figure {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Self::EnergyVsCoefficient),
            2 => Ok(Self::EnergyEnstrophy),
            3 => Ok(Self::MultipliersVsEnstrophy),
            4 => Ok(Self::CoefficientVsMultiplier),
            _ => Err(invalid(format!("figure must be 1..=4, got {n}"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Self::EnergyVsCoefficient => 1,
            Self::EnergyEnstrophy => 2,
            Self::MultipliersVsEnstrophy => 3,
            Self::CoefficientVsMultiplier => 4,
        }
    }

    /// Axis descriptions with units (unit sphere, unit density).
    pub fn axes(self) -> (&'static str, &'static str) {
        match self {
            Self::EnergyVsCoefficient => ("k = alpha_10 [1/time]", "H [1/time^2]"),
            Self::EnergyEnstrophy => ("H [1/time^2]", "Q_rel [1/time^2]"),
            Self::MultipliersVsEnstrophy => ("sqrt(Q_rel) [1/time]", "lambda_rel [dimensionless]"),
            Self::CoefficientVsMultiplier => ("lambda_rel [dimensionless]", "k = alpha_10 [1/time]"),
        }
    }
}

/// Inclusive linear sweep `start..=end` with `points ≥ 2` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep<T> {
    pub start: T,
    pub end: T,
    pub points: usize,
}

impl<T: Real> Sweep<T> {
    pub fn new(start: T, end: T, points: usize) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(invalid("sweep bounds must be finite"));
        }
        if points < 2 || end <= start {
            return Err(invalid("sweep needs end > start and at least 2 points"));
        }
        Ok(Self { start, end, points })
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        let step = (self.end - self.start) / T::of_usize(self.points - 1);
        (0..self.points).map(move |i| self.start + step * T::of_usize(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint<T> {
    pub x: T,
    pub y: T,
    pub branch: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curves<T> {
    pub figure: Figure,
    pub params: ModelParams<T>,
    pub points: Vec<CurvePoint<T>>,
}

impl<T: Real> Curves<T> {
    /// CSV with `#` comment lines describing the columns, then `x,y,branch`.
    pub fn to_csv(&self) -> String {
        let (x, y) = self.figure.axes();
        let mut s = format!(
            "# figure {}\n# x: {x}\n# y: {y}\n# omega = {}, C = {}\n",
            self.figure.number(),
            fmt_num(self.params.omega.as_f64()),
            fmt_num(self.params.c_const.as_f64()),
        );
        s.push_str("x,y,branch\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", fmt_num(p.x.as_f64()), fmt_num(p.y.as_f64()), p.branch));
        }
        s
    }
}

/// `k(λ) = -ΩC / (2(½ + 2λ))`, the solid-body coefficient solving the
/// Euler–Lagrange equation off the bifurcation set.
pub fn coefficient_for_multiplier<T: Real>(lambda_rel: T, p: &ModelParams<T>) -> T {
    -p.omega_c() / (T::of(2.0) * (T::of(0.5) + T::of(2.0) * lambda_rel))
}

/// Tabulates one figure over `sweep`.
///
/// Domain restrictions: figure 2 needs `H ≥ 0`, figure 3 needs `√Q_rel > 0`;
/// figure 4 drops the sample at the pole `λ = -¼` if the sweep hits it.
pub fn figure_curves<T: Real>(figure: Figure, p: &ModelParams<T>, sweep: &Sweep<T>) -> Result<Curves<T>> {
    let quarter = T::of(0.25);
    let two = T::of(2.0);
    let oc = p.omega_c();
    let mut points = Vec::new();
    match figure {
        Figure::EnergyVsCoefficient => {
            for k in sweep.values() {
                let d = k + oc;
                points.push(CurvePoint { x: k, y: quarter * d * d, branch: "extremal" });
            }
        }
        Figure::EnergyEnstrophy => {
            if sweep.start < T::zero() {
                return Err(invalid("figure 2 sweeps energy H ≥ 0"));
            }
            for h in sweep.values() {
                let r = (T::of(4.0) * h).sqrt();
                points.push(CurvePoint { x: h, y: (oc + r) * (oc + r), branch: "plus" });
                points.push(CurvePoint { x: h, y: (r - oc) * (r - oc), branch: "minus" });
            }
        }
        Figure::MultipliersVsEnstrophy => {
            if sweep.start <= T::zero() {
                return Err(invalid("figure 3 sweeps sqrt(Q_rel) > 0"));
            }
            for s in sweep.values() {
                let r = oc / s;
                points.push(CurvePoint { x: s, y: -quarter * (T::one() + r), branch: "plus" });
                points.push(CurvePoint { x: s, y: -quarter * (T::one() - r), branch: "minus" });
            }
        }
        Figure::CoefficientVsMultiplier => {
            for lam in sweep.values() {
                let denom = two * (T::of(0.5) + two * lam);
                if denom.abs() <= T::epsilon() {
                    continue;
                }
                let branch = if lam < -quarter { "pro" } else { "counter" };
                points.push(CurvePoint { x: lam, y: coefficient_for_multiplier(lam, p), branch });
            }
        }
    }
    Ok(Curves { figure, params: *p, points })
}
