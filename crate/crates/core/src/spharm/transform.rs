//! Forward and inverse spherical-harmonic transforms.
//!
//! Both directions are split into a Legendre stage (per order `m`, over the
//! Gauss nodes) and a longitude stage (direct trigonometric sums against
//! precomputed tables).

use super::basis::BasisTables;
use super::field::{GridField, SpectralField};
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Which grid quantity a synthesis produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Component {
    Value,
    /// `∂/∂μ`
    DMu,
    /// `∂/∂φ`
    DPhi,
}

/// Per-node Fourier coefficients `f(μ_j, φ) = Σ_m a_m cos mφ + b_m sin mφ`,
/// stored `[j * (L + 1) + m]` with `L` the tables' truncation.
struct FourierRows<T> {
    a: Vec<T>,
    b: Vec<T>,
}

#[inline]
fn order_scale<T: Real>(m: usize) -> T {
    if m == 0 {
        T::one()
    } else {
        T::SQRT_2()
    }
}

fn legendre_synthesis<T: Real>(w: &SpectralField<T>, tables: &BasisTables<T>, comp: Component) -> FourierRows<T> {
    let n = tables.n_lat();
    let stride = tables.truncation() + 1;
    let lw = w.truncation();
    let mut a = vec![T::zero(); n * stride];
    let mut b = vec![T::zero(); n * stride];
    let mut acc_c = vec![T::zero(); n];
    let mut acc_s = vec![T::zero(); n];
    for m in 0..=lw {
        let table = match comp {
            Component::DMu => tables.dplm_order(m),
            _ => tables.plm_order(m),
        };
        acc_c.iter_mut().for_each(|v| *v = T::zero());
        acc_s.iter_mut().for_each(|v| *v = T::zero());
        for l in m.max(1)..=lw {
            let c = w.get(l, m as i64);
            let s = if m > 0 { w.get(l, -(m as i64)) } else { T::zero() };
            if c == T::zero() && s == T::zero() {
                continue;
            }
            let row = &table[(l - m) * n..(l - m + 1) * n];
            for j in 0..n {
                acc_c[j] += c * row[j];
                acc_s[j] += s * row[j];
            }
        }
        let sm = order_scale::<T>(m);
        let mf = T::of_usize(m);
        for j in 0..n {
            let (ac, bs) = (sm * acc_c[j], sm * acc_s[j]);
            let (ac, bs) = match comp {
                // ∂φ (a cos mφ + b sin mφ) = m b cos mφ - m a sin mφ
                Component::DPhi => (mf * bs, -mf * ac),
                _ => (ac, bs),
            };
            a[j * stride + m] = ac;
            b[j * stride + m] = bs;
        }
    }
    FourierRows { a, b }
}

fn longitude_synthesis<T: Real>(rows: &FourierRows<T>, tables: &BasisTables<T>, mmax: usize) -> GridField<T> {
    let n = tables.n_lat();
    let stride = tables.truncation() + 1;
    let mut g = GridField::zeros(n, tables.n_lon());
    for j in 0..n {
        let out = g.row_mut(j);
        let a0 = rows.a[j * stride];
        out.iter_mut().for_each(|v| *v = a0);
        for m in 1..=mmax {
            let (am, bm) = (rows.a[j * stride + m], rows.b[j * stride + m]);
            if am == T::zero() && bm == T::zero() {
                continue;
            }
            let (cr, sr) = (tables.cos_row(m), tables.sin_row(m));
            for k in 0..out.len() {
                out[k] += am * cr[k] + bm * sr[k];
            }
        }
    }
    g
}

pub(crate) fn synthesize_component<T: Real>(
    w: &SpectralField<T>,
    tables: &BasisTables<T>,
    comp: Component,
) -> Result<GridField<T>> {
    if w.truncation() > tables.truncation() {
        return Err(invalid(format!(
            "field truncation {} exceeds table truncation {}",
            w.truncation(),
            tables.truncation()
        )));
    }
    let rows = legendre_synthesis(w, tables, comp);
    Ok(longitude_synthesis(&rows, tables, w.truncation()))
}

/// Evaluates `w(x) = Σ α_lm ψ_lm(x)` on the grid.
pub fn synthesize<T: Real>(w: &SpectralField<T>, tables: &BasisTables<T>) -> Result<GridField<T>> {
    synthesize_component(w, tables, Component::Value)
}

/// Projects a grid field onto `1 ≤ l ≤ L`, returning the `l = 0`
/// coefficient alongside without checking it.
pub(crate) fn analyze_with_mean<T: Real>(f: &GridField<T>, tables: &BasisTables<T>) -> Result<(T, SpectralField<T>)> {
    tables.check_grid(f)?;
    let n = tables.n_lat();
    let lmax = tables.truncation();
    let stride = lmax + 1;
    let mut a = vec![T::zero(); n * stride];
    let mut b = vec![T::zero(); n * stride];
    let dphi = T::of(2.0) * T::PI() / T::of_usize(tables.n_lon());
    let weights = tables.gauss_weights();
    for j in 0..n {
        let row = f.row(j);
        let wj = weights[j] * dphi;
        a[j * stride] = wj * row.iter().copied().sum::<T>();
        for m in 1..=lmax {
            let (cr, sr) = (tables.cos_row(m), tables.sin_row(m));
            let mut sc = T::zero();
            let mut ss = T::zero();
            for k in 0..row.len() {
                sc += row[k] * cr[k];
                ss += row[k] * sr[k];
            }
            a[j * stride + m] = wj * sc;
            b[j * stride + m] = wj * ss;
        }
    }

    let mut out = SpectralField::zeros(lmax);
    let mut mean = T::zero();
    for m in 0..=lmax {
        let table = tables.plm_order(m);
        let sm = order_scale::<T>(m);
        for l in m..=lmax {
            let p = &table[(l - m) * n..(l - m + 1) * n];
            let mut sc = T::zero();
            let mut ss = T::zero();
            for j in 0..n {
                sc += p[j] * a[j * stride + m];
                ss += p[j] * b[j * stride + m];
            }
            if l == 0 {
                mean = sc;
                continue;
            }
            let ic = out.index(l, m as i64).expect("mode in range");
            out.coeffs_mut()[ic] = sm * sc;
            if m > 0 {
                let is = out.index(l, -(m as i64)).expect("mode in range");
                out.coeffs_mut()[is] = sm * ss;
            }
        }
    }
    Ok((mean, out))
}

/// Orthogonal projection of a zero-mean grid field onto degrees `1..=L`.
///
/// Fails with [`Error::CirculationViolation`] when the `l = 0` coefficient
/// exceeds `1e-10 · max(1, max|f|)`.
pub fn analyze<T: Real>(f: &GridField<T>, tables: &BasisTables<T>) -> Result<SpectralField<T>> {
    let (mean, w) = analyze_with_mean(f, tables)?;
    let tol = T::tol(1e-10) * T::one().max(f.max_abs());
    if mean.abs() > tol {
        return Err(Error::CirculationViolation { projection: mean.as_f64(), tolerance: tol.as_f64() });
    }
    Ok(w)
}

/// Quadrature of `∫ f g dx` on the tables' grid.
pub fn inner_product<T: Real>(f: &GridField<T>, g: &GridField<T>, tables: &BasisTables<T>) -> Result<T> {
    tables.check_grid(f)?;
    tables.check_grid(g)?;
    tables.integrate(&f.product(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spharm::build_basis;
    use std::f64::consts::PI;

    #[test]
    fn e10_synthesizes_to_scaled_mu() {
        let t = build_basis::<f64>(21).unwrap();
        let w = SpectralField::basis(21, 1, 0).unwrap();
        let g = synthesize(&w, &t).unwrap();
        let c = (3.0 / (4.0 * PI)).sqrt();
        for j in 0..t.n_lat() {
            for k in 0..t.n_lon() {
                assert!((g.at(j, k) - c * t.gauss_nodes()[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn e11_is_cosine_in_longitude() {
        let t = build_basis::<f64>(4).unwrap();
        let g = synthesize(&SpectralField::basis(4, 1, 1).unwrap(), &t).unwrap();
        let h = synthesize(&SpectralField::basis(4, 1, -1).unwrap(), &t).unwrap();
        let c = (3.0 / (4.0 * PI)).sqrt();
        for j in 0..t.n_lat() {
            let s = (1.0 - t.gauss_nodes()[j].powi(2)).sqrt();
            for k in 0..t.n_lon() {
                let phi = t.longitude(k);
                assert!((g.at(j, k) - c * s * phi.cos()).abs() < 1e-14);
                assert!((h.at(j, k) - c * s * phi.sin()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_round_trip() {
        let t = build_basis::<f64>(5).unwrap();
        let g = synthesize(&SpectralField::zeros(5), &t).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));
        let w = analyze(&g, &t).unwrap();
        assert!(w.coeffs().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nonzero_mean_rejected() {
        let t = build_basis::<f64>(5).unwrap();
        let g = t.grid_from_fn(|mu, _| 1.0 + mu);
        assert!(matches!(analyze(&g, &t), Err(Error::CirculationViolation { .. })));
    }

    #[test]
    fn oversized_field_rejected() {
        let t = build_basis::<f64>(3).unwrap();
        assert!(synthesize(&SpectralField::<f64>::zeros(4), &t).is_err());
    }

    #[test]
    fn mismatched_grids_rejected() {
        let t = build_basis::<f64>(3).unwrap();
        let u = build_basis::<f64>(4).unwrap();
        let f = u.grid_from_fn(|mu, _| mu);
        assert!(analyze(&f, &t).is_err());
        assert!(inner_product(&f, &f, &t).is_err());
    }

    #[test]
    fn derivative_components() {
        let t = build_basis::<f64>(6).unwrap();
        let w = SpectralField::random(6, 5, 0.5);
        let h = 1e-6;
        // ∂φ by comparing with a rotated evaluation is awkward on a fixed grid;
        // check against pointwise evaluation of the expansion instead.
        let dphi = synthesize_component(&w, &t, Component::DPhi).unwrap();
        let dmu = synthesize_component(&w, &t, Component::DMu).unwrap();
        let eval = |mu: f64, phi: f64| crate::spharm::evaluate(&w, mu, phi);
        for j in [0, 3, 7] {
            for k in [0, 5, 11] {
                let (mu, phi) = (t.gauss_nodes()[j], t.longitude(k));
                let fd_phi = (eval(mu, phi + h) - eval(mu, phi - h)) / (2.0 * h);
                let fd_mu = (eval(mu + h, phi) - eval(mu - h, phi)) / (2.0 * h);
                assert!((fd_phi - dphi.at(j, k)).abs() < 1e-6);
                assert!((fd_mu - dmu.at(j, k)).abs() < 1e-6);
            }
        }
    }
}
