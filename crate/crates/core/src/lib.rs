//! Energy extremals of a barotropic fluid layer on a rotating sphere.
//!
//! The crate works in the real orthonormal spherical-harmonic basis on the
//! unit sphere. It provides
//!
//! * [`spharm`]: Gauss–Legendre grids, transforms, Laplacian and Green operator;
//! * [`functionals`]: kinetic/pseudo-energy, enstrophies, angular momentum;
//! * [`extremal`]: closed-form solution of the energy extremization problem at
//!   fixed relative enstrophy, Lagrange multipliers and regime classification;
//! * [`oracle`]: projected-gradient extremization on the enstrophy sphere and
//!   tangent-curvature analysis, as an independent numerical check;
//! * [`bve`]: a pseudospectral barotropic vorticity integrator with
//!   energy–enstrophy stability probes;
//! * [`output`]: fixed-precision CSV formatting shared by the CLI.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below name the double-precision instantiations used by the CLI.

pub mod bve;
pub mod error;
pub mod extremal;
pub mod functionals;
pub mod oracle;
pub mod output;
pub mod scalar;
pub mod spharm;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SpectralField64 = spharm::SpectralField<f64>;
pub type GridField64 = spharm::GridField<f64>;
pub type BasisTables64 = spharm::BasisTables<f64>;
pub type ModelParams64 = functionals::ModelParams<f64>;
pub type FunctionalReport64 = functionals::FunctionalReport<f64>;
pub type ExtremalReport64 = extremal::ExtremalReport<f64>;
pub type RegimeClass64 = extremal::RegimeClass<f64>;
pub type OracleResult64 = oracle::OracleResult<f64>;
pub type HessianSpectrum64 = oracle::HessianSpectrum<f64>;
pub type TrajectoryLog64 = bve::TrajectoryLog<f64>;

pub type SpectralField32 = spharm::SpectralField<f32>;
pub type BasisTables32 = spharm::BasisTables<f32>;
pub type ModelParams32 = functionals::ModelParams<f32>;
