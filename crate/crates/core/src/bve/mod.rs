//! Barotropic vorticity dynamics on the rotating sphere, used as the
//! trajectory generator for nonlinear stability probes.
//!
//! The relative vorticity evolves as `∂w/∂t + J(ψ, w + 2Ωμ) = 0` with
//! `ψ = G w`. The pseudo-energy, total enstrophy, angular momentum and hence
//! the deviation norms `Q1`, `Q2` about a solid-body state are all invariants.

mod integrator;
mod jacobian;
mod probe;

pub use integrator::{integrate, perturbation_norms, Integrator, Monitor, TrajectoryLog, TRAJECTORY_COLUMNS};
pub use jacobian::{jacobian, jacobian_grid};
pub use probe::{
    stability_probe, BaseState, PerturbationSpec, ProbeOutcome, ProbeVerdict, GROWTH_FACTOR, STABLE_SLACK,
};
