use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use sphere_extremal::bve::{stability_probe, BaseState, Integrator, PerturbationSpec, TrajectoryLog};
use sphere_extremal::extremal::{
    classify_regime, extremal_states, figure_curves, multipliers, solve_euler_lagrange, Figure, Sweep,
};
use sphere_extremal::functionals::{pseudo_energy, FunctionalReport};
use sphere_extremal::oracle::{
    extremize_on_sphere, projected_hessian, random_sphere_point, verify_against_analytic, Direction,
};
use sphere_extremal::spharm::build_basis;
use sphere_extremal::{BasisTables64, ModelParams64};

use crate::artifacts::{Artifacts, Document};
use crate::config::{usage, RunConfig};

/// What a command produced: the JSON document and whether the run counts
/// as a numerical failure.
pub struct Outcome {
    pub json: String,
    pub failed: bool,
    pub artifacts: Vec<std::path::PathBuf>,
}

fn params(cfg: &RunConfig, q_rel: f64) -> anyhow::Result<ModelParams64> {
    ModelParams64::new(cfg.omega, q_rel).map_err(|e| usage(e.to_string()))
}

fn finish<R: Serialize>(
    cfg: &RunConfig,
    mut art: Artifacts,
    csv: Option<String>,
    result: R,
    failed: bool,
) -> anyhow::Result<Outcome> {
    let csv_name = match csv {
        Some(text) => {
            art.write("csv", &text)?;
            Some(art.file_name("csv"))
        }
        None => None,
    };
    let json = serde_json::to_string_pretty(&Document::new(cfg, csv_name, result))?;
    art.write("json", &json)?;
    Ok(Outcome { json, failed, artifacts: art.written })
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match cfg.command.as_str() {
        "classify" => classify(cfg),
        "extremals" => extremals(cfg),
        "solve-el" => solve_el(cfg),
        "oracle" => oracle(cfg),
        "evolve" => evolve(cfg),
        "probe" => probe(cfg),
        "figures" => figures(cfg),
        other => Err(usage(format!("unknown command `{other}`"))),
    }
}

fn classify(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = params(cfg, cfg.require_q_rel()?)?;
    let art = Artifacts::new(cfg)?;
    finish(cfg, art, None, classify_regime(&p), false)
}

fn extremals(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = params(cfg, cfg.require_q_rel()?)?;
    let (mx, mn) = extremal_states(&p, cfg.truncation)?;
    let (lp, lm) = multipliers(&p)?;
    let result = json!({
        "h_max": mx.energy_original,
        "h_min": mn.energy_original,
        "lambda_plus": lp,
        "lambda_minus": lm,
        "w_max": mx,
        "w_min": mn,
        "functionals_w_max": FunctionalReport::evaluate(&mx.state, &p),
        "functionals_w_min": FunctionalReport::evaluate(&mn.state, &p),
    });
    finish(cfg, Artifacts::new(cfg)?, None, result, false)
}

fn solve_el(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let lambda = cfg.lambda_rel.ok_or_else(|| usage("`solve-el` requires `lambda_rel`"))?;
    // Q_rel does not enter the unconstrained equation
    let p = params(cfg, cfg.q_rel.unwrap_or(1.0))?;
    let sol = solve_euler_lagrange(lambda, &p, cfg.truncation)?;
    finish(cfg, Artifacts::new(cfg)?, None, sol, false)
}

fn oracle(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let q = cfg.require_q_rel()?;
    let p = params(cfg, q)?;
    let direction: Direction = cfg.direction.parse().map_err(|e: sphere_extremal::Error| usage(e.to_string()))?;
    let init = random_sphere_point(cfg.truncation, q, cfg.seed)?;
    let r = extremize_on_sphere(&p, direction, &init, cfg.step, cfg.tol, cfg.max_iter)?;
    let (mx, mn) = extremal_states(&p, cfg.truncation)?;
    let target = match direction {
        Direction::Ascend => &mx,
        Direction::Descend => &mn,
    };
    let verdict = verify_against_analytic(&r, target)?;
    let hessian = if r.converged { projected_hessian(&r.final_state, &p).ok() } else { None };
    let failed = !r.converged;
    let result = json!({
        "oracle": &r,
        "verdict": verdict,
        "hessian_counts": hessian.map(|h| json!({
            "lambda_star": h.lambda_star,
            "positive": h.positive_count,
            "negative": h.negative_count,
            "zero": h.zero_count,
        })),
    });
    finish(cfg, Artifacts::new(cfg)?, Some(r.trace_csv()), result, failed)
}

fn base_state(name: Option<&str>) -> BaseState<f64> {
    match name {
        Some("wmin") => BaseState::WMin,
        _ => BaseState::WMax,
    }
}

fn tables(cfg: &RunConfig) -> anyhow::Result<BasisTables64> {
    build_basis(cfg.truncation).context("building spectral tables")
}

fn log_summary(log: &TrajectoryLog<f64>) -> serde_json::Value {
    json!({
        "truncation": log.truncation,
        "dt": log.dt,
        "t_end": log.t_end,
        "filter": log.filter,
        "blown_up": log.blown_up,
        "samples": log.times.len(),
        "drift_h": log.max_relative_drift(|m| m.h),
        "drift_total_enstrophy": log.max_relative_drift(|m| m.total_enstrophy),
        "drift_ang_mom": log.max_relative_drift(|m| m.ang_mom),
        "drift_q1_plus_q2": log.max_relative_drift(|m| m.q1_plus_q2()),
    })
}

fn evolve(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let q = cfg.require_q_rel()?;
    let p = params(cfg, q)?;
    let t = tables(cfg)?;
    let (w0, base) = if cfg.base.is_some() || !cfg.modes.is_empty() {
        let spec = PerturbationSpec {
            base: base_state(cfg.base.as_deref()),
            modes: cfg.modes.clone(),
            phase_seed: cfg.phase_seed,
            target_norm: cfg.target_norm,
        };
        let b = spec.base.resolve(&p, cfg.truncation)?;
        (&b + &spec.perturbation(cfg.truncation)?, Some(b))
    } else {
        (random_sphere_point(cfg.truncation, q, cfg.seed)?, None)
    };
    let log =
        Integrator::new(p, &t).with_filter(cfg.filter).run(&w0, cfg.dt, cfg.t_end, cfg.sample_every, base.as_ref())?;
    if log.filter {
        eprintln!("note: spectral filter enabled; invariants are not conserved exactly");
    }
    let result = json!({
        "initial_energy": pseudo_energy(&w0, &p),
        "trajectory": log_summary(&log),
    });
    let failed = log.blown_up;
    finish(cfg, Artifacts::new(cfg)?, Some(log.to_csv()), result, failed)
}

fn probe(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let q = cfg.require_q_rel()?;
    let p = params(cfg, q)?;
    let t = tables(cfg)?;
    let (modes, target_norm) = if cfg.modes.is_empty() {
        let mixed = vec![(1, 1, 1.0), (2, 0, 1.0), (2, 1, 1.0), (3, -2, 1.0)];
        (mixed, Some(cfg.target_norm.unwrap_or(1e-3 * q.sqrt())))
    } else {
        (cfg.modes.clone(), cfg.target_norm)
    };
    let spec =
        PerturbationSpec { base: base_state(cfg.base.as_deref()), modes, phase_seed: cfg.phase_seed, target_norm };
    let out = stability_probe(&spec, &p, &t, cfg.dt, cfg.t_end, cfg.sample_every)?;
    let result = json!({
        "verdict": out.verdict,
        "max_ratio": out.max_ratio,
        "max_tilt_ratio": out.max_tilt_ratio,
        "regime": classify_regime(&p),
        "trajectory": log_summary(&out.log),
    });
    let failed = out.log.blown_up;
    finish(cfg, Artifacts::new(cfg)?, Some(out.log.to_csv()), result, failed)
}

fn default_sweep(fig: Figure, cfg: &RunConfig, oc: f64) -> (f64, f64, usize) {
    match fig {
        Figure::EnergyVsCoefficient => (-oc - 5.0, -oc + 5.0, 201),
        Figure::EnergyEnstrophy => (0.0, 5.0, 201),
        Figure::MultipliersVsEnstrophy => {
            let end = cfg.q_max.sqrt();
            (end / 200.0, end, 200)
        }
        Figure::CoefficientVsMultiplier => (-1.5, 1.0, 250),
    }
}

fn gnuplot_script(fig: Figure, csv: &str) -> String {
    let (x, y) = fig.axes();
    let branches = match fig {
        Figure::EnergyVsCoefficient => "extremal",
        Figure::EnergyEnstrophy | Figure::MultipliersVsEnstrophy => "plus minus",
        Figure::CoefficientVsMultiplier => "pro counter",
    };
    format!(
        "set datafile separator ','\nset datafile columnheaders\nset xlabel '{x}'\nset ylabel '{y}'\nset key outside\n\
         plot for [b in \"{branches}\"] '{csv}' using 1:(strcol(3) eq b ? $2 : NaN) with lines title b\n"
    )
}

fn figures(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let fig = Figure::from_number(cfg.fig.ok_or_else(|| usage("`figures` requires `fig`"))?)
        .map_err(|e| usage(e.to_string()))?;
    let p = params(cfg, cfg.q_rel.unwrap_or(1.0))?;
    let (s0, s1, n) = default_sweep(fig, cfg, p.omega_c());
    let sweep = Sweep::new(cfg.sweep_start.unwrap_or(s0), cfg.sweep_end.unwrap_or(s1), cfg.sweep_points.unwrap_or(n))
        .map_err(|e| usage(e.to_string()))?;
    let curves = figure_curves(fig, &p, &sweep).map_err(|e| usage(e.to_string()))?;
    let mut art = Artifacts::new(cfg)?;
    if cfg.gnuplot {
        art.write("gp", &gnuplot_script(fig, &art.file_name("csv")))?;
    }
    let (x, y) = fig.axes();
    let result = json!({
        "figure": fig.number(),
        "x_axis": x,
        "y_axis": y,
        "sweep": sweep,
        "points": curves.points.len(),
    });
    finish(cfg, art, Some(curves.to_csv()), result, false)
}
