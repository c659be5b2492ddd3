use gapbound_core::bounds::{classical_bounds, BoundsReport};
use gapbound_core::moc_pde::{evolve, Flux, Profile, StepControls};
use gapbound_core::params::bonnet_myers_diameter;
use gapbound_core::sturm::{first_eigenvalue, sl_fd_oracle_extrapolated, sphere_limit_eigenvalue};
use gapbound_core::warped::{
    default_amplitude, fit_decay, radial_flow, ricci_bounds, seeded_concave_profile,
    seeded_initial_data, verify_moc, SymmetricGrid, WarpedMetric,
};
use gapbound_core::{Error, ModelParams, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Command, Options, RunConfig, DEFAULT_FLOW_GRID, DEFAULT_ORACLE_GRID};
use crate::output::{normalise, Report};

const DECAY_SAMPLES: usize = 200;
const FLOW_SAMPLES: usize = 20;
const DECAY_WINDOW: f64 = 0.5;

pub fn execute(config: &RunConfig) -> Result<Report> {
    let o = &config.options;
    let report = match config.command {
        Command::Eigen {
            sphere_limit: true, ..
        } => Report::Single(to_value(&sphere_limit(o)?)),
        Command::Eigen { oracle, .. } => Report::Single(to_value(&eigen(o, oracle)?)),
        Command::Bounds => Report::Single(to_value(&classical_bounds(&single_params(o)?, o.tol)?)),
        Command::Evolve => Report::Single(to_value(&evolve_profile(o)?)),
        Command::Decay => Report::Single(to_value(&decay(o)?)),
        Command::VerifyMoc => Report::Single(to_value(&verify(o)?)),
        Command::Ricci { a } => Report::Single(to_value(&ricci(o, a)?)),
        Command::Sweep => Report::Rows(sweep(o)?.iter().map(to_value).collect()),
    };
    Ok(report)
}

fn to_value<T: Serialize>(report: &T) -> Value {
    normalise(serde_json::to_value(report).expect("reports serialise"))
}

fn single<T: Copy>(values: &[T], name: &str) -> Result<T> {
    match values {
        [v] => Ok(*v),
        [] => Err(Error::InvalidParams(format!("--{name} is required"))),
        _ => Err(Error::InvalidParams(format!(
            "--{name} takes a single value outside sweep"
        ))),
    }
}

fn single_params(o: &Options) -> Result<ModelParams> {
    ModelParams::new(
        single(&o.n, "n")?,
        single(&o.kappa, "kappa")?,
        single(&o.diameter, "diameter")?,
    )
}

fn controls(o: &Options, default_samples: usize) -> StepControls {
    StepControls {
        cfl: o.cfl,
        ..StepControls::with_samples(o.samples.unwrap_or(default_samples))
    }
}

#[derive(Serialize)]
struct EigenReport {
    n: u32,
    kappa: f64,
    diameter: f64,
    tol: f64,
    mu: f64,
    bracket_lo: f64,
    bracket_hi: f64,
    iterations: usize,
    steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_grid: Option<usize>,
}

fn eigen(o: &Options, oracle: bool) -> Result<EigenReport> {
    let params = single_params(o)?;
    let r = first_eigenvalue(&params, o.tol)?;
    let grid = o.grid.unwrap_or(DEFAULT_ORACLE_GRID);
    let oracle_mu = if oracle {
        Some(sl_fd_oracle_extrapolated(&params, grid)?)
    } else {
        None
    };
    Ok(EigenReport {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        tol: o.tol,
        mu: r.mu,
        bracket_lo: r.bracket_lo,
        bracket_hi: r.bracket_hi,
        iterations: r.iterations,
        steps: r.steps,
        oracle_mu,
        oracle_grid: oracle.then_some(grid),
    })
}

#[derive(Serialize)]
struct SphereLimitReport {
    n: u32,
    kappa: f64,
    diameter: f64,
    mu: f64,
    sphere_limit: bool,
}

fn sphere_limit(o: &Options) -> Result<SphereLimitReport> {
    let n = single(&o.n, "n")?;
    let kappa = single(&o.kappa, "kappa")?;
    let mu = sphere_limit_eigenvalue(n, kappa)?;
    let diameter = bonnet_myers_diameter(kappa).expect("positive curvature");
    Ok(SphereLimitReport {
        n,
        kappa,
        diameter,
        mu,
        sphere_limit: true,
    })
}

#[derive(Serialize)]
struct ProfileSample {
    t: f64,
    phi: Vec<f64>,
}

#[derive(Serialize)]
struct EvolveReport {
    n: u32,
    kappa: f64,
    diameter: f64,
    flux: String,
    grid: usize,
    cfl: f64,
    seed: u64,
    t_end: f64,
    final_t: f64,
    initial_osc: f64,
    final_osc: f64,
    nondecreasing: bool,
    s: Vec<f64>,
    profiles: Vec<ProfileSample>,
}

fn evolve_profile(o: &Options) -> Result<EvolveReport> {
    let params = single_params(o)?;
    let grid = o.grid.unwrap_or(DEFAULT_FLOW_GRID);
    let phi0 = seeded_concave_profile(&params, grid, o.seed)?;
    let flux = o.flux.resolve(phi0.oscillation(), params.diameter)?;
    let t_end = o.t_end.unwrap_or(1.0);
    let out = evolve(&flux, &params, &phi0, t_end, &controls(o, FLOW_SAMPLES))?;
    let last = out.last().expect("at least one output time");
    let tol = 1e-10 * phi0.oscillation();
    Ok(EvolveReport {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        flux: flux.to_string(),
        grid,
        cfl: o.cfl,
        seed: o.seed,
        t_end,
        final_t: last.t,
        initial_osc: phi0.oscillation(),
        final_osc: last.oscillation(),
        nondecreasing: out.iter().all(|p| p.is_nondecreasing(tol)),
        s: phi0.grid.nodes(),
        profiles: out
            .iter()
            .map(|p| ProfileSample {
                t: p.t,
                phi: p.values.clone(),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct OscSample {
    t: f64,
    osc: f64,
}

#[derive(Serialize)]
struct DecayReport {
    n: u32,
    kappa: f64,
    diameter: f64,
    flux: String,
    grid: usize,
    seed: u64,
    t_end: f64,
    window: f64,
    mu: f64,
    rate: f64,
    rel_error: f64,
    series: Vec<OscSample>,
}

fn decay(o: &Options) -> Result<DecayReport> {
    let params = single_params(o)?;
    let mu = first_eigenvalue(&params, o.tol)?.mu;
    let grid = SymmetricGrid::new(params.half_diameter(), o.grid.unwrap_or(DEFAULT_FLOW_GRID))?;
    let u0 = seeded_initial_data(&params, grid, o.seed, true)?;
    let osc = u0.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v))
        - u0.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    let flux = o.flux.resolve(osc, params.diameter)?;
    let metric = WarpedMetric::with_default_amplitude(params)?;
    let t_end = o.t_end.unwrap_or(6.0 / mu);
    let solution = radial_flow(
        &metric,
        &flux,
        grid,
        &u0,
        t_end,
        &controls(o, DECAY_SAMPLES),
    )?;
    let series = solution.oscillation_series();
    let rate = fit_decay(&series, DECAY_WINDOW)?;
    Ok(DecayReport {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        flux: flux.to_string(),
        grid: grid.m,
        seed: o.seed,
        t_end,
        window: DECAY_WINDOW,
        mu,
        rate,
        rel_error: (rate - mu).abs() / mu,
        series: series
            .into_iter()
            .map(|(t, osc)| OscSample { t, osc })
            .collect(),
    })
}

#[derive(Serialize)]
struct VerifyReport {
    n: u32,
    kappa: f64,
    diameter: f64,
    flux: String,
    grid: usize,
    a: f64,
    seed: u64,
    t_end: f64,
    moc_tol: f64,
    pairs_checked: usize,
    violations: usize,
    worst_margin: f64,
    antipodal_defect: f64,
}

fn verify(o: &Options) -> Result<VerifyReport> {
    let params = single_params(o)?;
    let m = o.grid.unwrap_or(DEFAULT_FLOW_GRID);
    let phi0: Profile = seeded_concave_profile(&params, m, o.seed)?;
    let flux: Flux = o.flux.resolve(phi0.oscillation(), params.diameter)?;
    let grid = SymmetricGrid::new(params.half_diameter(), m)?;
    let metric = WarpedMetric::with_default_amplitude(params)?;
    let t_end = o.t_end.unwrap_or(1.0);
    let controls = controls(o, FLOW_SAMPLES);
    let phis = evolve(&flux, &params, &phi0, t_end, &controls)?;
    let solution = radial_flow(
        &metric,
        &flux,
        grid,
        &grid.odd_extension(&phi0.values),
        t_end,
        &controls,
    )?;
    let moc_tol = 5.0 * grid.h * grid.h * solution.profiles[0].oscillation();
    let r = verify_moc(&solution, &phis, moc_tol)?;
    Ok(VerifyReport {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        flux: flux.to_string(),
        grid: m,
        a: metric.a,
        seed: o.seed,
        t_end,
        moc_tol,
        pairs_checked: r.pairs_checked,
        violations: r.violations,
        worst_margin: r.worst_margin,
        antipodal_defect: r.antipodal_defect,
    })
}

#[derive(Serialize)]
struct RicciOutput {
    n: u32,
    kappa: f64,
    diameter: f64,
    a: f64,
    radial: f64,
    tangential_min: f64,
    admissible: bool,
}

fn ricci(o: &Options, a: Option<f64>) -> Result<RicciOutput> {
    let params = single_params(o)?;
    let a = a.unwrap_or_else(|| default_amplitude(params.kappa));
    let r = ricci_bounds(params.n, params.kappa, a, params.diameter)?;
    Ok(RicciOutput {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        a,
        radial: r.radial,
        tangential_min: r.tangential_min,
        admissible: r.admissible,
    })
}

fn sweep(o: &Options) -> Result<Vec<BoundsReport>> {
    for (name, empty) in [
        ("n", o.n.is_empty()),
        ("kappa", o.kappa.is_empty()),
        ("diameter", o.diameter.is_empty()),
    ] {
        if empty {
            return Err(Error::InvalidParams(format!("--{name} is required")));
        }
    }
    let mut tuples = Vec::new();
    for &n in &o.n {
        for &kappa in &o.kappa {
            for &diameter in &o.diameter {
                tuples.push(ModelParams::new(n, kappa, diameter)?);
            }
        }
    }
    tuples.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.kappa.total_cmp(&b.kappa))
            .then(a.diameter.total_cmp(&b.diameter))
    });
    tuples.dedup();
    tuples
        .par_iter()
        .map(|p| classical_bounds(p, o.tol))
        .collect()
}
