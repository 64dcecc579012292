use std::io::Write;

use anyhow::Result;
use prake_core::channel::{rng_for, sample_network};
use prake_core::experiments::{
    emit_mu_nu_curves, run_po_vs_frames, run_utility_vs_gain, validate_lsa, write_table,
    OutputFormat, Sweep,
};
use prake_core::game::{iterate_nash, EfficiencyModel};
use prake_core::lsa::{invert_loss, loss_db};
use prake_core::params::fingers_for;
use prake_core::rake::network_weights;
use prake_core::units::linear_to_db;
use serde::Serialize;

use crate::config::RunConfig;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    Saturated = 2,
    ValidationFailed = 3,
}

#[derive(Debug, Serialize)]
struct EquilibriumRow {
    user: usize,
    distance_m: f64,
    channel_gain: f64,
    p_watts: f64,
    sinr_db: f64,
    target_sinr_db: f64,
    utility: f64,
    saturated: bool,
    iterations: usize,
    converged: bool,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct DesignRow {
    target_loss_db: f64,
    beta: f64,
    fingers: usize,
    paths: usize,
    loss_db_pred: f64,
}

fn emit<T: Serialize>(rows: &[T], format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    write_table(rows, format, out)?;
    Ok(())
}

pub fn curves(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let rows = emit_mu_nu_curves(&cfg.curve_lambdas_db, &cfg.curve_betas, &cfg.curve_loads)?;
    emit(&rows, cfg.format, out)?;
    Ok(Status::Ok)
}

pub fn equilibrium(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let params = cfg.params()?;
    let nash = cfg.nash()?;
    let model = EfficiencyModel::for_params(&params)?;
    let mut rng = rng_for(cfg.seed, 0);
    let channels = sample_network(&mut rng, &params)?;
    let weights = network_weights(&channels, params.rake_ratio);
    let eq = iterate_nash(&channels, &weights, &params, &model, nash)?;
    let rows: Vec<EquilibriumRow> = channels
        .iter()
        .enumerate()
        .map(|(k, ch)| EquilibriumRow {
            user: k,
            distance_m: ch.distance,
            channel_gain: ch.energy(),
            p_watts: eq.powers[k],
            sinr_db: linear_to_db(eq.sinrs[k]),
            target_sinr_db: linear_to_db(eq.targets[k]),
            utility: eq.utilities[k],
            saturated: eq.saturated[k],
            iterations: eq.iterations,
            converged: eq.converged,
            seed: cfg.seed,
        })
        .collect();
    emit(&rows, cfg.format, out)?;
    Ok(if eq.converged && !eq.any_saturated() {
        Status::Ok
    } else {
        Status::Saturated
    })
}

pub fn po_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let spec = cfg.spec(Sweep::Frames {
        frames: cfg.frames_sweep.clone(),
        pdp_ratios_db: cfg.pdp_ratios_db.clone(),
    })?;
    emit(&run_po_vs_frames(&spec)?, cfg.format, out)?;
    Ok(Status::Ok)
}

pub fn utility_scatter(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let spec = cfg.spec(Sweep::RakeRatios(cfg.betas.clone()))?;
    let rows = run_utility_vs_gain(&spec)?;
    emit(&rows, cfg.format, out)?;
    Ok(if rows.iter().any(|r| r.saturated) {
        Status::Saturated
    } else {
        Status::Ok
    })
}

pub fn design(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let params = cfg.params()?;
    let model = EfficiencyModel::for_params(&params)?;
    let beta = invert_loss(cfg.target_loss_db, &params, &model)?;
    let row = DesignRow {
        target_loss_db: cfg.target_loss_db,
        beta,
        fingers: fingers_for(beta, params.paths),
        paths: params.paths,
        loss_db_pred: loss_db(&params.with_rake_ratio(beta), &model)?,
    };
    emit(&[row], cfg.format, out)?;
    Ok(Status::Ok)
}

pub fn validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    let params = cfg.params()?;
    let point = cfg.lsa_point()?;
    if cfg.trials == 0 {
        anyhow::bail!("invalid parameter `trials`: must be at least 1");
    }
    let rows = validate_lsa(&params, &[point], cfg.trials, cfg.seed, cfg.tolerance)?;
    emit(&rows, cfg.format, out)?;
    Ok(if rows.iter().all(|r| r.pass) {
        Status::Ok
    } else {
        Status::ValidationFailed
    })
}
