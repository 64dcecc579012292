//! Seeded Monte Carlo experiments and the tables they emit.
//!
//! Trial `i` of an experiment draws all of its randomness from
//! [`rng_for`]`(seed, i)`, so results do not depend on how rayon schedules
//! the trials and every trial can be replayed alone. Reductions only add
//! integer counts or sum in trial order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{rng_for, sample_network, ChannelRealization};
use crate::error::{invalid, Error, Result};
use crate::game::{solve_equilibrium, EfficiencyModel, EquilibriumResult, NashOptions};
use crate::lsa::{self, mu, nu};
use crate::params::NetworkParams;
use crate::rake::{compute_gains, compute_gains_with, network_weights, GainEngine, GainSet};
use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(invalid(
                "format",
                format!("`{other}` is not one of csv, jsonl"),
            )),
        }
    }
}

/// Writes `rows` as CSV (one header row) or JSON lines, columns in field order.
pub fn write_table<T: Serialize, W: Write>(
    rows: &[T],
    format: OutputFormat,
    out: W,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(std::io::Error::other)?;
            }
            w.flush()
        }
        OutputFormat::Jsonl => {
            let mut out = out;
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}

/// Which parameter an experiment sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Sweep {
    /// Frame counts crossed with power delay profile ratios in dB.
    Frames {
        frames: Vec<usize>,
        pdp_ratios_db: Vec<f64>,
    },
    /// Receiver rake ratios.
    RakeRatios(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub params: NetworkParams,
    pub trials: usize,
    pub seed: u64,
    pub sweep: Sweep,
    pub nash: NashOptions,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        match &self.sweep {
            Sweep::Frames {
                frames,
                pdp_ratios_db,
            } => {
                if frames.is_empty() || frames.contains(&0) {
                    return Err(invalid(
                        "frames_sweep",
                        "needs at least one value, all >= 1",
                    ));
                }
                if pdp_ratios_db.is_empty()
                    || pdp_ratios_db.iter().any(|d| !(d.is_finite() && *d >= 0.0))
                {
                    return Err(invalid(
                        "pdp_ratios_db",
                        "needs at least one value, all >= 0 dB",
                    ));
                }
            }
            Sweep::RakeRatios(betas) => {
                if betas.is_empty() || betas.iter().any(|b| !(*b > 0.0 && *b <= 1.0)) {
                    return Err(invalid("betas", "needs at least one value, all in (0, 1]"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoRow {
    pub nf: usize,
    pub lambda_db: f64,
    pub po: f64,
    pub po_nonconverged: f64,
    pub trials: usize,
    pub seed: u64,
    pub nf_min_pred: Option<usize>,
}

/// Per trial and frame count: `(any user saturated or not converged, not converged)`.
fn po_trial(
    trial: usize,
    params: &NetworkParams,
    frames: &[usize],
    model: &EfficiencyModel,
    seed: u64,
    nash: NashOptions,
) -> Result<Vec<(bool, bool)>> {
    let mut rng = rng_for(seed, trial as u64);
    let channels = sample_network(&mut rng, params)?;
    let weights = network_weights(&channels, params.rake_ratio);
    let base = compute_gains(&channels, &weights, &params.with_frames(1))?;
    Ok(frames
        .iter()
        .map(|&nf| {
            let p = params.with_frames(nf);
            let eq = solve_equilibrium(&base.rescaled(p.processing_gain()), &p, model, nash);
            (eq.any_saturated() || !eq.converged, !eq.converged)
        })
        .collect())
}

/// Probability that at least one user ends up at `p_max`, per frame count and profile.
pub fn run_po_vs_frames(spec: &ExperimentSpec) -> Result<Vec<PoRow>> {
    spec.validate()?;
    let Sweep::Frames {
        frames,
        pdp_ratios_db,
    } = &spec.sweep
    else {
        return Err(invalid("sweep", "the Po experiment sweeps frames"));
    };
    let model = EfficiencyModel::for_params(&spec.params)?;
    let mut rows = Vec::with_capacity(frames.len() * pdp_ratios_db.len());
    for &lambda_db in pdp_ratios_db {
        let params = spec.params.with_pdp_ratio(db_to_linear(lambda_db));
        let outcomes = (0..spec.trials)
            .into_par_iter()
            .map(|t| po_trial(t, &params, frames, &model, spec.seed, spec.nash))
            .collect::<Result<Vec<_>>>()?;
        let nf_min_pred = lsa::min_frames(&params, &model).ok();
        for (i, &nf) in frames.iter().enumerate() {
            let sat = outcomes.iter().filter(|o| o[i].0).count();
            let nonconv = outcomes.iter().filter(|o| o[i].1).count();
            rows.push(PoRow {
                nf,
                lambda_db,
                po: sat as f64 / spec.trials as f64,
                po_nonconverged: nonconv as f64 / spec.trials as f64,
                trials: spec.trials,
                seed: spec.seed,
                nf_min_pred,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityRow {
    pub user: usize,
    pub distance_m: f64,
    /// `||alpha_k||^2`
    pub channel_gain: f64,
    pub beta: f64,
    pub p_watts: f64,
    pub sinr_db: f64,
    pub utility_sim: f64,
    /// All-Rake large-system utility at this user's channel gain, reduced by the predicted loss.
    pub utility_lsa: Option<f64>,
    pub loss_db_pred: Option<f64>,
    pub saturated: bool,
    pub seed: u64,
}

/// One realization solved for several receivers.
#[derive(Debug, Clone)]
pub struct UtilityScenario {
    pub channels: Vec<ChannelRealization>,
    /// `(beta, gains, equilibrium)` in sweep order.
    pub runs: Vec<(f64, GainSet, EquilibriumResult)>,
}

pub fn utility_scenario(spec: &ExperimentSpec) -> Result<UtilityScenario> {
    spec.validate()?;
    let Sweep::RakeRatios(betas) = &spec.sweep else {
        return Err(invalid(
            "sweep",
            "the utility experiment sweeps rake ratios",
        ));
    };
    let model = EfficiencyModel::for_params(&spec.params)?;
    let mut rng = rng_for(spec.seed, 0);
    let channels = sample_network(&mut rng, &spec.params)?;
    let runs = betas
        .iter()
        .map(|&beta| {
            let params = spec.params.with_rake_ratio(beta);
            let weights = network_weights(&channels, beta);
            let gains = compute_gains(&channels, &weights, &params)?;
            let eq = solve_equilibrium(&gains, &params, &model, spec.nash);
            Ok((beta, gains, eq))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UtilityScenario { channels, runs })
}

/// Equilibrium utilities of a single seeded realization next to the large-system overlays.
pub fn run_utility_vs_gain(spec: &ExperimentSpec) -> Result<Vec<UtilityRow>> {
    let scenario = utility_scenario(spec)?;
    let model = EfficiencyModel::for_params(&spec.params)?;
    let arake = spec.params.with_rake_ratio(1.0);
    let mut rows = Vec::new();
    for (beta, _, eq) in &scenario.runs {
        let pred = lsa::loss(&spec.params.with_rake_ratio(*beta), &model).ok();
        for (k, ch) in scenario.channels.iter().enumerate() {
            let gain = ch.energy();
            let utility_lsa = match (lsa::asymptotic_utility(gain, &arake, &model), pred) {
                (Ok(u), Some(l)) => Some(u / l),
                _ => None,
            };
            rows.push(UtilityRow {
                user: k,
                distance_m: ch.distance,
                channel_gain: gain,
                beta: *beta,
                p_watts: eq.powers[k],
                sinr_db: linear_to_db(eq.sinrs[k]),
                utility_sim: eq.utilities[k],
                utility_lsa,
                loss_db_pred: pred.map(linear_to_db),
                saturated: eq.saturated[k] || !eq.converged,
                seed: spec.seed,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub lambda_db: f64,
    pub beta: f64,
    pub alpha: f64,
    pub mu: f64,
    pub nu: f64,
}

/// `mu` and `nu` tabulated over a grid, `beta` varying fastest.
pub fn emit_mu_nu_curves(
    lambdas_db: &[f64],
    betas: &[f64],
    alphas: &[f64],
) -> Result<Vec<CurveRow>> {
    let mut rows = Vec::with_capacity(lambdas_db.len() * betas.len() * alphas.len());
    for &lambda_db in lambdas_db {
        let lam = db_to_linear(lambda_db);
        for &alpha in alphas {
            for &beta in betas {
                rows.push(CurveRow {
                    lambda_db,
                    beta,
                    alpha,
                    mu: mu(lam, beta)?,
                    nu: nu(lam, beta, alpha)?,
                });
            }
        }
    }
    Ok(rows)
}

/// A point at which the large-system limits are checked by sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsaCheckPoint {
    pub lambda_db: f64,
    pub beta: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsaCheckRow {
    pub lambda_db: f64,
    pub beta: f64,
    pub alpha: f64,
    pub paths: usize,
    pub draws: usize,
    pub mu_theory: f64,
    pub mu_empirical: f64,
    pub mu_rel_err: f64,
    pub nu_theory: f64,
    pub nu_empirical: f64,
    pub nu_rel_err: f64,
    pub pass: bool,
    pub seed: u64,
}

/// Sample means of `N/Gamma_k/(K-1)` and `N/chi_k` over users and `draws` networks.
pub fn sample_interference_factors(
    params: &NetworkParams,
    draws: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    params.validate()?;
    if params.users < 2 {
        return Err(invalid("users", "the MAI factor needs at least two users"));
    }
    let n = params.processing_gain() as f64;
    let per_draw = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = rng_for(seed, d as u64);
            let channels = sample_network(&mut rng, params)?;
            let weights = network_weights(&channels, params.rake_ratio);
            let g = compute_gains_with(
                &channels,
                &weights,
                params.chips,
                params.processing_gain(),
                GainEngine::Auto,
            )?;
            let k = params.users;
            let mai: f64 = (0..k)
                .map(|u| n * g.inverse_mai_ratio(u) / (k as f64 - 1.0))
                .sum();
            let si: f64 = (0..k).map(|u| n * g.inverse_si_ratio(u)).sum();
            Ok((mai / k as f64, si / k as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = per_draw.iter().map(|x| x.0).sum::<f64>() / draws as f64;
    let s = per_draw.iter().map(|x| x.1).sum::<f64>() / draws as f64;
    Ok((m, s))
}

/// Compares sampled interference factors with `mu` and `nu` at each point.
pub fn validate_lsa(
    base: &NetworkParams,
    points: &[LsaCheckPoint],
    draws: usize,
    seed: u64,
    tolerance: f64,
) -> Result<Vec<LsaCheckRow>> {
    if draws == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    points
        .iter()
        .map(|pt| {
            let chips = (pt.alpha * base.paths as f64).round() as usize;
            let params = NetworkParams {
                chips,
                rake_ratio: pt.beta,
                pdp_ratio: db_to_linear(pt.lambda_db),
                ..*base
            };
            let (mu_emp, nu_emp) = sample_interference_factors(&params, draws, seed)?;
            let mu_th = mu(params.pdp_ratio, pt.beta)?;
            let nu_th = nu(params.pdp_ratio, pt.beta, params.load())?;
            let mu_rel_err = (mu_emp - mu_th).abs() / mu_th;
            let nu_rel_err = (nu_emp - nu_th).abs() / nu_th;
            Ok(LsaCheckRow {
                lambda_db: pt.lambda_db,
                beta: pt.beta,
                alpha: pt.alpha,
                paths: params.paths,
                draws,
                mu_theory: mu_th,
                mu_empirical: mu_emp,
                mu_rel_err,
                nu_theory: nu_th,
                nu_empirical: nu_emp,
                nu_rel_err,
                pass: mu_rel_err <= tolerance && nu_rel_err <= tolerance,
                seed,
            })
        })
        .collect()
}
