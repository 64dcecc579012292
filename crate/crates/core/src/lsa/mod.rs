//! Large-system closed forms.
//!
//! When `L` and `Nc` grow with `beta = P/L` and `alpha = Nc/L` fixed, the
//! multiple-access and self-interference ratios of every user converge to
//!
//! ```text
//! 1/Gamma_k -> (K - 1) mu(Lambda, beta) / N
//! 1/chi_k   -> nu(Lambda, beta, alpha) / N
//! ```
//!
//! which removes the channel realizations of the other users from the
//! equilibrium utility, the minimum frame count and the PRake loss.
//!
//! `nu` is piecewise with five regions in the `(alpha, beta)` plane. Branch
//! IV is implemented with `3 Lambda beta` in place of the printed
//! `3 Lambda alpha` term: with that reading it is continuous with branches
//! II, III and V and has a finite flat-profile limit, while the printed form
//! jumps on `alpha = 1 - beta` and `alpha = 1`. The printed form stays
//! available as [`nu_branch_iv_printed`].
//!
//! Near `Lambda = 1` every printed expression is `0/0`, so for
//! `ln(Lambda) < FLAT_SERIES_MAX_LOG` each branch is evaluated from its
//! Taylor series in `ln(Lambda)` instead.

mod series;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::game::EfficiencyModel;
use crate::params::NetworkParams;
use crate::roots::bisect;
use crate::units::linear_to_db;

/// Below this value of `ln(Lambda)` the Taylor series replace the closed forms.
pub const FLAT_SERIES_MAX_LOG: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NuBranch {
    /// `0 <= alpha <= min(beta, 1 - beta)`
    I,
    /// `beta <= alpha <= 1 - beta`, `beta <= 1/2`
    II,
    /// `1 - beta <= alpha <= beta`, `beta >= 1/2`
    III,
    /// `max(beta, 1 - beta) <= alpha <= 1`
    IV,
    /// `alpha >= 1`
    V,
}

impl NuBranch {
    pub const ALL: [NuBranch; 5] = [
        NuBranch::I,
        NuBranch::II,
        NuBranch::III,
        NuBranch::IV,
        NuBranch::V,
    ];

    /// Region containing `(beta, alpha)`; shared boundaries resolve to the first match.
    pub fn select(rake_ratio: f64, load: f64) -> NuBranch {
        let (b, a) = (rake_ratio, load);
        if a <= b.min(1.0 - b) {
            NuBranch::I
        } else if b <= a && a <= 1.0 - b && b <= 0.5 {
            NuBranch::II
        } else if 1.0 - b <= a && a <= b && b >= 0.5 {
            NuBranch::III
        } else if b.max(1.0 - b) <= a && a <= 1.0 {
            NuBranch::IV
        } else {
            NuBranch::V
        }
    }

    /// Whether `(beta, alpha)` lies in this branch's closed region.
    pub fn contains(self, rake_ratio: f64, load: f64) -> bool {
        let (b, a) = (rake_ratio, load);
        match self {
            NuBranch::I => a <= b.min(1.0 - b),
            NuBranch::II => b <= a && a <= 1.0 - b && b <= 0.5,
            NuBranch::III => 1.0 - b <= a && a <= b && b >= 0.5,
            NuBranch::IV => b.max(1.0 - b) <= a && a <= 1.0,
            NuBranch::V => a >= 1.0,
        }
    }
}

/// A point of the large-system parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsaPoint {
    /// Linear power delay profile ratio, `>= 1`.
    pub pdp_ratio: f64,
    pub rake_ratio: f64,
    pub load: f64,
}

impl LsaPoint {
    pub fn of(params: &NetworkParams) -> Self {
        Self {
            pdp_ratio: params.pdp_ratio,
            rake_ratio: params.rake_ratio,
            load: params.load(),
        }
    }

    pub fn branch(&self) -> NuBranch {
        NuBranch::select(self.rake_ratio, self.load)
    }

    pub fn mu(&self) -> Result<f64> {
        mu(self.pdp_ratio, self.rake_ratio)
    }

    pub fn nu(&self) -> Result<f64> {
        nu(self.pdp_ratio, self.rake_ratio, self.load)
    }
}

fn check_pdp(pdp_ratio: f64) -> Result<()> {
    if pdp_ratio.is_finite() && pdp_ratio >= 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "pdp_ratio",
            format!("{pdp_ratio} must be finite and >= 1"),
        ))
    }
}

fn check_rake(rake_ratio: f64) -> Result<()> {
    if rake_ratio > 0.0 && rake_ratio <= 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "rake_ratio",
            format!("{rake_ratio} is outside (0, 1]"),
        ))
    }
}

fn check_load(load: f64) -> Result<()> {
    if load.is_finite() && load > 0.0 {
        Ok(())
    } else {
        Err(invalid("load", format!("{load} must be finite and > 0")))
    }
}

/// MAI factor `mu = (Lambda - 1) Lambda^(beta - 1) / (Lambda^beta - 1)`; `1/beta` for a flat profile.
pub fn mu(pdp_ratio: f64, rake_ratio: f64) -> Result<f64> {
    check_pdp(pdp_ratio)?;
    check_rake(rake_ratio)?;
    let t = pdp_ratio.ln();
    if t == 0.0 {
        return Ok(1.0 / rake_ratio);
    }
    Ok(t.exp_m1() * ((rake_ratio - 1.0) * t).exp() / (rake_ratio * t).exp_m1())
}

/// SI factor `nu(Lambda, beta, alpha)`.
pub fn nu(pdp_ratio: f64, rake_ratio: f64, load: f64) -> Result<f64> {
    check_pdp(pdp_ratio)?;
    check_rake(rake_ratio)?;
    check_load(load)?;
    let branch = NuBranch::select(rake_ratio, load);
    Ok(nu_branch(branch, pdp_ratio, rake_ratio, load))
}

/// Evaluates the closed form of `branch` at any point, inside its region or not.
pub fn nu_branch(branch: NuBranch, pdp_ratio: f64, rake_ratio: f64, load: f64) -> f64 {
    let t = pdp_ratio.ln();
    if t < FLAT_SERIES_MAX_LOG {
        let table = match branch {
            NuBranch::I => &series::SERIES_I,
            NuBranch::II => &series::SERIES_II,
            NuBranch::III => &series::SERIES_III,
            NuBranch::IV => &series::SERIES_IV,
            NuBranch::V => &series::SERIES_V,
        };
        return series::evaluate(table, t, load, rake_ratio);
    }
    nu_closed_form(branch, pdp_ratio, rake_ratio, load, false)
}

/// Branch IV exactly as printed, with `3 Lambda alpha` in the last bracket.
///
/// Disagrees with branch II on `alpha = 1 - beta` and with branch V on
/// `alpha = 1`; agrees with branch III on `alpha = beta`.
pub fn nu_branch_iv_printed(pdp_ratio: f64, rake_ratio: f64, load: f64) -> f64 {
    nu_closed_form(NuBranch::IV, pdp_ratio, rake_ratio, load, true)
}

fn nu_closed_form(branch: NuBranch, lam: f64, b: f64, a: f64, printed_iv: bool) -> f64 {
    let t = lam.ln();
    let lb = (b * t).exp();
    let la = (a * t).exp();
    let lb_m1 = (b * t).exp_m1();
    let la_m1 = (a * t).exp_m1();
    let lam2 = lam * lam;
    let den_lo = 2.0 * lb_m1 * lb_m1 * a * lam * la * t;
    let den_hi = den_lo * lam;
    match branch {
        NuBranch::I => {
            let num = lam * la_m1 * (4.0 * lb * lb + 3.0 * la - 1.0)
                - 2.0 * lb * la * (lb + 3.0 * lam - 1.0) * a * t;
            num / den_lo
        }
        NuBranch::II => {
            let num = lam * (4.0 * la - 1.0) * (lb_m1 * (lb + 1.0))
                - 2.0 * lb * la * (3.0 * lam * b - a + lb * a) * t;
            num / den_lo
        }
        NuBranch::III => {
            let num = -4.0 * lam2 * lb * lb - 4.0 * lam2 * la
                + lb * lb * la * la
                + 4.0 * lam2 * lb * lb * la
                + 3.0 * lam2 * la * la
                - 2.0 * lam * lb * la * (b + 3.0 * lam * a + lb * a - 1.0) * t;
            num / den_hi
        }
        NuBranch::IV => {
            let inner = if printed_iv {
                3.0 * lam * a
            } else {
                3.0 * lam * b
            };
            let num =
                -lam2 * lb * lb - 4.0 * lam2 * la + lb * lb * la * la + 4.0 * lam2 * lb * lb * la
                    - 2.0 * lam * lb * la * (b + inner + lb * a - 1.0) * t;
            num / den_hi
        }
        NuBranch::V => {
            let num = 2.0 * lam * (lb_m1 * (lb + 1.0)) - (lb + b + 3.0 * lam * b - 1.0) * lb * t;
            num / (lb_m1 * lb_m1 * a * lam * t)
        }
    }
}

/// All-Rake MAI factor; identically one.
pub fn mu_arake(pdp_ratio: f64) -> Result<f64> {
    check_pdp(pdp_ratio)?;
    Ok(1.0)
}

/// All-Rake SI factor, the `beta -> 1` limit of [`nu`].
pub fn nu_arake(pdp_ratio: f64, load: f64) -> Result<f64> {
    check_pdp(pdp_ratio)?;
    check_load(load)?;
    let t = pdp_ratio.ln();
    if t < FLAT_SERIES_MAX_LOG {
        // at beta = 1 branch III covers alpha <= 1 and branch V alpha >= 1
        let branch = if load <= 1.0 {
            NuBranch::III
        } else {
            NuBranch::V
        };
        return Ok(nu_branch(branch, pdp_ratio, 1.0, load));
    }
    let lam = pdp_ratio;
    let d = t.exp_m1();
    if load <= 1.0 {
        let num =
            lam * lam - 1.0 + (load * t).exp() - ((2.0 - load) * t).exp() - 2.0 * lam * load * t;
        Ok(2.0 * num / (d * d * load * t))
    } else {
        Ok(2.0 * (lam * lam - 1.0 - 2.0 * lam * t) / (d * d * load * t))
    }
}

/// `gamma~* [(K - 1) mu + nu]` for the receiver with ratio `rake_ratio`.
pub fn interference_sum(
    params: &NetworkParams,
    model: &EfficiencyModel,
    rake_ratio: f64,
) -> Result<f64> {
    let m = mu(params.pdp_ratio, rake_ratio)?;
    let n = nu(params.pdp_ratio, rake_ratio, params.load())?;
    Ok(model.target_sinr_no_si() * ((params.users as f64 - 1.0) * m + n))
}

fn arake_interference_sum(params: &NetworkParams, model: &EfficiencyModel) -> Result<f64> {
    let m = mu_arake(params.pdp_ratio)?;
    let n = nu_arake(params.pdp_ratio, params.load())?;
    Ok(model.target_sinr_no_si() * ((params.users as f64 - 1.0) * m + n))
}

/// Large-system equilibrium utility of a user with signal gain `h_sp`.
pub fn asymptotic_utility(
    h_sp: f64,
    params: &NetworkParams,
    model: &EfficiencyModel,
) -> Result<f64> {
    if !(h_sp > 0.0) {
        return Err(invalid("h_sp", "must be > 0"));
    }
    let n = params.processing_gain() as f64;
    let load = interference_sum(params, model, params.rake_ratio)? / n;
    if load >= 1.0 {
        return Err(Error::Infeasible(format!(
            "large-system interference load {load:.4} >= 1; more frames are needed"
        )));
    }
    Ok(single_user_utility(h_sp, params, model) * (1.0 - load))
}

/// Interference-free utility `h_sp (D/M) R f(gamma~*) / (sigma^2 gamma~*)`.
pub fn single_user_utility(h_sp: f64, params: &NetworkParams, model: &EfficiencyModel) -> f64 {
    let g = model.target_sinr_no_si();
    h_sp * params.payload_fraction() * params.rate * model.efficiency(g)
        / (params.noise_variance * g)
}

/// Smallest frame count for which all users reach their target SINR.
pub fn min_frames(params: &NetworkParams, model: &EfficiencyModel) -> Result<usize> {
    let s = interference_sum(params, model, params.rake_ratio)?;
    Ok(((s / params.chips as f64).ceil() as usize).max(1))
}

/// PRake-versus-ARake utility loss (linear, `>= 1` in the usual regime).
pub fn loss(params: &NetworkParams, model: &EfficiencyModel) -> Result<f64> {
    loss_at(params, model, params.rake_ratio)
}

pub fn loss_db(params: &NetworkParams, model: &EfficiencyModel) -> Result<f64> {
    loss(params, model).map(linear_to_db)
}

fn loss_at(params: &NetworkParams, model: &EfficiencyModel, rake_ratio: f64) -> Result<f64> {
    let n = params.processing_gain() as f64;
    let arake = n - arake_interference_sum(params, model)?;
    if arake <= 0.0 {
        return Err(Error::Infeasible(
            "the all-Rake receiver is infeasible at these parameters".into(),
        ));
    }
    let prake = n - interference_sum(params, model, rake_ratio)?;
    if prake <= 0.0 {
        return Err(Error::Infeasible(format!(
            "the partial Rake with beta = {rake_ratio} is infeasible at these parameters"
        )));
    }
    Ok(mu(params.pdp_ratio, rake_ratio)? * arake / prake)
}

/// Finds the rake ratio whose large-system loss equals `target_db`.
///
/// Searches `beta` in `[max(1/L, beta_feasible), 1]`. When the loss is not
/// monotone over that range the smallest `beta` hitting the target is returned.
pub fn invert_loss(target_db: f64, params: &NetworkParams, model: &EfficiencyModel) -> Result<f64> {
    if !target_db.is_finite() {
        return Err(invalid("target_loss_db", "must be finite"));
    }
    // ARake feasibility and the upper end of the range
    loss_at(params, model, 1.0)?;
    let beta_min = 1.0 / params.paths as f64;
    let n = params.processing_gain() as f64;
    let feasible = |b: f64| {
        interference_sum(params, model, b)
            .map(|s| s < n)
            .unwrap_or(false)
    };

    let (lo, max_db) = if feasible(beta_min) {
        (beta_min, linear_to_db(loss_at(params, model, beta_min)?))
    } else {
        (
            feasibility_edge(beta_min, params.paths, &feasible),
            f64::INFINITY,
        )
    };
    if target_db < 0.0 || target_db > max_db {
        return Err(Error::UnattainableLoss {
            target_db,
            min_db: 0.0,
            max_db,
        });
    }
    if target_db == 0.0 {
        return Ok(1.0);
    }

    let g = |b: f64| match loss_at(params, model, b) {
        Ok(l) => linear_to_db(l) - target_db,
        Err(_) => f64::INFINITY,
    };

    const GRID: usize = 512;
    let grid: Vec<f64> = (0..=GRID)
        .map(|i| lo + (1.0 - lo) * i as f64 / GRID as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&b| g(b)).collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let (a, b) = if monotone {
        (lo, 1.0)
    } else {
        let i = values
            .windows(2)
            .position(|w| w[0] >= 0.0 && w[1] <= 0.0)
            .ok_or(Error::UnattainableLoss {
                target_db,
                min_db: 0.0,
                max_db,
            })?;
        (grid[i], grid[i + 1])
    };
    bisect(g, a, b, 1e-14).ok_or(Error::UnattainableLoss {
        target_db,
        min_db: 0.0,
        max_db,
    })
}

/// Smallest feasible `beta` in the feasible interval that contains `beta = 1`.
fn feasibility_edge(beta_min: f64, paths: usize, feasible: &dyn Fn(f64) -> bool) -> f64 {
    let mut prev = 1.0;
    for i in (1..paths).rev() {
        let b = i as f64 / paths as f64;
        if !feasible(b) {
            let sign = |x: f64| if feasible(x) { 1.0 } else { -1.0 };
            return bisect(sign, b, prev, 1e-15).unwrap_or(prev);
        }
        prev = b;
    }
    beta_min
}
