//! The noncooperative energy-efficient power control game.
//!
//! User `k` maximises `u_k = (D/M) R f(gamma_k) / p_k` over `p_k in [0, p_max]`.
//! Its best response drives the SINR to the target `gamma*_k` solving
//! `f'(g) g (1 - g/chi_k) = f(g)`, and the Nash equilibrium is the joint fixed
//! point of those best responses.

use rayon::prelude::*;

use crate::channel::ChannelRealization;
use crate::error::{invalid, Error, Result};
use crate::params::NetworkParams;
use crate::rake::{compute_gains, sinr, GainSet, RakeWeights};
use crate::roots::bisect;

/// Bracket margin for the target-SINR equation.
const BRACKET_EPS: f64 = 1e-12;

/// Packet success rate `f(gamma) = (1 - exp(-gamma/2))^M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyModel {
    total_bits: u32,
    target_no_si: f64,
}

impl EfficiencyModel {
    pub fn new(total_bits: u32) -> Result<Self> {
        if total_bits < 2 {
            return Err(invalid(
                "total_bits",
                "the efficiency exponent must be at least 2",
            ));
        }
        let mut model = Self {
            total_bits,
            target_no_si: f64::NAN,
        };
        model.target_no_si = solve_target_sinr(f64::INFINITY, &model)?;
        Ok(model)
    }

    pub fn for_params(params: &NetworkParams) -> Result<Self> {
        Self::new(params.total_bits)
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn efficiency(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        (-(-gamma / 2.0).exp_m1()).powi(self.total_bits as i32)
    }

    pub fn derivative(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        let m = self.total_bits as i32;
        let e = (-gamma / 2.0).exp();
        m as f64 * (-(-gamma / 2.0).exp_m1()).powi(m - 1) * e / 2.0
    }

    /// Target SINR without self-interference (`chi = inf`).
    pub fn target_sinr_no_si(&self) -> f64 {
        self.target_no_si
    }
}

/// Packet success rate at linear SINR `gamma`.
pub fn efficiency(gamma: f64, model: &EfficiencyModel) -> f64 {
    model.efficiency(gamma)
}

/// Residual `f'(g) g (1 - g/chi) - f(g)` of the target-SINR equation.
pub fn target_sinr_residual(gamma: f64, chi: f64, model: &EfficiencyModel) -> f64 {
    model.derivative(gamma) * gamma * (1.0 - gamma / chi) - model.efficiency(gamma)
}

/// The same equation divided by `f(g)`: `M g (1 - g/chi) / (2 (e^{g/2} - 1)) - 1`.
/// It is strictly decreasing on `(0, chi)`, from `M - 1` to `-1`.
fn normalized_residual(gamma: f64, chi: f64, total_bits: u32) -> f64 {
    total_bits as f64 * gamma * (1.0 - gamma / chi) / (2.0 * (gamma / 2.0).exp_m1()) - 1.0
}

/// Solves `f'(g) g (1 - g/chi) = f(g)` for `g in (0, chi)`; `chi` may be infinite.
pub fn solve_target_sinr(chi: f64, model: &EfficiencyModel) -> Result<f64> {
    if !(chi > 0.0) {
        return Err(invalid("chi", format!("{chi} must be > 0")));
    }
    if chi.is_infinite() && model.target_no_si.is_finite() {
        return Ok(model.target_no_si);
    }
    let m = model.total_bits;
    let res = |g: f64| normalized_residual(g, chi, m);
    let lo = BRACKET_EPS;
    let hi = if chi.is_finite() {
        chi * (1.0 - BRACKET_EPS)
    } else {
        let mut hi = 1.0;
        while res(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::NoTargetSinr("target SINR bracket diverged".into()));
            }
        }
        hi
    };
    if !(hi > lo) || res(lo) <= 0.0 || res(hi) >= 0.0 {
        return Err(Error::NoTargetSinr(format!(
            "no root of the target-SINR equation in (0, {chi:e})"
        )));
    }
    bisect(res, lo, hi, 1e-15)
        .ok_or_else(|| Error::NoTargetSinr(format!("bisection failed for chi = {chi:e}")))
}

/// Outcome of the best-response dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub powers: Vec<f64>,
    pub sinrs: Vec<f64>,
    /// Per-user target SINR `gamma*_k`; `NaN` for users without an interior best response.
    pub targets: Vec<f64>,
    /// Bits per joule.
    pub utilities: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `true` where the user transmits at `p_max`.
    pub saturated: Vec<bool>,
}

impl EquilibriumResult {
    pub fn any_saturated(&self) -> bool {
        self.saturated.iter().any(|&s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashOptions {
    /// Stop when the largest relative power change falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NashOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 10_000,
        }
    }
}

/// Interference-plus-noise seen by user `k`, excluding its own SI.
fn interference(k: usize, gains: &GainSet, powers: &[f64], noise_variance: f64) -> f64 {
    powers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(j, p)| gains.h_mai[(k, j)] * p)
        .sum::<f64>()
        + noise_variance
}

fn interior_power(
    k: usize,
    target: f64,
    gains: &GainSet,
    powers: &[f64],
    noise_variance: f64,
) -> f64 {
    let i = interference(k, gains, powers, noise_variance);
    target * i / (gains.h_sp[k] * (1.0 - target * gains.inverse_si_ratio(k)))
}

/// Utility-maximising power of user `k` given everyone else's `powers`.
pub fn best_response_power(
    k: usize,
    gains: &GainSet,
    powers: &[f64],
    noise_variance: f64,
    p_max: f64,
    model: &EfficiencyModel,
) -> Result<f64> {
    let target = solve_target_sinr(gains.si_ratio(k), model)?;
    Ok(interior_power(k, target, gains, powers, noise_variance).min(p_max))
}

/// Per-user targets; `None` where no interior best response exists.
pub fn target_sinrs(gains: &GainSet, model: &EfficiencyModel) -> Vec<Option<f64>> {
    (0..gains.users())
        .map(|k| solve_target_sinr(gains.si_ratio(k), model).ok())
        .collect()
}

/// Runs the synchronous best-response dynamics on fixed gains.
///
/// Every sweep computes all `K` best responses from the same frozen power
/// vector. Powers start at `sigma^2 gamma~* / h_sp` (capped at `p_max`).
pub fn solve_equilibrium(
    gains: &GainSet,
    params: &NetworkParams,
    model: &EfficiencyModel,
    options: NashOptions,
) -> EquilibriumResult {
    let users = gains.users();
    let sigma2 = params.noise_variance;
    let p_max = params.p_max;
    let targets = target_sinrs(gains, model);
    let start = model.target_sinr_no_si();
    let mut powers: Vec<f64> = (0..users)
        .map(|k| (sigma2 * start / gains.h_sp[k]).min(p_max))
        .collect();

    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iter {
        iterations += 1;
        let next: Vec<f64> = (0..users)
            .map(|k| match targets[k] {
                Some(t) => interior_power(k, t, gains, &powers, sigma2).min(p_max),
                None => p_max,
            })
            .collect();
        let change = next
            .iter()
            .zip(&powers)
            .map(|(n, p)| (n - p).abs() / p)
            .fold(0.0, f64::max);
        powers = next;
        if change < options.tol {
            converged = true;
            break;
        }
    }

    let sinrs: Vec<f64> = (0..users)
        .map(|k| sinr(k, gains, &powers, sigma2))
        .collect();
    let utilities = (0..users)
        .map(|k| utility_from(sinrs[k], powers[k], params, model))
        .collect();
    let saturated = powers.iter().map(|&p| p >= p_max).collect();
    EquilibriumResult {
        powers,
        sinrs,
        targets: targets.iter().map(|t| t.unwrap_or(f64::NAN)).collect(),
        utilities,
        iterations,
        converged,
        saturated,
    }
}

/// Computes the gains for `channels`/`weights` and runs the best-response dynamics.
pub fn iterate_nash(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    params: &NetworkParams,
    model: &EfficiencyModel,
    options: NashOptions,
) -> Result<EquilibriumResult> {
    params.validate()?;
    if channels.len() != params.users {
        return Err(Error::Dimension(format!(
            "{} channels for {} users",
            channels.len(),
            params.users
        )));
    }
    let gains = compute_gains(channels, weights, params)?;
    Ok(solve_equilibrium(&gains, params, model, options))
}

fn utility_from(gamma: f64, power: f64, params: &NetworkParams, model: &EfficiencyModel) -> f64 {
    // u -> 0 as p -> 0 along best responses since f'(0) = 0
    if power <= 0.0 {
        return 0.0;
    }
    params.payload_fraction() * params.rate * model.efficiency(gamma) / power
}

/// Bits per joule achieved by user `k`. Zero power yields zero utility.
pub fn utility(
    k: usize,
    powers: &[f64],
    gains: &GainSet,
    params: &NetworkParams,
    model: &EfficiencyModel,
) -> f64 {
    utility_from(
        sinr(k, gains, powers, params.noise_variance),
        powers[k],
        params,
        model,
    )
}

/// `gamma~* (1/chi_k + 1/Gamma_k)`; the equilibrium exists iff this is `< 1` for every user.
pub fn interference_load(k: usize, gains: &GainSet, model: &EfficiencyModel) -> f64 {
    model.target_sinr_no_si() * (gains.inverse_si_ratio(k) + gains.inverse_mai_ratio(k))
}

/// Closed-form equilibrium power for `N >> K`, valid when user `k` is feasible.
pub fn reduced_power(
    k: usize,
    gains: &GainSet,
    params: &NetworkParams,
    model: &EfficiencyModel,
) -> Result<f64> {
    let load = interference_load(k, gains, model);
    if load >= 1.0 {
        return Err(Error::Infeasible(format!(
            "user {k}: interference load {load:.6} >= 1"
        )));
    }
    Ok(params.noise_variance * model.target_sinr_no_si() / (gains.h_sp[k] * (1.0 - load)))
}

/// Per-user strict feasibility test `gamma~* (1/chi_k + 1/Gamma_k) < 1`.
pub fn feasibility_check(gains: &GainSet, model: &EfficiencyModel) -> Vec<bool> {
    (0..gains.users())
        .map(|k| interference_load(k, gains, model) < 1.0)
        .collect()
}

/// Largest relative change when the best responses are re-applied to `powers`.
pub fn fixed_point_residual(
    powers: &[f64],
    gains: &GainSet,
    params: &NetworkParams,
    model: &EfficiencyModel,
) -> f64 {
    (0..gains.users())
        .into_par_iter()
        .map(|k| {
            let br =
                best_response_power(k, gains, powers, params.noise_variance, params.p_max, model)
                    .unwrap_or(params.p_max);
            (br - powers[k]).abs() / powers[k]
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::linear_to_db;
    use nalgebra::DMatrix;

    fn model() -> EfficiencyModel {
        EfficiencyModel::new(100).unwrap()
    }

    fn gains(h_sp: Vec<f64>, h_si: Vec<f64>, mai: &[f64]) -> GainSet {
        let k = h_sp.len();
        GainSet {
            h_sp,
            h_si,
            h_mai: DMatrix::from_row_slice(k, k, mai),
            processing_gain: 1,
        }
    }

    #[test]
    fn efficiency_shape() {
        let m = model();
        assert_eq!(m.efficiency(0.0), 0.0);
        assert_eq!(m.derivative(0.0), 0.0);
        assert!((m.efficiency(1e4) - 1.0).abs() < 1e-15);
        let g = 12.882;
        assert!(m.efficiency(g) > 0.0 && m.efficiency(g) < 1.0);
        let mut prev = 0.0;
        for i in 1..400 {
            let v = m.efficiency(i as f64 * 0.1);
            assert!(v >= prev);
            prev = v;
        }
        assert!(EfficiencyModel::new(1).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = model();
        for g in [2.0, 8.0, 12.9, 20.0] {
            let h = 1e-6;
            let fd = (m.efficiency(g + h) - m.efficiency(g - h)) / (2.0 * h);
            assert!((fd - m.derivative(g)).abs() < 1e-8, "{g}");
        }
    }

    #[test]
    fn target_without_si_is_eleven_point_one_db() {
        let g = model().target_sinr_no_si();
        assert!((linear_to_db(g) - 11.1).abs() < 0.05, "{}", linear_to_db(g));
        assert!(target_sinr_residual(g, f64::INFINITY, &model()).abs() < 1e-10);
    }

    #[test]
    fn finite_chi_root_inside_bracket() {
        let m = model();
        for chi in [20.0, 50.0, 1e3, 1e6] {
            let g = solve_target_sinr(chi, &m).unwrap();
            assert!(g > 0.0 && g < chi);
            assert!(target_sinr_residual(g, chi, &m).abs() < 1e-10);
            assert!(g < m.target_sinr_no_si());
        }
        assert!(solve_target_sinr(0.0, &m).is_err());
        assert!(solve_target_sinr(1e-13, &m).is_err());
    }

    #[test]
    fn single_user_power() {
        let m = model();
        let params = NetworkParams {
            users: 1,
            ..NetworkParams::default()
        };
        let g = gains(vec![0.05], vec![0.0], &[0.0]);
        let p =
            best_response_power(0, &g, &[1e-9], params.noise_variance, params.p_max, &m).unwrap();
        let expected = m.target_sinr_no_si() * params.noise_variance / 0.05;
        assert!((p - expected).abs() <= 1e-14 * expected);
        let eq = solve_equilibrium(&g, &params, &m, NashOptions::default());
        assert!(eq.converged);
        assert!(eq.iterations <= 2);
        assert!((eq.powers[0] - expected).abs() <= 1e-14 * expected);
    }

    #[test]
    fn clamps_to_p_max() {
        let m = model();
        let g = gains(vec![1e-3, 1e-3], vec![0.0, 0.0], &[0.0, 1.0, 1.0, 0.0]);
        let p = best_response_power(0, &g, &[0.0, 1.0], 5e-16, 1e-6, &m).unwrap();
        assert_eq!(p, 1e-6);
    }

    #[test]
    fn two_user_fixed_point() {
        let m = model();
        let params = NetworkParams {
            users: 2,
            ..NetworkParams::default()
        };
        let g = gains(vec![0.02, 0.05], vec![1e-4, 2e-4], &[0.0, 1e-4, 3e-5, 0.0]);
        let eq = solve_equilibrium(&g, &params, &m, NashOptions::default());
        assert!(eq.converged && !eq.any_saturated());
        assert!(fixed_point_residual(&eq.powers, &g, &params, &m) < 1e-8);
        for k in 0..2 {
            assert!((eq.sinrs[k] - eq.targets[k]).abs() < 1e-6 * eq.targets[k]);
        }
    }

    #[test]
    fn infeasible_pair_saturates() {
        let m = model();
        let params = NetworkParams {
            users: 2,
            ..NetworkParams::default()
        };
        // each user sees the other with a quarter of its own gain: load = 12.9 * 0.25 > 1
        let g = gains(vec![0.02, 0.02], vec![0.0, 0.0], &[0.0, 0.005, 0.005, 0.0]);
        assert_eq!(feasibility_check(&g, &m), vec![false, false]);
        let eq = solve_equilibrium(&g, &params, &m, NashOptions::default());
        assert!(eq.any_saturated());
        assert!(reduced_power(0, &g, &params, &m).is_err());
    }

    #[test]
    fn utility_conventions() {
        let m = model();
        let params = NetworkParams::default();
        let g = gains(vec![0.02], vec![0.0], &[0.0]);
        assert_eq!(utility(0, &[0.0], &g, &params, &m), 0.0);
        let gamma = 10.0;
        let u1 = utility_from(gamma, 1e-12, &params, &m);
        let u2 = utility_from(gamma, 2e-12, &params, &m);
        assert!((u1 / u2 - 2.0).abs() < 1e-14);
        assert_eq!(utility_from(0.0, 1e-12, &params, &m), 0.0);
    }

    #[test]
    fn reduced_power_edge_cases() {
        let m = model();
        let params = NetworkParams {
            users: 1,
            ..NetworkParams::default()
        };
        let g = gains(vec![0.04], vec![0.0], &[0.0]);
        let p = reduced_power(0, &g, &params, &m).unwrap();
        assert!((p - params.noise_variance * m.target_sinr_no_si() / 0.04).abs() < 1e-25);

        // power grows without bound as the load approaches one
        let gt = m.target_sinr_no_si();
        let mut prev = 0.0;
        for load in [0.5, 0.9, 0.99, 0.999] {
            let h_si = 0.04 * load / gt;
            let g = gains(vec![0.04], vec![h_si], &[0.0]);
            let p = reduced_power(0, &g, &params, &m).unwrap();
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn feasibility_boundary_is_strict() {
        let m = model();
        let g = gains(vec![1.0], vec![0.0], &[0.0]);
        assert_eq!(feasibility_check(&g, &m), vec![true]);
        let gt = m.target_sinr_no_si();
        let g = gains(vec![1.0], vec![1.0 / gt], &[0.0]);
        let load = interference_load(0, &g, &m);
        // exactly at the boundary up to rounding of 1/gt * gt
        if load == 1.0 {
            assert_eq!(feasibility_check(&g, &m), vec![false]);
        }
        let g = gains(vec![1.0], vec![1.0 / gt * (1.0 + 1e-12)], &[0.0]);
        assert_eq!(feasibility_check(&g, &m), vec![false]);
    }
}
