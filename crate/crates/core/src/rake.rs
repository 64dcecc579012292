//! Partial/all-Rake combining and the interference gains seen at its output.
//!
//! With maximal ratio combining the receiver for user `k` uses the first `P`
//! channel taps as weights. The SINR of user `k` is
//!
//! ```text
//! gamma_k = h_sp[k] p_k / (h_si[k] p_k + sum_{j != k} h_mai[k][j] p_j + sigma^2)
//! ```
//!
//! where the self-interference and multiple-access gains are quadratic forms
//! in the strictly upper-triangular Toeplitz matrices built from the taps and
//! the weights. Column `c` of those matrices holds the lag `s = L - c`
//! correlation, which lets the gains be evaluated either with the explicit
//! matrices ([`GainEngine::Dense`]), directly in the lag domain
//! ([`GainEngine::LagDomain`]) or through FFT cross-correlation
//! ([`GainEngine::Spectral`]). All three agree to rounding error.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::channel::{check_same_length, ChannelRealization};
use crate::error::{invalid, Error, Result};
use crate::params::{fingers_for, NetworkParams};

/// Relative imaginary residue above which `w^H alpha` is rejected.
const SIGNAL_GAIN_IMAG_TOL: f64 = 1e-9;

/// MRC combining weights for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct RakeWeights {
    pub weights: Vec<Complex64>,
    pub fingers: usize,
}

impl RakeWeights {
    /// All-Rake weights: every tap is combined.
    pub fn all_rake(channel: &ChannelRealization) -> Self {
        Self {
            weights: channel.taps.clone(),
            fingers: channel.paths(),
        }
    }
}

/// Keeps the first `round(beta * L)` taps (at least one) and zeroes the rest.
pub fn prake_weights(channel: &ChannelRealization, rake_ratio: f64) -> RakeWeights {
    let paths = channel.paths();
    let fingers = fingers_for(rake_ratio, paths).clamp(1, paths);
    let weights = channel
        .taps
        .iter()
        .enumerate()
        .map(|(l, &t)| {
            if l < fingers {
                t
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    RakeWeights { weights, fingers }
}

/// Weights for every user of a network.
pub fn network_weights(channels: &[ChannelRealization], rake_ratio: f64) -> Vec<RakeWeights> {
    channels
        .iter()
        .map(|c| prake_weights(c, rake_ratio))
        .collect()
}

/// The `L x (L-1)` matrix whose first row is `(v_L, ..., v_2)` and whose last
/// row is zero; entry `(i, j)` (1-based) is `v_{L-j+i}` for `i <= j`.
pub fn convolution_matrix_from_taps(v: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let l = v.len();
    if l < 2 {
        return Err(invalid(
            "taps",
            "convolution matrix needs at least 2 entries",
        ));
    }
    Ok(DMatrix::from_fn(l, l - 1, |i, j| {
        // 0-based: row i, column j holds v[L-1-j+i] on and above the diagonal
        if i <= j {
            v[l - 1 - j + i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Diagonal entries `phi_l = sqrt(min(L - l, Nc) / Nc)` for `l = 1..L-1`.
pub fn phi_coefficients(paths: usize, chips: usize) -> Vec<f64> {
    (1..paths)
        .map(|l| ((paths - l).min(chips) as f64 / chips as f64).sqrt())
        .collect()
}

pub fn phi_matrix(paths: usize, chips: usize) -> Result<DMatrix<f64>> {
    if paths < 2 {
        return Err(invalid("paths", "must be at least 2"));
    }
    if chips == 0 {
        return Err(invalid("chips", "must be at least 1"));
    }
    Ok(DMatrix::from_diagonal(&DVector::from_vec(
        phi_coefficients(paths, chips),
    )))
}

/// Signal, self-interference and multiple-access gains for all users.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSet {
    pub h_sp: Vec<f64>,
    pub h_si: Vec<f64>,
    /// Row `k`, column `j`: interference from user `j` into user `k`. Zero diagonal.
    pub h_mai: DMatrix<f64>,
    /// Processing gain the interference terms are normalised by.
    pub processing_gain: usize,
}

impl GainSet {
    pub fn users(&self) -> usize {
        self.h_sp.len()
    }

    /// `chi_k = h_sp / h_si`; infinite when there is no self-interference.
    pub fn si_ratio(&self, k: usize) -> f64 {
        if self.h_si[k] == 0.0 {
            f64::INFINITY
        } else {
            self.h_sp[k] / self.h_si[k]
        }
    }

    /// `1 / chi_k`.
    pub fn inverse_si_ratio(&self, k: usize) -> f64 {
        self.h_si[k] / self.h_sp[k]
    }

    /// `1 / Gamma_k = sum_{j != k} h_mai[k][j] / h_sp[j]`.
    pub fn inverse_mai_ratio(&self, k: usize) -> f64 {
        (0..self.users())
            .filter(|&j| j != k)
            .map(|j| self.h_mai[(k, j)] / self.h_sp[j])
            .sum()
    }

    /// The same gains for a different processing gain (only `Nf` may differ).
    pub fn rescaled(&self, processing_gain: usize) -> GainSet {
        let f = self.processing_gain as f64 / processing_gain as f64;
        GainSet {
            h_sp: self.h_sp.clone(),
            h_si: self.h_si.iter().map(|h| h * f).collect(),
            h_mai: &self.h_mai * f,
            processing_gain,
        }
    }
}

/// How the correlation sums behind [`GainSet`] are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainEngine {
    /// Picks [`GainEngine::LagDomain`] for short or sparse weight vectors and
    /// [`GainEngine::Spectral`] otherwise.
    Auto,
    /// Explicit convolution and `Phi` matrices, dense products.
    Dense,
    /// Direct correlation over the nonzero weights, `O(P L)` per pair.
    LagDomain,
    /// FFT cross-correlation, `O(L log L)` per user.
    Spectral,
}

pub fn compute_gains(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    params: &NetworkParams,
) -> Result<GainSet> {
    compute_gains_with(
        channels,
        weights,
        params.chips,
        params.processing_gain(),
        GainEngine::Auto,
    )
}

pub fn compute_gains_with(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    chips: usize,
    processing_gain: usize,
    engine: GainEngine,
) -> Result<GainSet> {
    let paths = check_same_length(channels)?;
    if weights.len() != channels.len() {
        return Err(Error::Dimension(format!(
            "{} weight vectors for {} channels",
            weights.len(),
            channels.len()
        )));
    }
    if weights.iter().any(|w| w.weights.len() != paths) {
        return Err(Error::Dimension(
            "weight vector length differs from path count".into(),
        ));
    }
    if chips == 0 || processing_gain == 0 {
        return Err(invalid(
            "chips",
            "chips and processing gain must be positive",
        ));
    }

    let h_sp = signal_gains(channels, weights)?;
    let n = processing_gain as f64;
    let phi2: Vec<f64> = phi_coefficients(paths, chips)
        .iter()
        .map(|p| p * p)
        .collect();
    let engine = match engine {
        GainEngine::Auto => {
            let fingers = weights.iter().map(support_len).max().unwrap_or(paths);
            if fingers * paths <= 16 * fft_len(paths) {
                GainEngine::LagDomain
            } else {
                GainEngine::Spectral
            }
        }
        e => e,
    };

    let (si_raw, mai_raw) = match engine {
        GainEngine::Dense => dense_raw(channels, weights, paths, chips)?,
        GainEngine::LagDomain => lag_raw(channels, weights, &phi2),
        GainEngine::Spectral => spectral_raw(channels, weights, &phi2),
        GainEngine::Auto => unreachable!(),
    };

    let users = channels.len();
    let h_si = (0..users).map(|k| si_raw[k] / (n * h_sp[k])).collect();
    let h_mai = DMatrix::from_fn(users, users, |k, j| {
        if k == j {
            0.0
        } else {
            mai_raw[(k, j)] / (n * h_sp[k])
        }
    });
    Ok(GainSet {
        h_sp,
        h_si,
        h_mai,
        processing_gain,
    })
}

fn signal_gains(channels: &[ChannelRealization], weights: &[RakeWeights]) -> Result<Vec<f64>> {
    channels
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(k, (c, w))| {
            let g: Complex64 = w
                .weights
                .iter()
                .zip(&c.taps)
                .map(|(w, a)| w.conj() * a)
                .sum();
            if !(g.re > 0.0) {
                return Err(Error::DegenerateChannel { user: k });
            }
            let residue = g.im.abs() / g.re;
            if residue > SIGNAL_GAIN_IMAG_TOL {
                return Err(Error::NonRealSignalGain { user: k, residue });
            }
            Ok(g.re)
        })
        .collect()
}

/// Index one past the last nonzero weight.
fn support_len(w: &RakeWeights) -> usize {
    w.weights
        .iter()
        .rposition(|x| x.re != 0.0 || x.im != 0.0)
        .map_or(0, |i| i + 1)
}

fn fft_len(paths: usize) -> usize {
    (2 * paths - 1).next_power_of_two()
}

/// Raw (unnormalised) SI numerators and MAI numerators from the explicit matrices.
fn dense_raw(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    paths: usize,
    chips: usize,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let phi = phi_matrix(paths, chips)?.map(|x| Complex64::new(x, 0.0));
    let alphas: Vec<DVector<Complex64>> = channels
        .iter()
        .map(|c| DVector::from_column_slice(&c.taps))
        .collect();
    let ws: Vec<DVector<Complex64>> = weights
        .iter()
        .map(|w| DVector::from_column_slice(&w.weights))
        .collect();
    let a_mats = channels
        .iter()
        .map(|c| convolution_matrix_from_taps(&c.taps))
        .collect::<Result<Vec<_>>>()?;
    let b_mats = weights
        .iter()
        .map(|w| convolution_matrix_from_taps(&w.weights))
        .collect::<Result<Vec<_>>>()?;

    let users = channels.len();
    let si = (0..users)
        .into_par_iter()
        .map(|k| {
            let v = b_mats[k].adjoint() * &alphas[k] + a_mats[k].adjoint() * &ws[k];
            (&phi * v).norm_squared()
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..users)
        .into_par_iter()
        .map(|k| {
            (0..users)
                .map(|j| {
                    if j == k {
                        return 0.0;
                    }
                    let t1 = (b_mats[k].adjoint() * &alphas[j]).norm_squared();
                    let t2 = (a_mats[j].adjoint() * &ws[k]).norm_squared();
                    let t3 = ws[k].dotc(&alphas[j]).norm_sqr();
                    t1 + t2 + t3
                })
                .collect()
        })
        .collect();
    Ok((si, DMatrix::from_fn(users, users, |k, j| rows[k][j])))
}

/// Full cross-correlation `R(s) = sum_i conj(w_i) a_{i+s}`, `s = -(L-1)..=L-1`,
/// stored at index `s + L - 1`.
fn cross_correlation(w: &[Complex64], a: &[Complex64], support: usize) -> Vec<Complex64> {
    let l = a.len();
    let mut r = vec![Complex64::new(0.0, 0.0); 2 * l - 1];
    for (i, wi) in w.iter().take(support).enumerate() {
        if wi.re == 0.0 && wi.im == 0.0 {
            continue;
        }
        let wc = wi.conj();
        // lag s = m - i for every tap m
        let base = l - 1 - i;
        for (m, am) in a.iter().enumerate() {
            r[base + m] += wc * am;
        }
    }
    r
}

/// SI numerator from the own-user correlation: lag `s` component is
/// `R(-s) + conj(R(s))`, weighted by `phi_s^2 = min(s, Nc) / Nc`.
fn si_from_correlation(r: &[Complex64], phi2: &[f64]) -> f64 {
    let l = phi2.len() + 1;
    (1..l)
        .map(|s| {
            let v = r[l - 1 - s] + r[l - 1 + s].conj();
            // column c = L - s, phi index c - 1
            phi2[l - s - 1] * v.norm_sqr()
        })
        .sum()
}

fn lag_raw(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    phi2: &[f64],
) -> (Vec<f64>, DMatrix<f64>) {
    let users = channels.len();
    let rows: Vec<(f64, Vec<f64>)> = (0..users)
        .into_par_iter()
        .map(|k| {
            let w = &weights[k].weights;
            let support = support_len(&weights[k]);
            let si = si_from_correlation(&cross_correlation(w, &channels[k].taps, support), phi2);
            let mai = (0..users)
                .map(|j| {
                    if j == k {
                        0.0
                    } else {
                        cross_correlation(w, &channels[j].taps, support)
                            .iter()
                            .map(|x| x.norm_sqr())
                            .sum()
                    }
                })
                .collect();
            (si, mai)
        })
        .collect();
    let si = rows.iter().map(|r| r.0).collect();
    let mai = DMatrix::from_fn(users, users, |k, j| rows[k].1[j]);
    (si, mai)
}

fn spectral_raw(
    channels: &[ChannelRealization],
    weights: &[RakeWeights],
    phi2: &[f64],
) -> (Vec<f64>, DMatrix<f64>) {
    let users = channels.len();
    let paths = channels[0].paths();
    let n = fft_len(paths);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let spectrum = |v: &[Complex64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[..v.len()].copy_from_slice(v);
        fwd.process(&mut buf);
        buf
    };
    let tap_spec: Vec<Vec<Complex64>> = channels.iter().map(|c| spectrum(&c.taps)).collect();
    let w_spec: Vec<Vec<Complex64>> = weights.iter().map(|w| spectrum(&w.weights)).collect();
    let scale = 1.0 / n as f64;

    let si = (0..users)
        .map(|k| {
            let mut buf: Vec<Complex64> = w_spec[k]
                .iter()
                .zip(&tap_spec[k])
                .map(|(w, a)| w.conj() * a)
                .collect();
            inv.process(&mut buf);
            // circular index of lag s is s mod n
            let r: Vec<Complex64> = (-(paths as isize - 1)..paths as isize)
                .map(|s| buf[s.rem_euclid(n as isize) as usize] * scale)
                .collect();
            si_from_correlation(&r, phi2)
        })
        .collect();

    // Parseval: sum_s |R(s)|^2 = (1/n) sum_f |W_f|^2 |A_f|^2
    let w_pow: Vec<Vec<f64>> = w_spec
        .iter()
        .map(|s| s.iter().map(|x| x.norm_sqr()).collect())
        .collect();
    let a_pow: Vec<Vec<f64>> = tap_spec
        .iter()
        .map(|s| s.iter().map(|x| x.norm_sqr()).collect())
        .collect();
    let mai = DMatrix::from_fn(users, users, |k, j| {
        if k == j {
            0.0
        } else {
            w_pow[k]
                .iter()
                .zip(&a_pow[j])
                .map(|(w, a)| w * a)
                .sum::<f64>()
                * scale
        }
    });
    (si, mai)
}

/// SINR of user `k` for the given transmit powers.
pub fn sinr(k: usize, gains: &GainSet, powers: &[f64], noise_variance: f64) -> f64 {
    let mai: f64 = powers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(j, p)| gains.h_mai[(k, j)] * p)
        .sum();
    gains.h_sp[k] * powers[k] / (gains.h_si[k] * powers[k] + mai + noise_variance)
}
