//! Frequency-selective channel realizations.
//!
//! Each user sees a tapped delay line with `L` independent circularly
//! symmetric complex Gaussian taps. Tap `l` (1-based) has variance
//! `scale * pdp_ratio^(-(l - 1) / (L - 1))`, so the averaged power delay
//! profile decays exponentially from the first to the last path by exactly
//! `pdp_ratio`. The scale follows the path-loss law `0.3 * d^-2` for a user
//! at distance `d` metres.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{invalid, Error, Result};
use crate::params::NetworkParams;

/// Closest user distance in metres.
pub const MIN_DISTANCE: f64 = 3.0;
/// Farthest user distance in metres.
pub const MAX_DISTANCE: f64 = 20.0;

/// The pseudo-random generator used for every experiment.
pub type SimRng = ChaCha8Rng;

/// Generator for stream `stream` under master `seed`.
///
/// Trials use their index as the stream, so any trial can be replayed on its
/// own and parallel scheduling cannot change which numbers it sees.
pub fn rng_for(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Complex64>,
    /// Distance to the access point in metres.
    pub distance: f64,
    /// Variance of the first tap.
    pub variance_scale: f64,
}

impl ChannelRealization {
    pub fn from_taps(taps: Vec<Complex64>, distance: f64, variance_scale: f64) -> Result<Self> {
        if taps.len() < 2 {
            return Err(invalid("taps", "need at least 2 taps"));
        }
        if taps.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(invalid("taps", "all taps must be finite"));
        }
        if !(variance_scale > 0.0) {
            return Err(invalid("variance_scale", "must be > 0"));
        }
        Ok(Self {
            taps,
            distance,
            variance_scale,
        })
    }

    pub fn paths(&self) -> usize {
        self.taps.len()
    }

    /// Total channel energy `||alpha||^2`.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }
}

/// Path-loss scale `0.3 * d^-2`.
pub fn variance_scale_for_distance(distance: f64) -> f64 {
    0.3 / (distance * distance)
}

/// Variance of tap `path` (1-based) under the exponential power delay profile.
pub fn apdp_variance(path: usize, paths: usize, pdp_ratio: f64, scale: f64) -> Result<f64> {
    if paths < 2 {
        return Err(invalid("paths", "must be at least 2"));
    }
    if path == 0 || path > paths {
        return Err(invalid("path", format!("{path} is outside 1..={paths}")));
    }
    if !(pdp_ratio >= 1.0) || !pdp_ratio.is_finite() {
        return Err(invalid("pdp_ratio", "must be finite and >= 1"));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(invalid("scale", "must be finite and > 0"));
    }
    Ok(apdp_variance_unchecked(path, paths, pdp_ratio, scale))
}

fn apdp_variance_unchecked(path: usize, paths: usize, pdp_ratio: f64, scale: f64) -> f64 {
    if path == 1 {
        return scale;
    }
    if path == paths {
        return scale / pdp_ratio;
    }
    let exponent = (path - 1) as f64 / (paths - 1) as f64;
    scale * pdp_ratio.powf(-exponent)
}

/// Draws one user distance uniformly on `[3, 20]` metres.
pub fn sample_distance<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Uniform::new_inclusive(MIN_DISTANCE, MAX_DISTANCE).sample(rng)
}

/// Draws a channel for a user at `distance` metres.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    params: &NetworkParams,
    distance: f64,
) -> Result<ChannelRealization> {
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(invalid(
            "distance",
            format!("{distance} must be finite and > 0"),
        ));
    }
    sample_channel_with_scale(rng, params, distance, variance_scale_for_distance(distance))
}

/// Draws a channel with an explicit first-tap variance.
pub fn sample_channel_with_scale<R: Rng + ?Sized>(
    rng: &mut R,
    params: &NetworkParams,
    distance: f64,
    scale: f64,
) -> Result<ChannelRealization> {
    let paths = params.paths;
    // validates paths, pdp ratio and scale once
    apdp_variance(1, paths, params.pdp_ratio, scale)?;
    let taps = (1..=paths)
        .map(|l| {
            let sd = (apdp_variance_unchecked(l, paths, params.pdp_ratio, scale) / 2.0).sqrt();
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(sd * re, sd * im)
        })
        .collect();
    Ok(ChannelRealization {
        taps,
        distance,
        variance_scale: scale,
    })
}

/// Draws distances and channels for all `K` users.
pub fn sample_network<R: Rng + ?Sized>(
    rng: &mut R,
    params: &NetworkParams,
) -> Result<Vec<ChannelRealization>> {
    (0..params.users)
        .map(|_| {
            let d = sample_distance(rng);
            sample_channel(rng, params, d)
        })
        .collect()
}

pub(crate) fn check_same_length(channels: &[ChannelRealization]) -> Result<usize> {
    let l = channels
        .first()
        .map(|c| c.paths())
        .ok_or_else(|| Error::Dimension("no channels".into()))?;
    if channels.iter().any(|c| c.paths() != l) {
        return Err(Error::Dimension(
            "channels have different path counts".into(),
        ));
    }
    Ok(l)
}
