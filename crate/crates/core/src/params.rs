use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Scalar constants describing one uplink scenario.
///
/// All quantities are linear and in SI units. The derived quantities
/// (processing gain, load, finger count) are computed on demand so they can
/// never drift from the fields they depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Number of users `K`.
    pub users: usize,
    /// Pulses per symbol `Nf`.
    pub frames: usize,
    /// Pulse positions per frame `Nc`.
    pub chips: usize,
    /// Resolvable channel paths `L`.
    pub paths: usize,
    /// Fraction of paths combined by the receiver, `P = round(beta * L)`.
    pub rake_ratio: f64,
    /// First-to-last tap variance ratio of the averaged power delay profile (linear, >= 1).
    pub pdp_ratio: f64,
    /// Receiver noise variance in watts.
    pub noise_variance: f64,
    /// Per-user transmit power cap in watts.
    pub p_max: f64,
    /// Transmission rate in bits per second.
    pub rate: f64,
    /// Information bits per packet.
    pub info_bits: u32,
    /// Total bits per packet.
    pub total_bits: u32,
}

impl Default for NetworkParams {
    /// The reference scenario: 8 users, 200 paths, 50 chips, 20 frames,
    /// 20-finger PRake and a 10 dB power delay profile.
    fn default() -> Self {
        Self {
            users: 8,
            frames: 20,
            chips: 50,
            paths: 200,
            rake_ratio: 0.1,
            pdp_ratio: 10.0,
            noise_variance: 5e-16,
            p_max: 1e-6,
            rate: 100e3,
            info_bits: 100,
            total_bits: 100,
        }
    }
}

impl NetworkParams {
    /// Processing gain `N = Nf * Nc`.
    pub fn processing_gain(&self) -> usize {
        self.frames * self.chips
    }

    /// Load factor `Nc / L`.
    pub fn load(&self) -> f64 {
        self.chips as f64 / self.paths as f64
    }

    /// Number of Rake fingers, `round(beta * L)` with ties rounded up.
    pub fn fingers(&self) -> usize {
        fingers_for(self.rake_ratio, self.paths)
    }

    /// Ratio of information bits to total bits, `D / M`.
    pub fn payload_fraction(&self) -> f64 {
        self.info_bits as f64 / self.total_bits as f64
    }

    pub fn with_rake_ratio(mut self, rake_ratio: f64) -> Self {
        self.rake_ratio = rake_ratio;
        self
    }

    pub fn with_frames(mut self, frames: usize) -> Self {
        self.frames = frames;
        self
    }

    pub fn with_pdp_ratio(mut self, pdp_ratio: f64) -> Self {
        self.pdp_ratio = pdp_ratio;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(invalid("users", "must be at least 1"));
        }
        if self.frames == 0 {
            return Err(invalid("frames", "must be at least 1"));
        }
        if self.chips == 0 {
            return Err(invalid("chips", "must be at least 1"));
        }
        if self.paths < 2 {
            return Err(invalid("paths", "must be at least 2"));
        }
        if !(self.rake_ratio > 0.0 && self.rake_ratio <= 1.0) {
            return Err(invalid(
                "rake_ratio",
                format!("{} is outside (0, 1]", self.rake_ratio),
            ));
        }
        let p = self.fingers();
        if p == 0 || p > self.paths {
            return Err(invalid(
                "rake_ratio",
                format!(
                    "round({} * {}) = {p} fingers is outside [1, L]",
                    self.rake_ratio, self.paths
                ),
            ));
        }
        if !(self.pdp_ratio.is_finite() && self.pdp_ratio >= 1.0) {
            return Err(invalid(
                "pdp_ratio",
                format!("{} must be finite and >= 1 (0 dB)", self.pdp_ratio),
            ));
        }
        positive("noise_variance", self.noise_variance)?;
        positive("p_max", self.p_max)?;
        positive("rate", self.rate)?;
        if self.info_bits == 0 {
            return Err(invalid("info_bits", "must be at least 1"));
        }
        if self.total_bits < 2 {
            return Err(invalid("total_bits", "must be at least 2"));
        }
        if self.total_bits < self.info_bits {
            return Err(invalid("total_bits", "must not be smaller than info_bits"));
        }
        Ok(())
    }
}

/// `round(beta * L)` with round-half-up.
pub fn fingers_for(rake_ratio: f64, paths: usize) -> usize {
    let raw = (rake_ratio * paths as f64 + 0.5).floor();
    if raw <= 0.0 {
        0
    } else {
        raw as usize
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{value} must be finite and > 0")))
    }
}
