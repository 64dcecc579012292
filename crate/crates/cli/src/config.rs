//! Flat run configuration in user units (dB, watts, metres, bits).

use anyhow::{anyhow, bail, Context, Result};
use prake_core::experiments::{ExperimentSpec, LsaCheckPoint, OutputFormat, Sweep};
use prake_core::game::NashOptions;
use prake_core::units::db_to_linear;
use prake_core::NetworkParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub users: usize,
    pub frames: usize,
    pub chips: usize,
    pub paths: usize,
    pub rake_ratio: f64,
    pub pdp_ratio_db: f64,
    pub noise_variance_w: f64,
    pub p_max_w: f64,
    pub rate_bps: f64,
    pub info_bits: u32,
    pub total_bits: u32,

    pub seed: u64,
    pub trials: usize,
    pub nash_tol: f64,
    pub nash_max_iter: usize,
    pub format: OutputFormat,

    /// Frame counts for `po-sweep`.
    pub frames_sweep: Vec<usize>,
    /// Profile ratios for `po-sweep`.
    pub pdp_ratios_db: Vec<f64>,
    /// Rake ratios for `utility-scatter`.
    pub betas: Vec<f64>,

    pub curve_lambdas_db: Vec<f64>,
    pub curve_betas: Vec<f64>,
    pub curve_loads: Vec<f64>,

    pub target_loss_db: f64,

    /// `Nc / L` used by `validate-lsa`; the chip count follows from `paths`.
    pub lsa_load: f64,
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = NetworkParams::default();
        Self {
            users: p.users,
            frames: p.frames,
            chips: p.chips,
            paths: p.paths,
            rake_ratio: p.rake_ratio,
            pdp_ratio_db: 10.0,
            noise_variance_w: p.noise_variance,
            p_max_w: p.p_max,
            rate_bps: p.rate,
            info_bits: p.info_bits,
            total_bits: p.total_bits,
            seed: 1,
            trials: 1000,
            nash_tol: NashOptions::default().tol,
            nash_max_iter: NashOptions::default().max_iter,
            format: OutputFormat::Csv,
            frames_sweep: (1..=40).collect(),
            pdp_ratios_db: vec![0.0, 10.0, 20.0],
            betas: vec![1.0, 0.5, 0.3, 0.1],
            curve_lambdas_db: vec![0.0, 10.0, 20.0, 30.0],
            curve_betas: (1..=100).map(|i| i as f64 / 100.0).collect(),
            curve_loads: vec![0.25, 1.25],
            target_loss_db: 2.94,
            lsa_load: 0.25,
            tolerance: 0.05,
        }
    }
}

impl RunConfig {
    /// Defaults, overlaid by the TOML file at `path` (if any), then by `key=value` assignments.
    pub fn load(path: Option<&std::path::Path>, assignments: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))?;
                text.parse::<toml::Table>()
                    .with_context(|| format!("parsing {}", p.display()))?
            }
            None => toml::Table::new(),
        };
        for a in assignments {
            let (key, value) = a
                .split_once('=')
                .ok_or_else(|| anyhow!("--set expects key=value, got `{a}`"))?;
            let key = key.trim();
            let parsed = format!("v = {}", value.trim())
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.trim().to_string()));
            table.insert(key.to_string(), parsed);
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| anyhow!("invalid configuration: {}", e.message()))
    }

    pub fn params(&self) -> Result<NetworkParams> {
        if !(self.pdp_ratio_db.is_finite() && self.pdp_ratio_db >= 0.0) {
            bail!("invalid parameter `pdp_ratio_db`: must be finite and >= 0 dB");
        }
        let p = NetworkParams {
            users: self.users,
            frames: self.frames,
            chips: self.chips,
            paths: self.paths,
            rake_ratio: self.rake_ratio,
            pdp_ratio: db_to_linear(self.pdp_ratio_db),
            noise_variance: self.noise_variance_w,
            p_max: self.p_max_w,
            rate: self.rate_bps,
            info_bits: self.info_bits,
            total_bits: self.total_bits,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn nash(&self) -> Result<NashOptions> {
        if !(self.nash_tol > 0.0) || self.nash_max_iter == 0 {
            bail!("invalid parameter `nash_tol`/`nash_max_iter`: both must be positive");
        }
        Ok(NashOptions {
            tol: self.nash_tol,
            max_iter: self.nash_max_iter,
        })
    }

    pub fn spec(&self, sweep: Sweep) -> Result<ExperimentSpec> {
        let spec = ExperimentSpec {
            params: self.params()?,
            trials: self.trials,
            seed: self.seed,
            sweep,
            nash: self.nash()?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lsa_point(&self) -> Result<LsaCheckPoint> {
        if !(self.lsa_load > 0.0 && self.lsa_load.is_finite()) {
            bail!("invalid parameter `lsa_load`: must be finite and > 0");
        }
        if !(self.tolerance >= 0.0) {
            bail!("invalid parameter `tolerance`: must be >= 0");
        }
        Ok(LsaCheckPoint {
            lambda_db: self.pdp_ratio_db,
            beta: self.rake_ratio,
            alpha: self.lsa_load,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
