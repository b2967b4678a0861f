//! Settings shared by all subcommands.
//!
//! Every key may come from a flat TOML file (`--config`) or from the command
//! line; command-line values win. TOML keys use the long flag names, e.g.
//! `theta-max = 0.01`.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qnd_core::homodyne::SnrConvention;
use qnd_core::MaterialSystem;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Anchored,
    Exact,
}

impl From<Convention> for SnrConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Anchored => SnrConvention::Anchored,
            Convention::Exact => SnrConvention::Exact,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Largest single-photon phase shift (rad).
    #[arg(long, global = true)]
    pub theta_max: Option<f64>,
    /// Target error probability (ignored when --snr is given).
    #[arg(long, global = true)]
    pub p_error: Option<f64>,
    /// Target signal-to-noise ratio.
    #[arg(long, global = true)]
    pub snr: Option<f64>,
    /// How --p-error maps to an SNR.
    #[arg(long, global = true, value_enum)]
    pub snr_convention: Option<Convention>,
    /// Pump/probe photon ratio <n_b>/<n_c>.
    #[arg(long, global = true)]
    pub ratio: Option<f64>,
    /// Material preset.
    #[arg(long, global = true)]
    pub material: Option<String>,
    /// Also report absolute (SI) rates using the material preset.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub si: Option<bool>,

    /// Number of simulated homodyne shots.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    /// Base RNG seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Parallel Monte-Carlo streams; results depend on (seed, workers).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Photon number actually present in the signal mode.
    #[arg(long, global = true)]
    pub true_n: Option<u32>,
    /// Largest photon number the readout distinguishes.
    #[arg(long, global = true)]
    pub n_max: Option<u32>,
    /// Apply the design's residual absorption to the Monte-Carlo readout.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub with_absorption: Option<bool>,

    /// Smallest theta_max of the sweep grid.
    #[arg(long, global = true)]
    pub theta_from: Option<f64>,
    /// Largest theta_max of the sweep grid.
    #[arg(long, global = true)]
    pub theta_to: Option<f64>,
    /// Number of log-spaced sweep points.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Comma-separated error probabilities, one sweep curve each.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p_errors: Option<Vec<f64>>,

    /// Comma-separated probe amplitudes for the oracle grid.
    #[arg(long, global = true, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Comma-separated phase shifts (rad) for the oracle grid.
    #[arg(long, global = true, value_delimiter = ',')]
    pub thetas: Option<Vec<f64>>,
    /// Comma-separated signal photon numbers for the oracle grid.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_values: Option<Vec<u32>>,
    /// Force a Fock truncation dimension (bypasses the truncation rule).
    #[arg(long, global = true)]
    pub dim_override: Option<usize>,

    /// Override the transition wavelength (nm; also rescales the mode area).
    #[arg(long, global = true)]
    pub wavelength_nm: Option<f64>,
    /// Override the oscillator strength.
    #[arg(long, global = true)]
    pub oscillator_strength: Option<f64>,
    /// Override the refractive index (also rescales the mode area).
    #[arg(long, global = true)]
    pub refractive_index: Option<f64>,
    /// Override the bandwidth Delta omega / 2pi (MHz).
    #[arg(long, global = true)]
    pub bandwidth_mhz: Option<f64>,
    /// Override the excited-state lifetime 1/gamma2 (ns).
    #[arg(long, global = true)]
    pub gamma2_lifetime_ns: Option<f64>,
    /// Override the decay ratio gamma4/gamma2.
    #[arg(long, global = true)]
    pub gamma4_over_gamma2: Option<f64>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (default: csv for tables, structured JSON otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr; $($field:ident),* $(,)?) => {
        Settings { $($field: $flags.$field.or($file.$field),)* }
    };
}

impl Settings {
    /// `self` (flags) over `file`.
    pub fn over(self, file: Settings) -> Settings {
        overlay!(self, file;
            theta_max, p_error, snr, snr_convention, ratio, material, si,
            shots, seed, workers, true_n, n_max, with_absorption,
            theta_from, theta_to, points, p_errors,
            alphas, thetas, n_values, dim_override,
            wavelength_nm, oscillator_strength, refractive_index, bandwidth_mhz,
            gamma2_lifetime_ns, gamma4_over_gamma2,
            out, format,
        )
    }

    pub fn from_toml(text: &str) -> Result<Settings, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn convention(&self) -> SnrConvention {
        self.snr_convention.map(Into::into).unwrap_or_default()
    }

    pub fn material(&self) -> Result<MaterialSystem, CliError> {
        let name = self.material.as_deref().unwrap_or(DEFAULT_MATERIAL);
        let mut m = preset(name).ok_or_else(|| {
            CliError::Config(format!("unknown material preset '{name}'; available presets: {}", PRESETS.join(", ")))
        })?;
        if let Some(nm) = self.wavelength_nm {
            m.wavelength = nm * 1e-9;
        }
        if let Some(f) = self.oscillator_strength {
            m.oscillator_strength = f;
        }
        if let Some(eta) = self.refractive_index {
            m.refractive_index = eta;
        }
        if let Some(mhz) = self.bandwidth_mhz {
            m.bandwidth = 2.0 * std::f64::consts::PI * mhz * 1e6;
        }
        if let Some(ns) = self.gamma2_lifetime_ns {
            let ratio = m.gamma4 / m.gamma2;
            m.gamma2 = 1.0 / (ns * 1e-9);
            m.gamma4 = ratio * m.gamma2;
        }
        if let Some(r) = self.gamma4_over_gamma2 {
            m.gamma4 = r * m.gamma2;
        }
        if self.wavelength_nm.is_some() || self.refractive_index.is_some() {
            m.mode_area = qnd_core::eit::mode_area(m.wavelength, m.refractive_index);
        }
        m.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(m)
    }
}

pub const DEFAULT_MATERIAL: &str = "nv-diamond";
pub const PRESETS: &[&str] = &["nv-diamond"];

pub fn preset(name: &str) -> Option<MaterialSystem> {
    match name {
        "nv-diamond" => Some(MaterialSystem::nv_diamond()),
        _ => None,
    }
}
