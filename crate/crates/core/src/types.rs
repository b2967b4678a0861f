//! Value types shared by every model module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::nv_diamond;
use crate::error::{QndError, Result};

/// Direction of the probe rotation per signal photon.
///
/// The bare Kerr unitary `exp(+i chi t a^dag a c^dag c)` rotates the probe
/// forward; the EIT-mediated evolution rotates it backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSign {
    #[default]
    Positive,
    Negative,
}

impl PhaseSign {
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Positive => 1.0,
            PhaseSign::Negative => -1.0,
        }
    }
}

/// Effective cross-Kerr coupling: phase `theta` and absorption exponent
/// `kappa`, both per signal photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrInteraction {
    theta: f64,
    kappa: f64,
    phase_sign: PhaseSign,
}

impl KerrInteraction {
    pub fn new(theta: f64, kappa: f64, phase_sign: PhaseSign) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(QndError::invalid(format!("theta must be finite and >= 0, got {theta}")));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(QndError::invalid(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(Self { theta, kappa, phase_sign })
    }

    /// Lossless interaction with the default (forward) rotation.
    pub fn lossless(theta: f64) -> Result<Self> {
        Self::new(theta, 0.0, PhaseSign::Positive)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phase_sign(&self) -> PhaseSign {
        self.phase_sign
    }
}

/// Coherent probe `|alpha>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeState {
    pub alpha: Complex64,
}

impl ProbeState {
    pub fn new(alpha: Complex64) -> Self {
        Self { alpha }
    }

    pub fn real(alpha: f64) -> Self {
        Self { alpha: Complex64::new(alpha, 0.0) }
    }

    /// `|alpha|^2`.
    pub fn mean_photons(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Signal-mode Fock state, optionally resolved into two polarization paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSignal {
    n_a: u32,
    split: Option<(u32, u32)>,
}

impl FockSignal {
    pub fn new(n_a: u32) -> Self {
        Self { n_a, split: None }
    }

    pub fn polarized(n_h: u32, n_v: u32) -> Self {
        Self { n_a: n_h + n_v, split: Some((n_h, n_v)) }
    }

    pub fn photons(&self) -> u32 {
        self.n_a
    }

    pub fn split(&self) -> Option<(u32, u32)> {
        self.split
    }
}

/// Atomic transition and waveguide parameters, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSystem {
    /// Transition wavelength (m).
    pub wavelength: f64,
    pub oscillator_strength: f64,
    pub refractive_index: f64,
    /// Decay rate of level |2> (1/s).
    pub gamma2: f64,
    /// Decay rate of level |4> (1/s).
    pub gamma4: f64,
    /// Pulse bandwidth (rad/s).
    pub bandwidth: f64,
    /// Effective mode cross-section (m^2).
    pub mode_area: f64,
}

impl MaterialSystem {
    /// NV centers in a diamond photonic-crystal waveguide.
    pub fn nv_diamond() -> Self {
        let wavelength = nv_diamond::WAVELENGTH;
        let refractive_index = nv_diamond::REFRACTIVE_INDEX;
        Self {
            wavelength,
            oscillator_strength: nv_diamond::OSCILLATOR_STRENGTH,
            refractive_index,
            gamma2: nv_diamond::GAMMA2,
            gamma4: nv_diamond::GAMMA4,
            bandwidth: nv_diamond::BANDWIDTH,
            mode_area: crate::eit::mode_area(wavelength, refractive_index),
        }
    }

    /// Checks positivity of every length and rate. The oscillator strength
    /// may be zero (dark transition).
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength", self.wavelength),
            ("refractive_index", self.refractive_index),
            ("gamma2", self.gamma2),
            ("gamma4", self.gamma4),
            ("bandwidth", self.bandwidth),
            ("mode_area", self.mode_area),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(QndError::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.oscillator_strength.is_finite() && self.oscillator_strength >= 0.0) {
            return Err(QndError::invalid("oscillator_strength must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn gamma4_over_gamma2(&self) -> f64 {
        self.gamma4 / self.gamma2
    }
}

/// Real pump and probe amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub alpha_b: f64,
    pub alpha_c: f64,
}

impl DriveConfig {
    pub fn new(alpha_b: f64, alpha_c: f64) -> Result<Self> {
        if !(alpha_b.is_finite() && alpha_b >= 0.0 && alpha_c.is_finite() && alpha_c >= 0.0) {
            return Err(QndError::invalid("drive amplitudes must be finite and >= 0"));
        }
        Ok(Self { alpha_b, alpha_c })
    }

    /// Pump amplitude chosen so that `|alpha_b|^2 = ratio * |alpha_c|^2`.
    pub fn from_ratio(alpha_c: f64, ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(QndError::invalid(format!("pump/probe ratio must be > 0, got {ratio}")));
        }
        Self::new(alpha_c * ratio.sqrt(), alpha_c)
    }

    /// `|alpha_b|^2 / |alpha_c|^2`, `None` for a dark probe.
    pub fn pump_probe_ratio(&self) -> Option<f64> {
        (self.alpha_c > 0.0).then(|| self.alpha_b * self.alpha_b / (self.alpha_c * self.alpha_c))
    }

    pub fn pump_photons(&self) -> f64 {
        self.alpha_b * self.alpha_b
    }

    pub fn probe_photons(&self) -> f64 {
        self.alpha_c * self.alpha_c
    }
}

/// Conditions under which the weak-signal formulas are being pushed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignWarning {
    /// `|Omega_a| / gamma2 > 1`.
    StrongCoupling { omega_over_gamma2: f64 },
    /// More atoms than the spin-dephasing-free bound.
    DephasingRegime { n_atoms: f64 },
}

impl std::fmt::Display for DesignWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignWarning::StrongCoupling { omega_over_gamma2 } => write!(
                f,
                "|Omega_a|/gamma2 = {omega_over_gamma2:.3} exceeds 1; weak-signal level shift may be inaccurate"
            ),
            DesignWarning::DephasingRegime { n_atoms } => {
                write!(f, "N = {n_atoms:.1} exceeds 1e4; spin dephasing is no longer negligible")
            }
        }
    }
}

/// A solved minimum-resource operating point. Rates are in units of gamma2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorDesign {
    /// Continuous minimum atom count; round up for a physical device.
    pub n_atoms: f64,
    pub nu_c: f64,
    pub drive: DriveConfig,
    pub kerr: KerrInteraction,
    pub snr: f64,
    pub p_error: f64,
    pub warnings: Vec<DesignWarning>,
}

impl DetectorDesign {
    pub fn atoms_required(&self) -> u64 {
        self.n_atoms.ceil() as u64
    }

    pub fn probe_photons(&self) -> f64 {
        self.drive.probe_photons()
    }

    /// Probability that a single signal photon is absorbed.
    pub fn absorption(&self) -> f64 {
        crate::kerr::absorption(1, &self.kerr)
    }
}
