//! EIT-mediated cross-Kerr coupling: material calculator, complex level
//! shift, and the minimum-resource design solver.
//!
//! Material quantities are SI. The shift and design functions are scale-free;
//! callers pass rates in units of `gamma2` (so `gamma2 = 1`) unless they
//! explicitly want absolute units.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{self, nv_diamond};
use crate::error::{QndError, Result};
use crate::homodyne::SnrConvention;
use crate::math::complex_div;
use crate::types::{DesignWarning, DetectorDesign, DriveConfig, KerrInteraction, MaterialSystem, PhaseSign};

/// Waveguide mode area `(lambda / 3 eta)^2` (m^2).
pub fn mode_area(wavelength: f64, refractive_index: f64) -> f64 {
    let side = wavelength / (3.0 * refractive_index);
    side * side
}

/// Resonant absorption cross-section `3 lambda^2 / 2 pi` (m^2).
pub fn absorption_cross_section(wavelength: f64) -> f64 {
    3.0 * wavelength * wavelength / (2.0 * PI)
}

/// Which form of the transition factor `A_k` to evaluate.
///
/// The printed expression `f e^2 w^2 / (2 pi eps0 m_e c^2)` has units of m/s^2
/// rather than a rate; dividing by one more `c` gives `1/s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionFactorReading {
    #[default]
    Rate,
    AsPrinted,
}

/// `A_k` for the material's transition under the chosen reading.
pub fn transition_factor(mat: &MaterialSystem, reading: TransitionFactorReading) -> f64 {
    let c = constants::SPEED_OF_LIGHT;
    let omega = 2.0 * PI * c / mat.wavelength;
    let e2 = constants::ELEMENTARY_CHARGE * constants::ELEMENTARY_CHARGE;
    let printed = mat.oscillator_strength * e2 * omega * omega
        / (2.0 * PI * constants::VACUUM_PERMITTIVITY * constants::ELECTRON_MASS * c * c);
    match reading {
        TransitionFactorReading::AsPrinted => printed,
        TransitionFactorReading::Rate => printed / c,
    }
}

/// `|Omega|^2 = (sigma / eta A) A_k dw / 8 pi` (rad^2/s^2), rate reading of `A_k`.
pub fn vacuum_rabi_sq(mat: &MaterialSystem) -> f64 {
    vacuum_rabi_sq_with(mat, TransitionFactorReading::Rate)
}

pub fn vacuum_rabi_sq_with(mat: &MaterialSystem, reading: TransitionFactorReading) -> f64 {
    let sigma = absorption_cross_section(mat.wavelength);
    sigma / (mat.refractive_index * mat.mode_area) * transition_factor(mat, reading) * mat.bandwidth / (8.0 * PI)
}

/// `|Omega_a|^2 t = 81 eta gamma2 / 8 pi`, for pulses with `dw t = 3 pi`.
///
/// Pass `gamma2 = 1.0` to get the value in units of `gamma2`.
pub fn omega_a_sq_t(refractive_index: f64, gamma2: f64) -> f64 {
    81.0 * refractive_index * gamma2 / (8.0 * PI)
}

/// Bandwidth-interaction time product of a weakly super-Gaussian pulse.
pub const BANDWIDTH_TIME_PRODUCT: f64 = 3.0 * PI;

/// Coupling figures derived from a material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RabiSummary {
    pub sigma_k: f64,
    pub mode_area: f64,
    /// `A_k` under the rate reading (1/s).
    pub a_k: f64,
    /// `A_k` as printed (m/s^2).
    pub a_k_as_printed: f64,
    /// `|Omega|^2` under the rate reading (rad^2/s^2).
    pub omega_sq: f64,
    /// `|Omega|^2` with the printed `A_k`.
    pub omega_sq_as_printed: f64,
    /// `|Omega|` (rad/s).
    pub omega: f64,
    pub omega_over_2pi_mhz: f64,
    pub omega_over_2pi_mhz_as_printed: f64,
    pub omega_over_gamma2: f64,
    /// Pulse interaction time `3 pi / dw` (s).
    pub interaction_time: f64,
    /// `|Omega|^2 t` from the material numbers, in units of gamma2.
    pub omega_sq_t: f64,
    /// The closed-form `81 eta / 8 pi`, in units of gamma2.
    pub omega_sq_t_closed_form: f64,
    pub warnings: Vec<DesignWarning>,
}

pub fn rabi_summary(mat: &MaterialSystem) -> Result<RabiSummary> {
    mat.validate()?;
    let omega_sq = vacuum_rabi_sq_with(mat, TransitionFactorReading::Rate);
    let omega_sq_as_printed = vacuum_rabi_sq_with(mat, TransitionFactorReading::AsPrinted);
    let omega = omega_sq.sqrt();
    let interaction_time = BANDWIDTH_TIME_PRODUCT / mat.bandwidth;
    let omega_over_gamma2 = omega / mat.gamma2;
    let mut warnings = Vec::new();
    if omega_over_gamma2 > 1.0 {
        warnings.push(DesignWarning::StrongCoupling { omega_over_gamma2 });
    }
    Ok(RabiSummary {
        sigma_k: absorption_cross_section(mat.wavelength),
        mode_area: mat.mode_area,
        a_k: transition_factor(mat, TransitionFactorReading::Rate),
        a_k_as_printed: transition_factor(mat, TransitionFactorReading::AsPrinted),
        omega_sq,
        omega_sq_as_printed,
        omega,
        omega_over_2pi_mhz: omega / (2.0 * PI) / 1e6,
        omega_over_2pi_mhz_as_printed: omega_sq_as_printed.sqrt() / (2.0 * PI) / 1e6,
        omega_over_gamma2,
        interaction_time,
        omega_sq_t: omega_sq * interaction_time / mat.gamma2,
        omega_sq_t_closed_form: omega_a_sq_t(mat.refractive_index, 1.0),
        warnings,
    })
}

/// Inputs to the complex level shift `W`. Photon numbers are per mode;
/// rates share one unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelShiftInputs {
    pub n_atoms: f64,
    pub rabi_a_sq: f64,
    pub rabi_b_sq: f64,
    pub rabi_c_sq: f64,
    pub n_a: u64,
    pub n_b: u64,
    pub n_c: u64,
    /// Probe detuning `omega_c - omega_43`.
    pub nu_c: f64,
    pub gamma2: f64,
    pub gamma4: f64,
}

/// Complex rate `W` of the all-ground-state amplitude, `exp(-i W t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelShift {
    pub w: Complex64,
}

impl LevelShift {
    /// `Im W <= 0`: the amplitude decays rather than grows.
    pub fn is_absorptive(&self) -> bool {
        self.w.im <= 0.0
    }

    /// Accumulated complex phase `W t`.
    pub fn integrated(&self, t: f64) -> Complex64 {
        self.w * t
    }
}

/// `W = N |Oa|^2 |Oc|^2 n_a n_c / (nu_c |Ob|^2 n_b + i (g4 |Ob|^2 n_b + g2 |Oc|^2 n_c))`.
pub fn compute_w(p: &LevelShiftInputs) -> Result<LevelShift> {
    let (n_a, n_b, n_c) = (p.n_a as f64, p.n_b as f64, p.n_c as f64);
    let num = p.n_atoms * p.rabi_a_sq * p.rabi_c_sq * n_a * n_c;
    let pump = p.rabi_b_sq * n_b;
    let den = Complex64::new(p.nu_c * pump, p.gamma4 * pump + p.gamma2 * p.rabi_c_sq * n_c);
    let w = complex_div(Complex64::new(num, 0.0), den)?;
    Ok(LevelShift { w })
}

/// Per-photon probe shift `theta - i kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub theta_kappa: Complex64,
}

impl PhaseShift {
    pub fn theta(&self) -> f64 {
        self.theta_kappa.re
    }

    pub fn kappa(&self) -> f64 {
        -self.theta_kappa.im
    }

    /// The EIT evolution rotates the probe as `alpha e^{-i n_a (theta - i kappa)}`.
    pub fn to_kerr(&self) -> Result<KerrInteraction> {
        KerrInteraction::new(self.theta(), self.kappa(), PhaseSign::Negative)
    }
}

/// `theta - i kappa = N |Oa|^2 t / (nu_c |a_b|^2 + i (g4 |a_b|^2 + g2 |a_c|^2))`,
/// valid when `|Omega_b|^2 = |Omega_c|^2`.
pub fn theta_kappa(
    n_atoms: f64,
    omega_a_sq_t: f64,
    drive: &DriveConfig,
    nu_c: f64,
    gamma2: f64,
    gamma4: f64,
) -> Result<PhaseShift> {
    if drive.alpha_b.is_nan() || drive.alpha_b <= 0.0 {
        return Err(QndError::invalid("pump amplitude alpha_b must be > 0"));
    }
    let nb = drive.pump_photons();
    let nc = drive.probe_photons();
    let den = Complex64::new(nu_c * nb, gamma4 * nb + gamma2 * nc);
    let theta_kappa = complex_div(Complex64::new(n_atoms * omega_a_sq_t, 0.0), den)?;
    Ok(PhaseShift { theta_kappa })
}

/// Minimum detuning `(g4 |a_b|^2 + g2 |a_c|^2) / |a_b|^2` in units of gamma2,
/// for pump/probe photon ratio `ratio`.
pub fn min_detuning(ratio: f64, gamma4_over_gamma2: f64) -> f64 {
    (ratio * gamma4_over_gamma2 + 1.0) / ratio
}

/// What the readout must achieve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnrTarget {
    PError { p_error: f64, convention: SnrConvention },
    Snr { snr: f64 },
}

impl SnrTarget {
    pub fn p_error(p_error: f64) -> Self {
        SnrTarget::PError { p_error, convention: SnrConvention::default() }
    }

    fn resolve(self) -> Result<(f64, f64)> {
        match self {
            SnrTarget::PError { p_error, convention } => {
                if !(p_error > 0.0 && p_error < 0.5) {
                    return Err(QndError::domain(format!(
                        "target error probability must lie in (0, 0.5), got {p_error}"
                    )));
                }
                Ok((convention.snr(p_error)?, p_error))
            }
            SnrTarget::Snr { snr } => {
                if !(snr.is_finite() && snr > 0.0) {
                    return Err(QndError::domain(format!("target SNR must be > 0, got {snr}")));
                }
                Ok((snr, crate::homodyne::p_error_binary(snr)))
            }
        }
    }
}

/// Parameters of a minimum-resource design. Rates in units of gamma2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignRequest {
    pub theta_max: f64,
    pub target: SnrTarget,
    pub pump_probe_ratio: f64,
    pub gamma4_over_gamma2: f64,
    pub omega_a_sq_t: f64,
}

impl DesignRequest {
    /// NV-diamond defaults: `<n_b> = 10 <n_c>`, `gamma4 = gamma2`, `eta = 2.4`.
    pub fn nv_diamond(theta_max: f64, target: SnrTarget) -> Self {
        Self {
            theta_max,
            target,
            pump_probe_ratio: constants::DEFAULT_PUMP_PROBE_RATIO,
            gamma4_over_gamma2: nv_diamond::GAMMA4 / nv_diamond::GAMMA2,
            omega_a_sq_t: omega_a_sq_t(nv_diamond::REFRACTIVE_INDEX, 1.0),
        }
    }
}

/// Smallest atom number and detuning producing phase `theta_max` per photon
/// at the target SNR.
///
/// The probe amplitude is the small-angle `SNR / 2 theta_max`; with it,
/// `N_min = 2 theta_max (g4 |a_b|^2 + g2 |a_c|^2) / |Oa|^2 t` and the detuning
/// is the value making the denominator's real and imaginary parts equal, so
/// the returned coupling has `kappa = theta = theta_max`.
pub fn design_minimum(req: &DesignRequest) -> Result<DetectorDesign> {
    let theta_max = req.theta_max;
    if !(theta_max > 0.0 && theta_max < 1.0) {
        return Err(QndError::domain(format!("theta_max must lie in (0, 1), got {theta_max}")));
    }
    for (name, v) in [
        ("pump/probe ratio", req.pump_probe_ratio),
        ("gamma4/gamma2", req.gamma4_over_gamma2),
        ("|Omega_a|^2 t", req.omega_a_sq_t),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(QndError::domain(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    let (snr, p_error) = req.target.resolve()?;

    let alpha_c = snr / (2.0 * theta_max);
    let drive = DriveConfig::from_ratio(alpha_c, req.pump_probe_ratio)?;
    let damping = req.gamma4_over_gamma2 * drive.pump_photons() + drive.probe_photons();
    let n_atoms = 2.0 * theta_max * damping / req.omega_a_sq_t;
    let nu_c = damping / drive.pump_photons();

    let shift = theta_kappa(n_atoms, req.omega_a_sq_t, &drive, nu_c, 1.0, req.gamma4_over_gamma2)?;
    let kerr = shift.to_kerr()?;

    let mut warnings = Vec::new();
    if n_atoms > nv_diamond::MAX_ATOMS_WITHOUT_DEPHASING {
        warnings.push(DesignWarning::DephasingRegime { n_atoms });
    }
    Ok(DetectorDesign { n_atoms, nu_c, drive, kerr, snr, p_error, warnings })
}
