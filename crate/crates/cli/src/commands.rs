//! The five subcommands as pure functions from [`Settings`] to a report.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qnd_core::eit::{self, DesignRequest, RabiSummary, SnrTarget};
use qnd_core::homodyne::{self, Quadrature, SnrConvention};
use qnd_core::{fock, kerr};
use qnd_core::{
    Complex64, DesignWarning, DetectorDesign, FockSignal, KerrInteraction, MaterialSystem, PhaseSign, ProbeState,
};

use crate::config::Settings;
use crate::CliError;

pub const DEFAULT_THETA_MAX: f64 = 0.01;
pub const DEFAULT_P_ERROR: f64 = 0.01;
pub const DEFAULT_SWEEP_P_ERRORS: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const DEFAULT_SWEEP_FROM: f64 = 1e-3;
pub const DEFAULT_SWEEP_TO: f64 = 1e-1;
pub const DEFAULT_SWEEP_POINTS: usize = 100;
pub const DEFAULT_SHOTS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const ORACLE_TOLERANCE: f64 = 1e-6;
pub const ROTATION_TOLERANCE: f64 = 1e-8;

fn target(settings: &Settings, p_error: f64, convention: SnrConvention) -> SnrTarget {
    match settings.snr {
        Some(snr) => SnrTarget::Snr { snr },
        None => SnrTarget::PError { p_error, convention },
    }
}

fn request(settings: &Settings, mat: &MaterialSystem, theta_max: f64, target: SnrTarget) -> DesignRequest {
    DesignRequest {
        theta_max,
        target,
        pump_probe_ratio: settings.ratio.unwrap_or(qnd_core::constants::DEFAULT_PUMP_PROBE_RATIO),
        gamma4_over_gamma2: mat.gamma4_over_gamma2(),
        omega_a_sq_t: eit::omega_a_sq_t(mat.refractive_index, 1.0),
    }
}

/// Absolute-unit companions of a design, from the material's `gamma2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiRates {
    pub gamma2_per_s: f64,
    pub nu_c_min_rad_per_s: f64,
    pub nu_c_min_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub theta_max: f64,
    pub target_p_error: f64,
    pub snr: f64,
    pub snr_convention: SnrConvention,
    pub pump_probe_ratio: f64,
    pub gamma4_over_gamma2: f64,
    /// `|Omega_a|^2 t` in units of gamma2.
    pub omega_a_sq_t: f64,
    pub n_min: f64,
    pub atoms_required: u64,
    /// Minimum probe detuning in units of gamma2.
    pub nu_c_min: f64,
    pub alpha_b: f64,
    pub alpha_c: f64,
    pub mean_pump_photons: f64,
    pub mean_probe_photons: f64,
    pub theta: f64,
    pub kappa: f64,
    pub absorption: f64,
    pub binary_p_error: f64,
    pub warnings: Vec<DesignWarning>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub si: Option<SiRates>,
}

impl DesignReport {
    fn new(req: &DesignRequest, d: &DetectorDesign, convention: SnrConvention, mat: Option<&MaterialSystem>) -> Self {
        DesignReport {
            theta_max: req.theta_max,
            target_p_error: d.p_error,
            snr: d.snr,
            snr_convention: convention,
            pump_probe_ratio: req.pump_probe_ratio,
            gamma4_over_gamma2: req.gamma4_over_gamma2,
            omega_a_sq_t: req.omega_a_sq_t,
            n_min: d.n_atoms,
            atoms_required: d.atoms_required(),
            nu_c_min: d.nu_c,
            alpha_b: d.drive.alpha_b,
            alpha_c: d.drive.alpha_c,
            mean_pump_photons: d.drive.pump_photons(),
            mean_probe_photons: d.drive.probe_photons(),
            theta: d.kerr.theta(),
            kappa: d.kerr.kappa(),
            absorption: d.absorption(),
            binary_p_error: homodyne::p_error_binary(d.snr),
            warnings: d.warnings.clone(),
            si: mat.map(|m| SiRates {
                gamma2_per_s: m.gamma2,
                nu_c_min_rad_per_s: d.nu_c * m.gamma2,
                nu_c_min_mhz: d.nu_c * m.gamma2 / (2.0 * PI) / 1e6,
            }),
        }
    }
}

pub fn design(settings: &Settings) -> Result<DesignReport, CliError> {
    let mat = settings.material()?;
    let convention = settings.convention();
    let theta_max = settings.theta_max.unwrap_or(DEFAULT_THETA_MAX);
    let p_error = settings.p_error.unwrap_or(DEFAULT_P_ERROR);
    let req = request(settings, &mat, theta_max, target(settings, p_error, convention));
    let d = eit::design_minimum(&req)?;
    let si = settings.si.unwrap_or(false).then_some(&mat);
    Ok(DesignReport::new(&req, &d, convention, si))
}

/// One point of an `N_min(theta_max)` curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_max: f64,
    pub p_error: f64,
    pub snr: f64,
    pub n_min: f64,
    pub alpha_c: f64,
    pub mean_probe_photons: f64,
    pub nu_c_min: f64,
}

/// `points` log-spaced values on `[from, to]`, endpoints included.
pub fn log_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![from];
    }
    let (a, b) = (from.ln(), to.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                from
            } else if i + 1 == points {
                to
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn sweep_grid(settings: &Settings) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let from = settings.theta_from.unwrap_or(DEFAULT_SWEEP_FROM);
    let to = settings.theta_to.unwrap_or(DEFAULT_SWEEP_TO);
    let points = settings.points.unwrap_or(DEFAULT_SWEEP_POINTS);
    if points == 0 {
        return Err(CliError::Config("sweep grid is empty (points = 0)".into()));
    }
    if !(from > 0.0 && to < 1.0 && from <= to) {
        return Err(CliError::Config(format!("sweep theta range must satisfy 0 < from <= to < 1, got [{from}, {to}]")));
    }
    let p_errors = settings.p_errors.clone().unwrap_or_else(|| DEFAULT_SWEEP_P_ERRORS.to_vec());
    if p_errors.is_empty() {
        return Err(CliError::Config("sweep needs at least one error probability".into()));
    }
    Ok((log_grid(from, to, points), p_errors))
}

/// Rows ordered by error probability (as given), then by theta grid index.
pub fn sweep_fig4(settings: &Settings) -> Result<Vec<SweepRow>, CliError> {
    let mat = settings.material()?;
    let convention = settings.convention();
    let (thetas, p_errors) = sweep_grid(settings)?;
    let cells: Vec<(f64, f64)> = p_errors.iter().flat_map(|&p| thetas.iter().map(move |&t| (p, t))).collect();
    cells
        .par_iter()
        .map(|&(p_error, theta_max)| {
            let req = request(settings, &mat, theta_max, SnrTarget::PError { p_error, convention });
            let d = eit::design_minimum(&req)?;
            Ok(SweepRow {
                theta_max,
                p_error,
                snr: d.snr,
                n_min: d.n_atoms,
                alpha_c: d.drive.alpha_c,
                mean_probe_photons: d.drive.probe_photons(),
                nu_c_min: d.nu_c,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub true_n: u32,
    pub n_max: u32,
    pub shots: u64,
    pub seed: u64,
    pub workers: usize,
    pub alpha_c: f64,
    pub theta: f64,
    pub kappa: f64,
    pub means: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
    pub misclassified: u64,
    pub empirical_error_rate: f64,
    pub analytic_error_rate: f64,
    pub binomial_sigma: f64,
    pub z_score: f64,
    pub readout_mean: f64,
    pub readout_variance: f64,
}

/// Readout simulation at a design's working point.
///
/// Without absorption the probe amplitude is `SNR / (2 sin theta_max)`, so
/// the one-photon mean sits exactly at the target SNR. With absorption the
/// minimum-resource design's amplitude and damped coupling are used.
pub fn montecarlo(settings: &Settings) -> Result<MonteCarloReport, CliError> {
    let theta_max = settings.theta_max.unwrap_or(DEFAULT_THETA_MAX);
    let n_max = settings.n_max.unwrap_or(1);
    let true_n = settings.true_n.unwrap_or(1);
    let shots = settings.shots.unwrap_or(DEFAULT_SHOTS);
    let seed = settings.seed.unwrap_or(DEFAULT_SEED);
    let workers = settings.workers.unwrap_or(1);
    if true_n > n_max {
        return Err(CliError::Config(format!("--true-n {true_n} exceeds --n-max {n_max}")));
    }
    if shots == 0 || workers == 0 {
        return Err(CliError::Config("--shots and --workers must be >= 1".into()));
    }

    let (alpha_c, coupling) = if settings.with_absorption.unwrap_or(false) {
        let mat = settings.material()?;
        let p_error = settings.p_error.unwrap_or(DEFAULT_P_ERROR);
        let req = request(settings, &mat, theta_max, target(settings, p_error, settings.convention()));
        let d = eit::design_minimum(&req)?;
        (d.drive.alpha_c, d.kerr)
    } else {
        let snr = match settings.snr {
            Some(snr) => snr,
            None => settings.convention().snr(settings.p_error.unwrap_or(DEFAULT_P_ERROR))?,
        };
        (homodyne::required_alpha(snr, theta_max)?, KerrInteraction::lossless(theta_max)?)
    };

    let plan = homodyne::build_plan(alpha_c, &coupling, n_max)?;
    let report = homodyne::simulate_shots_parallel(&plan, true_n, shots, seed, workers)?;
    let analytic = plan.analytic_error_rate(true_n)?;
    let empirical = report.error_rate();
    let sigma = homodyne::binomial_sigma(analytic, shots);
    let z_score = if sigma > 0.0 {
        (empirical - analytic) / sigma
    } else if empirical == analytic {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MonteCarloReport {
        true_n,
        n_max,
        shots,
        seed,
        workers,
        alpha_c,
        theta: coupling.theta(),
        kappa: coupling.kappa(),
        means: plan.means().to_vec(),
        thresholds: plan.thresholds().to_vec(),
        misclassified: report.misclassified(),
        counts: report.counts,
        empirical_error_rate: empirical,
        analytic_error_rate: analytic,
        binomial_sigma: sigma,
        z_score,
        readout_mean: report.readout.mean,
        readout_variance: report.readout.variance(),
    })
}

/// One cell of the oracle grid: truncated-Fock moments against the analytic readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCell {
    pub alpha: f64,
    pub theta: f64,
    pub n_a: u32,
    pub dim: usize,
    pub mean_deviation: f64,
    pub variance_deviation: f64,
    pub rotation_distance: f64,
    pub pass: bool,
}

impl OracleCell {
    pub fn max_deviation(&self) -> f64 {
        self.mean_deviation.max(self.variance_deviation)
    }
}

pub const DEFAULT_ORACLE_ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
pub const DEFAULT_ORACLE_THETAS: [f64; 5] = [0.0, 0.01, 0.1, 0.5, FRAC_PI_2];
pub const DEFAULT_ORACLE_NS: [u32; 4] = [0, 1, 2, 3];

pub fn oracle_check(settings: &Settings) -> Result<Vec<OracleCell>, CliError> {
    let alphas = settings.alphas.clone().unwrap_or_else(|| DEFAULT_ORACLE_ALPHAS.to_vec());
    let thetas = settings.thetas.clone().unwrap_or_else(|| DEFAULT_ORACLE_THETAS.to_vec());
    let ns = settings.n_values.clone().unwrap_or_else(|| DEFAULT_ORACLE_NS.to_vec());
    if let Some(&a) = alphas.iter().find(|a| a.is_nan() || a.abs() > fock::MAX_ALPHA) {
        return Err(CliError::Config(format!(
            "oracle amplitudes must satisfy |alpha| <= {}, got {a}",
            fock::MAX_ALPHA
        )));
    }
    if let Some(&t) = thetas.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(CliError::Config(format!("oracle angles must be finite and >= 0, got {t}")));
    }
    if alphas.is_empty() || thetas.is_empty() || ns.is_empty() {
        return Err(CliError::Config("oracle grid is empty".into()));
    }

    let mut cells = Vec::with_capacity(alphas.len() * thetas.len() * ns.len());
    for &a in &alphas {
        for &t in &thetas {
            cells.extend(ns.iter().map(|&n| (a, t, n)));
        }
    }
    let y = Quadrature::momentum(PhaseSign::Positive);
    cells
        .par_iter()
        .map(|&(alpha, theta, n_a)| {
            let start = Complex64::new(alpha, 0.0);
            let (dim, vector) = match settings.dim_override {
                Some(dim) => (dim, fock::coherent_vector_truncated(start, dim)?),
                None => {
                    let dim = fock::required_dim(start);
                    (dim, fock::coherent_vector(start, dim)?)
                }
            };
            let coupling = KerrInteraction::lossless(theta)?;
            let analytic = homodyne::quadrature_mean(
                kerr::evolve_probe(FockSignal::new(n_a), ProbeState::real(alpha), &coupling),
                y,
            );
            let evolved = fock::kerr_unitary_apply(&vector, n_a, theta, PhaseSign::Positive);
            let (mean, variance) = fock::quadrature_moments(&evolved, y.phi);
            let rotated = start * Complex64::from_polar(1.0, f64::from(n_a) * theta);
            let direct = fock::coherent_vector_truncated(rotated, dim)?;
            let mean_deviation = (mean - analytic).abs();
            let variance_deviation = (variance - homodyne::COHERENT_VARIANCE).abs();
            let rotation_distance = evolved.distance(&direct);
            // Checked the way round that also fails on NaN.
            let pass = mean_deviation <= ORACLE_TOLERANCE
                && variance_deviation <= ORACLE_TOLERANCE
                && rotation_distance <= ROTATION_TOLERANCE;
            Ok(OracleCell { alpha, theta, n_a, dim, mean_deviation, variance_deviation, rotation_distance, pass })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RabiReport {
    pub material: MaterialSystem,
    #[serde(flatten)]
    pub summary: RabiSummary,
}

pub fn rabi(settings: &Settings) -> Result<RabiReport, CliError> {
    let material = settings.material()?;
    let summary = eit::rabi_summary(&material)?;
    Ok(RabiReport { material, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e-1, 3);
        assert_eq!(g[0], 1e-3);
        assert!((g[1] - 1e-2).abs() < 1e-15);
        assert_eq!(g[2], 1e-1);
        assert_eq!(log_grid(0.2, 0.5, 1), vec![0.2]);
    }

    #[test]
    fn design_defaults_reproduce_bookline() {
        let r = design(&Settings::default()).unwrap();
        assert!((r.n_min - 1504.603).abs() < 1e-3);
        assert!((r.nu_c_min - 1.1).abs() < 1e-12);
        assert!(r.absorption < 0.01);
        assert!(r.si.is_none());
    }

    #[test]
    fn design_with_si_rates() {
        let s = Settings { si: Some(true), ..Default::default() };
        let si = design(&s).unwrap().si.unwrap();
        assert!((si.nu_c_min_rad_per_s - 2.2e7).abs() < 1e-3);
    }

    #[test]
    fn design_rejects_zero_theta() {
        let s = Settings { theta_max: Some(0.0), ..Default::default() };
        assert!(matches!(design(&s), Err(CliError::Infeasible(_))));
    }

    #[test]
    fn sweep_errors() {
        let s = Settings { points: Some(0), ..Default::default() };
        assert!(matches!(sweep_fig4(&s), Err(CliError::Config(_))));
        let s = Settings { p_errors: Some(vec![]), ..Default::default() };
        assert!(matches!(sweep_fig4(&s), Err(CliError::Config(_))));
        let s = Settings { theta_to: Some(1.0), ..Default::default() };
        assert!(matches!(sweep_fig4(&s), Err(CliError::Config(_))));
    }

    #[test]
    fn oracle_refuses_large_alpha() {
        let s = Settings { alphas: Some(vec![4.5]), ..Default::default() };
        assert!(matches!(oracle_check(&s), Err(CliError::Config(_))));
    }

    #[test]
    fn oracle_zero_amplitude_is_exact() {
        let s = Settings { alphas: Some(vec![0.0]), ..Default::default() };
        for cell in oracle_check(&s).unwrap() {
            assert!(cell.pass);
            assert_eq!(cell.mean_deviation, 0.0);
            assert!(cell.variance_deviation < 1e-15);
        }
    }

    #[test]
    fn single_shot_report() {
        let s = Settings { shots: Some(1), ..Default::default() };
        let r = montecarlo(&s).unwrap();
        assert_eq!(r.counts.iter().sum::<u64>(), 1);
    }

    #[test]
    fn rabi_f_scaling() {
        let base = rabi(&Settings::default()).unwrap();
        let s = Settings { oscillator_strength: Some(0.48), ..Default::default() };
        let four = rabi(&s).unwrap();
        assert!((four.summary.omega / base.summary.omega - 2.0).abs() < 1e-12);
    }
}
