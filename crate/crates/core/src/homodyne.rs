//! Homodyne readout of the rotated probe.
//!
//! The measured quadrature is `x(phi) = c e^{i phi} + c^dag e^{-i phi}`; every
//! quadrature of a coherent state has unit variance in this convention, so
//! the readout is a unit-variance Gaussian centred on `2 Re[alpha e^{i phi}]`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{ANCHOR_P_ERROR, ANCHOR_SNR};
use crate::error::{QndError, Result};
use crate::math::{erfc, erfc_inv};
use crate::types::{KerrInteraction, PhaseSign, ProbeState};

/// Quadrature angle `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub phi: f64,
}

impl Quadrature {
    pub fn new(phi: f64) -> Self {
        Self { phi }
    }

    /// The `Y` quadrature for a given rotation sign, oriented so that
    /// `<Y> = +2 alpha_c sin(n_a theta)` for a real initial probe.
    pub fn momentum(sign: PhaseSign) -> Self {
        Self { phi: -sign.value() * FRAC_PI_2 }
    }
}

/// `<x(phi)> = 2 Re[alpha e^{i phi}]`.
pub fn quadrature_mean(probe: ProbeState, q: Quadrature) -> f64 {
    2.0 * (probe.alpha.re * q.phi.cos() - probe.alpha.im * q.phi.sin())
}

/// Quadrature variance of any coherent probe.
pub const COHERENT_VARIANCE: f64 = 1.0;

/// Signal-to-noise ratio of the `Y` readout, `2 alpha_c e^{-n_a kappa} |sin(n_a theta)|`.
pub fn snr_y(alpha_c: f64, theta: f64, n_a: u32, kappa: f64) -> f64 {
    let n = f64::from(n_a);
    2.0 * alpha_c * (-n * kappa).exp() * (n * theta).sin().abs()
}

/// Probability of confusing `|alpha>` with its rotated image for a readout
/// separation `snr` in units of the noise standard deviation.
pub fn p_error_binary(snr: f64) -> f64 {
    0.5 * erfc(snr / (2.0 * SQRT_2))
}

/// Exact inverse of [`p_error_binary`].
pub fn snr_for_p_error(p_error: f64) -> Result<f64> {
    if !(p_error > 0.0 && p_error < 0.5) {
        return Err(QndError::domain(format!("target error probability must lie in (0, 0.5), got {p_error}")));
    }
    Ok(2.0 * SQRT_2 * erfc_inv(2.0 * p_error)?)
}

/// How a target error probability is turned into a target SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrConvention {
    /// `P_error = 0.01` maps to the rounded `SNR = 4.6`; other targets are inverted exactly.
    #[default]
    Anchored,
    /// Always invert `P_error = erfc(SNR / 2 sqrt 2) / 2`.
    Exact,
}

impl SnrConvention {
    pub fn snr(self, p_error: f64) -> Result<f64> {
        match self {
            SnrConvention::Anchored if p_error == ANCHOR_P_ERROR => Ok(ANCHOR_SNR),
            _ => snr_for_p_error(p_error),
        }
    }
}

/// Probe amplitude reaching `target_snr` at phase `theta_max`: `snr / (2 sin theta_max)`.
pub fn required_alpha(target_snr: f64, theta_max: f64) -> Result<f64> {
    if !(theta_max > 0.0 && theta_max < PI) {
        return Err(QndError::domain(format!("theta_max must lie in (0, pi), got {theta_max}")));
    }
    if !(target_snr.is_finite() && target_snr >= 0.0) {
        return Err(QndError::invalid("target SNR must be finite and >= 0"));
    }
    Ok(target_snr / (2.0 * theta_max.sin()))
}

/// Maximum-likelihood photon-number decision rule for the `Y` readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationPlan {
    means: Vec<f64>,
    thresholds: Vec<f64>,
    variance: f64,
}

/// Decision plan resolving `n_a = 0..=n_max`.
///
/// Fails once the readout means stop increasing, i.e. when the accumulated
/// phase `n theta` approaches a quarter turn (or damping wins).
pub fn build_plan(alpha_c: f64, kerr: &KerrInteraction, n_max: u32) -> Result<DiscriminationPlan> {
    if n_max < 1 {
        return Err(QndError::invalid("n_max must be >= 1"));
    }
    if !(alpha_c.is_finite() && alpha_c > 0.0) {
        return Err(QndError::invalid(format!("alpha_c must be > 0, got {alpha_c}")));
    }
    let means: Vec<f64> = (0..=n_max)
        .map(|n| {
            let n = f64::from(n);
            2.0 * alpha_c * (-n * kerr.kappa()).exp() * (n * kerr.theta()).sin()
        })
        .collect();
    if let Some(at) = means.windows(2).position(|w| w[1] <= w[0]) {
        return Err(QndError::NonMonotone { at: at + 1 });
    }
    let thresholds = means.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(DiscriminationPlan { means, thresholds, variance: COHERENT_VARIANCE })
}

impl DiscriminationPlan {
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn n_max(&self) -> u32 {
        self.thresholds.len() as u32
    }

    /// Replaces the readout noise variance. Intended for limit checks; the
    /// physical coherent-state value is 1.
    pub fn with_variance(mut self, variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(QndError::invalid("variance must be finite and >= 0"));
        }
        self.variance = variance;
        Ok(self)
    }

    /// Decided photon number for readout `y`.
    pub fn classify(&self, y: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= y)
    }

    /// Gaussian-tail probability of deciding anything other than `true_n`.
    pub fn analytic_error_rate(&self, true_n: u32) -> Result<f64> {
        let n = self.check_index(true_n)?;
        let m = self.means[n];
        let sigma = self.variance.sqrt();
        let tail = |distance: f64| {
            if sigma == 0.0 {
                if distance > 0.0 {
                    0.0
                } else {
                    1.0
                }
            } else {
                0.5 * erfc(distance / (sigma * SQRT_2))
            }
        };
        let below = if n > 0 { tail(m - self.thresholds[n - 1]) } else { 0.0 };
        let above = if n < self.thresholds.len() { tail(self.thresholds[n] - m) } else { 0.0 };
        Ok(below + above)
    }

    fn check_index(&self, true_n: u32) -> Result<usize> {
        let n = true_n as usize;
        if n >= self.means.len() {
            return Err(QndError::invalid(format!("true_n = {true_n} exceeds the plan's n_max = {}", self.n_max())));
        }
        Ok(n)
    }
}

/// Streaming mean and variance (Welford), mergeable across workers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningMoments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, y: f64) {
        self.count += 1;
        let delta = y - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (y - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        Self {
            count,
            mean: self.mean + delta * nb / count as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / count as f64,
        }
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Outcome of a Monte-Carlo run: decision counts indexed by decided `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotReport {
    pub true_n: u32,
    pub counts: Vec<u64>,
    pub readout: RunningMoments,
}

impl ShotReport {
    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn misclassified(&self) -> u64 {
        self.shots() - self.counts[self.true_n as usize]
    }

    pub fn error_rate(&self) -> f64 {
        self.misclassified() as f64 / self.shots() as f64
    }

    fn merge(mut self, other: ShotReport) -> ShotReport {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.readout = self.readout.merge(other.readout);
        self
    }
}

/// Binomial standard deviation of an empirical rate estimated from `shots` trials.
pub fn binomial_sigma(p: f64, shots: u64) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// Draws `shots` readouts for `true_n` on a single ChaCha8 stream.
pub fn simulate_shots(plan: &DiscriminationPlan, true_n: u32, shots: u64, seed: u64) -> Result<ShotReport> {
    simulate_shots_parallel(plan, true_n, shots, seed, 1)
}

/// Splits the shots into `workers` contiguous blocks, each on its own ChaCha8
/// stream of `seed`, and merges the blocks in index order. The result is a
/// pure function of `(seed, workers)`.
pub fn simulate_shots_parallel(
    plan: &DiscriminationPlan,
    true_n: u32,
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<ShotReport> {
    let n = plan.check_index(true_n)?;
    if shots == 0 {
        return Err(QndError::invalid("shots must be >= 1"));
    }
    if workers == 0 {
        return Err(QndError::invalid("workers must be >= 1"));
    }
    let normal = Normal::new(plan.means[n], plan.variance.sqrt())
        .map_err(|e| QndError::invalid(format!("readout distribution: {e}")))?;
    let workers = workers as u64;
    let block = |w: u64| {
        let start = shots * w / workers;
        let end = shots * (w + 1) / workers;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(w);
        let mut report = ShotReport { true_n, counts: vec![0; plan.means.len()], readout: RunningMoments::default() };
        for _ in start..end {
            let y = normal.sample(&mut rng);
            report.readout.push(y);
            report.counts[plan.classify(y)] += 1;
        }
        report
    };
    let blocks: Vec<ShotReport> = (0..workers).into_par_iter().map(block).collect();
    Ok(blocks.into_iter().reduce(ShotReport::merge).expect("at least one worker"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kerr::evolve_probe;
    use crate::types::FockSignal;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn lossless(theta: f64) -> KerrInteraction {
        KerrInteraction::lossless(theta).unwrap()
    }

    #[test]
    fn quadrature_mean_examples() {
        assert_relative_eq!(quadrature_mean(ProbeState::real(2.3), Quadrature::new(0.0)), 4.6);
        let theta = 0.37;
        let rotated = ProbeState::new(Complex64::from_polar(2.3, theta));
        let y = quadrature_mean(rotated, Quadrature::momentum(PhaseSign::Positive));
        assert_relative_eq!(y, 2.0 * 2.3 * theta.sin(), epsilon = 1e-14);
        let p = ProbeState::new(Complex64::new(1.0, 1.0));
        assert_relative_eq!(quadrature_mean(p, Quadrature::new(0.0)), 2.0);
    }

    #[test]
    fn momentum_convention_matches_both_signs() {
        for sign in [PhaseSign::Positive, PhaseSign::Negative] {
            let k = KerrInteraction::new(0.2, 0.0, sign).unwrap();
            let out = evolve_probe(FockSignal::new(1), ProbeState::real(3.0), &k);
            let y = quadrature_mean(out, Quadrature::momentum(sign));
            assert_relative_eq!(y, 6.0 * 0.2f64.sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn snr_examples() {
        assert_relative_eq!(snr_y(2.3, FRAC_PI_2, 1, 0.0), 4.6, epsilon = 1e-15);
        assert_eq!(snr_y(2.3, 0.4, 0, 0.0), 0.0);
        // 460 sin(0.02)
        assert_relative_eq!(snr_y(230.0, 0.01, 2, 0.0), 9.199386678933218, epsilon = 1e-12);
    }

    #[test]
    fn p_error_examples() {
        assert_eq!(p_error_binary(0.0), 0.5);
        assert_relative_eq!(p_error_binary(4.6), 0.010724110021675816, max_relative = 1e-12);
        assert_relative_eq!(p_error_binary(9.2), 2.112454702502858e-06, max_relative = 1e-12);
    }

    #[test]
    fn snr_inversion() {
        assert_relative_eq!(snr_for_p_error(0.01).unwrap(), 4.652695748081682, max_relative = 1e-12);
        assert_relative_eq!(snr_for_p_error(1e-4).unwrap(), 7.438032970911362, max_relative = 1e-12);
        assert!(snr_for_p_error(0.5).is_err());
        assert!(snr_for_p_error(0.0).is_err());
        assert_eq!(SnrConvention::Anchored.snr(0.01).unwrap(), 4.6);
        assert_eq!(SnrConvention::Anchored.snr(1e-3).unwrap(), SnrConvention::Exact.snr(1e-3).unwrap());
    }

    #[test]
    fn required_alpha_examples() {
        assert_relative_eq!(required_alpha(4.6, 0.01).unwrap(), 230.00383337805602, max_relative = 1e-12);
        let a = required_alpha(4.6, 0.1).unwrap();
        assert_relative_eq!(a, 4.6 / (2.0 * 0.1f64.sin()), max_relative = 1e-15);
        assert!((a * a - 531.0).abs() < 1.0);
        assert_relative_eq!(required_alpha(4.6, FRAC_PI_2).unwrap(), 2.3, epsilon = 1e-15);
        assert!(required_alpha(4.6, PI).is_err());
        assert!(required_alpha(4.6, 0.0).is_err());
    }

    #[test]
    fn binary_plan() {
        let plan = build_plan(2.3, &lossless(FRAC_PI_2), 1).unwrap();
        assert_eq!(plan.means()[0], 0.0);
        assert_relative_eq!(plan.means()[1], 4.6, epsilon = 1e-15);
        assert_relative_eq!(plan.thresholds()[0], 2.3, epsilon = 1e-15);
        assert_relative_eq!(plan.analytic_error_rate(1).unwrap(), p_error_binary(4.6), max_relative = 1e-12);
        assert_relative_eq!(plan.analytic_error_rate(0).unwrap(), p_error_binary(4.6), max_relative = 1e-12);
    }

    #[test]
    fn three_level_plan() {
        let plan = build_plan(230.0, &lossless(0.01), 2).unwrap();
        let want = [0.0, 460.0 * 0.01f64.sin(), 460.0 * 0.02f64.sin()];
        for (m, w) in plan.means().iter().zip(want) {
            assert_relative_eq!(*m, w, epsilon = 1e-12);
        }
        assert_relative_eq!(plan.means()[1], 4.599923333716665, epsilon = 1e-12);
        assert_eq!(plan.classify(-5.0), 0);
        assert_eq!(plan.classify(4.6), 1);
        assert_eq!(plan.classify(100.0), 2);
    }

    #[test]
    fn plan_refuses_past_quarter_turn() {
        match build_plan(230.0, &lossless(0.01), 200) {
            Err(QndError::NonMonotone { at }) => assert_eq!(at, 158),
            other => panic!("expected non-monotone error, got {other:?}"),
        }
        assert!(build_plan(1.0, &lossless(0.0), 1).is_err());
        assert!(build_plan(1.0, &lossless(0.1), 0).is_err());
    }

    #[test]
    fn noiseless_shots_are_exact() {
        let plan = build_plan(2.3, &lossless(FRAC_PI_2), 1).unwrap().with_variance(0.0).unwrap();
        for n in 0..=1 {
            let r = simulate_shots(&plan, n, 1000, 7).unwrap();
            assert_eq!(r.misclassified(), 0);
            assert_eq!(r.counts[n as usize], 1000);
        }
    }

    #[test]
    fn vacuum_readout_is_unbiased() {
        let plan = build_plan(2.3, &lossless(FRAC_PI_2), 1).unwrap();
        let shots = 200_000;
        let r = simulate_shots(&plan, 0, shots, 11).unwrap();
        assert!(r.readout.mean.abs() < 3.0 / (shots as f64).sqrt());
        assert!((r.readout.variance() - 1.0).abs() < 0.01);
    }

    #[test]
    fn shots_are_reproducible_per_worker_count() {
        let plan = build_plan(2.3, &lossless(FRAC_PI_2), 1).unwrap();
        let a = simulate_shots_parallel(&plan, 1, 10_001, 42, 4).unwrap();
        let b = simulate_shots_parallel(&plan, 1, 10_001, 42, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots(), 10_001);
        let c = simulate_shots_parallel(&plan, 1, 10_001, 43, 4).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn shot_preconditions() {
        let plan = build_plan(2.3, &lossless(FRAC_PI_2), 1).unwrap();
        assert!(simulate_shots(&plan, 2, 10, 0).is_err());
        assert!(simulate_shots(&plan, 0, 0, 0).is_err());
        let one = simulate_shots(&plan, 1, 1, 0).unwrap();
        assert_eq!(one.shots(), 1);
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin() * 3.0 + 1.0).collect();
        let mut all = RunningMoments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (RunningMoments::default(), RunningMoments::default());
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert_eq!(merged.count, 100);
        assert_relative_eq!(merged.mean, all.mean, epsilon = 1e-13);
        assert_relative_eq!(merged.variance(), all.variance(), epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn p_error_decreasing(a in 0.0f64..20.0, b in 0.0f64..20.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(p_error_binary(hi) < p_error_binary(lo));
        }

        #[test]
        fn phase_covariance(re in -5.0f64..5.0, im in -5.0f64..5.0, phi in -4.0f64..4.0, psi in -4.0f64..4.0) {
            let alpha = Complex64::new(re, im);
            let base = quadrature_mean(ProbeState::new(alpha), Quadrature::new(phi));
            let turned = ProbeState::new(alpha * Complex64::from_polar(1.0, psi));
            let moved = quadrature_mean(turned, Quadrature::new(phi - psi));
            prop_assert!((base - moved).abs() <= 1e-12);
        }
    }

    #[test]
    fn snr_doubling_small_angle() {
        let ratio = snr_y(230.0, 0.01, 2, 0.0) / snr_y(230.0, 0.01, 1, 0.0);
        assert!((ratio - 2.0).abs() / 2.0 < 0.005);
        assert_relative_eq!(ratio, 2.0 * 0.01f64.cos(), epsilon = 1e-9);
    }
}
