//! Analytic evolution of a coherent probe under the cross-Kerr interaction.
//!
//! The signal mode is diagonal in the Fock basis throughout, so it enters
//! only through its photon number and is never modified.

use num_complex::Complex64;

use crate::types::{FockSignal, KerrInteraction, ProbeState};

/// Probe after interacting with `n_a` signal photons:
/// `alpha * exp(-n_a kappa) * exp(sign * i n_a theta)`.
///
/// A damped coherent state is still coherent, so the result remains a pure
/// [`ProbeState`].
pub fn evolve_probe(signal: FockSignal, probe: ProbeState, kerr: &KerrInteraction) -> ProbeState {
    rotate(signal.photons(), probe, kerr)
}

/// Polarization-preserving topology: each polarization path applies the same
/// Kerr shift to the shared probe, so only `n_h + n_v` matters.
pub fn evolve_dual_path(n_h: u32, n_v: u32, probe: ProbeState, kerr: &KerrInteraction) -> ProbeState {
    let after_h = rotate(n_h, probe, kerr);
    rotate(n_v, after_h, kerr)
}

fn rotate(n: u32, probe: ProbeState, kerr: &KerrInteraction) -> ProbeState {
    if n == 0 {
        return probe;
    }
    let n = f64::from(n);
    let factor = Complex64::from_polar((-n * kerr.kappa()).exp(), kerr.phase_sign().value() * n * kerr.theta());
    ProbeState::new(probe.alpha * factor)
}

/// Probability that none of the `n_a` signal photons is absorbed, `exp(-n_a kappa)`.
pub fn survival_probability(n_a: u32, kerr: &KerrInteraction) -> f64 {
    (-f64::from(n_a) * kerr.kappa()).exp()
}

/// Residual absorption `1 - exp(-n_a kappa)`.
pub fn absorption(n_a: u32, kerr: &KerrInteraction) -> f64 {
    -(-f64::from(n_a) * kerr.kappa()).exp_m1()
}
