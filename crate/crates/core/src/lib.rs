//! Model of a photon-number quantum non-demolition detector built on a
//! cross-Kerr interaction.
//!
//! A Fock state `|n_a>` in the signal mode rotates a coherent probe
//! `|alpha_c>` by `n_a * theta`; a homodyne measurement of the rotated probe
//! reads the photon number back out without absorbing it. The crate covers:
//!
//! - [`kerr`]: analytic probe evolution (single path and the polarization
//!   preserving dual path), including residual absorption.
//! - [`homodyne`]: quadrature statistics, SNR, error probabilities,
//!   multi-photon decision plans and a seeded Monte-Carlo shot simulator.
//! - [`eit`]: material constants, vacuum Rabi frequencies, the complex EIT
//!   level shift and the minimum-resource design solver.
//! - [`fock`]: a brute-force truncated Fock-space oracle that shares no
//!   formulas with the analytic path.
//!
//! Rates are expressed in units of the level-2 decay rate `gamma2` unless a
//! function says otherwise.

pub mod constants;
pub mod eit;
pub mod error;
pub mod fock;
pub mod homodyne;
pub mod kerr;
pub mod math;
pub mod types;

pub use error::{QndError, Result};
pub use types::{
    DesignWarning, DetectorDesign, DriveConfig, FockSignal, KerrInteraction, MaterialSystem, PhaseSign, ProbeState,
};

pub use num_complex::Complex64;
