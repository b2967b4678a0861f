//! Physical constants (CODATA 2018, SI) and the NV-diamond material numbers.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Electron rest mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

pub mod nv_diamond {
    use super::PI;

    /// Zero-phonon line wavelength (m).
    pub const WAVELENGTH: f64 = 637e-9;
    pub const OSCILLATOR_STRENGTH: f64 = 0.12;
    pub const REFRACTIVE_INDEX: f64 = 2.4;
    /// Level-2 lifetime, 2 x 25 ns.
    pub const GAMMA2_LIFETIME: f64 = 50e-9;
    pub const GAMMA2: f64 = 1.0 / GAMMA2_LIFETIME;
    /// gamma4 = gamma2 for the optical transitions.
    pub const GAMMA4: f64 = GAMMA2;
    /// Pulse bandwidth, 2 pi x 5 MHz (rad/s).
    pub const BANDWIDTH: f64 = 2.0 * PI * 5e6;
    /// Spin-dephasing-free regime holds below this many centers.
    pub const MAX_ATOMS_WITHOUT_DEPHASING: f64 = 1e4;
}

/// Conventional SNR for a 1% error probability.
pub const ANCHOR_SNR: f64 = 4.6;
pub const ANCHOR_P_ERROR: f64 = 0.01;

/// Default pump/probe photon-number ratio `<n_b>/<n_c>`.
pub const DEFAULT_PUMP_PROBE_RATIO: f64 = 10.0;
