//! Truncated Fock-space oracle for the probe mode.
//!
//! States are explicit coefficient vectors and the quadrature is an explicit
//! tridiagonal matrix, so these results come from linear algebra on the state
//! rather than from the closed forms in [`crate::kerr`] and
//! [`crate::homodyne`]. Only shared value types are used from the rest of the
//! crate.

use num_complex::Complex64;

use crate::error::{QndError, Result};
use crate::types::PhaseSign;

/// Largest probe amplitude the oracle accepts through the checked paths.
pub const MAX_ALPHA: f64 = 4.0;

/// Fock coefficients `c_n`, `n = 0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMode {
    amplitudes: Vec<Complex64>,
}

impl TruncatedMode {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QndError::invalid("a truncated mode needs dim >= 1"));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean distance between coefficient vectors (missing entries are zero).
    pub fn distance(&self, other: &TruncatedMode) -> f64 {
        let n = self.dim().max(other.dim());
        let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
        (0..n).map(|i| (get(&self.amplitudes, i) - get(&other.amplitudes, i)).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum_n n |c_n|^2 / sum_n |c_n|^2`.
    pub fn mean_photon_number(&self) -> f64 {
        let weighted: f64 = self.amplitudes.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
        weighted / self.norm_sqr()
    }
}

/// Smallest dimension accepted for amplitude `alpha`: `|a|^2 + 8|a| + 20`.
pub fn required_dim(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Coherent state `e^{-|a|^2/2} a^n / sqrt(n!)` truncated to `dim` levels.
pub fn coherent_vector(alpha: Complex64, dim: usize) -> Result<TruncatedMode> {
    let required = required_dim(alpha);
    if dim < required {
        return Err(QndError::Truncation { dim, required, alpha_abs: alpha.norm() });
    }
    coherent_vector_truncated(alpha, dim)
}

/// Like [`coherent_vector`] but without the truncation rule, for studying
/// under-resolved bases.
pub fn coherent_vector_truncated(alpha: Complex64, dim: usize) -> Result<TruncatedMode> {
    if dim == 0 {
        return Err(QndError::invalid("a truncated mode needs dim >= 1"));
    }
    let r = alpha.norm();
    if r == 0.0 {
        let mut v = vec![Complex64::default(); dim];
        v[0] = Complex64::new(1.0, 0.0);
        return TruncatedMode::from_amplitudes(v);
    }
    let ln_r = r.ln();
    let arg = alpha.arg();
    let mut ln_fact = 0.0;
    let amplitudes = (0..dim)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let ln_mag = -0.5 * r * r + n as f64 * ln_r - 0.5 * ln_fact;
            Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
        })
        .collect();
    TruncatedMode::from_amplitudes(amplitudes)
}

/// Applies the diagonal Kerr unitary for `n_a` signal photons:
/// `c_n -> c_n exp(sign i n_a n theta)`.
pub fn kerr_unitary_apply(mode: &TruncatedMode, n_a: u32, theta: f64, sign: PhaseSign) -> TruncatedMode {
    let per_level = sign.value() * f64::from(n_a) * theta;
    let amplitudes =
        mode.amplitudes.iter().enumerate().map(|(n, c)| c * Complex64::from_polar(1.0, per_level * n as f64)).collect();
    TruncatedMode { amplitudes }
}

/// Coherent vector of the damped, rotated amplitude
/// `alpha e^{-n_a kappa} e^{sign i n_a theta}`.
pub fn damped_amplitude_apply(
    alpha: Complex64,
    n_a: u32,
    theta: f64,
    kappa: f64,
    sign: PhaseSign,
    dim: usize,
) -> Result<TruncatedMode> {
    let n = f64::from(n_a);
    let (re, im) = (alpha.re, alpha.im);
    let scale = (-n * kappa).exp();
    let (s, c) = (sign.value() * n * theta).sin_cos();
    let out = Complex64::new(scale * (re * c - im * s), scale * (re * s + im * c));
    coherent_vector(out, dim)
}

/// `x(phi) = c e^{i phi} + c^dag e^{-i phi}` as a Hermitian tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct QuadratureOperator {
    /// `X[m][m+1] = sqrt(m+1) e^{i phi}`; the subdiagonal is its conjugate.
    upper: Vec<Complex64>,
}

impl QuadratureOperator {
    pub fn new(dim: usize, phi: f64) -> Self {
        let phase = Complex64::from_polar(1.0, phi);
        let upper = (1..dim).map(|m| phase * (m as f64).sqrt()).collect();
        Self { upper }
    }

    pub fn dim(&self) -> usize {
        self.upper.len() + 1
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "operator/state dimension mismatch");
        let mut out = vec![Complex64::default(); v.len()];
        for (m, &u) in self.upper.iter().enumerate() {
            out[m] += u * v[m + 1];
            out[m + 1] += u.conj() * v[m];
        }
        out
    }
}

/// Mean and variance of `x(phi)` in the (renormalized) truncated state.
pub fn quadrature_moments(mode: &TruncatedMode, phi: f64) -> (f64, f64) {
    let op = QuadratureOperator::new(mode.dim(), phi);
    let xv = op.apply(&mode.amplitudes);
    let norm = mode.norm_sqr();
    let mean = mode.amplitudes.iter().zip(&xv).map(|(c, x)| (c.conj() * x).re).sum::<f64>() / norm;
    let second: f64 = xv.iter().map(|x| x.norm_sqr()).sum::<f64>() / norm;
    (mean, second - mean * mean)
}
