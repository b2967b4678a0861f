//! Scalar and complex numerics shared by the model.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QndError, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Below this the erf power series is used, above it the Laplace continued fraction.
const SERIES_CUTOFF: f64 = 2.5;

/// Complex quotient `num / den`, refusing an exactly zero denominator.
pub fn complex_div(num: Complex64, den: Complex64) -> Result<Complex64> {
    if den.re == 0.0 && den.im == 0.0 {
        return Err(QndError::ZeroDenominator);
    }
    // Smith's algorithm keeps the intermediate products in range.
    let (a, b, c, d) = (num.re, num.im, den.re, den.im);
    let q = if c.abs() >= d.abs() {
        let r = d / c;
        let s = c + d * r;
        Complex64::new((a + b * r) / s, (b - a * r) / s)
    } else {
        let r = c / d;
        let s = c * r + d;
        Complex64::new((a * r + b) / s, (b * r - a) / s)
    };
    Ok(q)
}

/// Complementary error function `erfc(x) = 1 - erf(x)`.
///
/// Absolute error stays well below 1e-12 on `|x| <= 10`; the upper tail is also
/// accurate in the relative sense because it never forms `1 - erf`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// Error function, `erf(-x) = -erf(x)`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x < SERIES_CUTOFF {
        erf_series(x)
    } else {
        1.0 - erfc_continued_fraction(x)
    }
}

// erf(x) = 2x/sqrt(pi) e^{-x^2} sum_n (2x^2)^n / (1*3*...*(2n+1)); all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() * sum
}

fn erfc_continued_fraction(x: f64) -> f64 {
    (-x * x).exp() / (PI.sqrt() * laplace_fraction(x))
}

// erfc(x) = e^{-x^2}/sqrt(pi) / F(x), F(x) = x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
// Evaluated with the modified Lentz method.
fn laplace_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..10_000 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// `ln erfc(x)` and `d/dx ln erfc(x)`, finite far into the upper tail.
fn ln_erfc_with_slope(x: f64) -> (f64, f64) {
    if x < SERIES_CUTOFF {
        let e = erfc(x);
        (e.ln(), -FRAC_2_SQRT_PI * (-x * x).exp() / e)
    } else {
        let f = laplace_fraction(x);
        (-x * x - (PI.sqrt() * f).ln(), -2.0 * f)
    }
}

/// Inverse of [`erfc`] on `(0, 2)`.
pub fn erfc_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 2.0) {
        return Err(QndError::domain(format!("erfc_inv needs 0 < y < 2, got {y}")));
    }
    if y > 1.0 {
        return erfc_inv(2.0 - y).map(|x| -x);
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    // Newton on ln erfc(x) - ln y. ln erfc is concave, so after the first step
    // the iterates approach the root monotonically from the right.
    let target = y.ln();
    let mut x = if y < 0.1 {
        // erfc(x) ~ e^{-x^2} / (x sqrt(pi))
        let t = -target;
        (t - 0.5 * (PI * t).ln()).max(0.0).sqrt()
    } else {
        0.0
    };
    for _ in 0..200 {
        let (ln_e, slope) = ln_erfc_with_slope(x);
        let step = (ln_e - target) / slope;
        x -= step;
        if step.abs() <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}
