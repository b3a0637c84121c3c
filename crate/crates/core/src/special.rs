//! Sine integral and the sinc infimum.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Si(x) = ∫₀ˣ sin(y)/y dy.
///
/// Power series for |x| < 2, complex continued fraction for the auxiliary
/// function e^{ix}(Ci + i(Si - π/2)) otherwise; both routes are accurate to
/// well under 1e-12 absolute.
pub fn si(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "si argument" });
    }
    let t = x.abs();
    let s = if t < 2.0 { si_series(t) } else { si_cf(t) };
    Ok(if x < 0.0 { -s } else { s })
}

fn si_series(t: f64) -> f64 {
    // sum (-1)^k t^(2k+1) / ((2k+1) (2k+1)!)
    let mut term = t;
    let mut sum = t;
    let mut k = 1u32;
    loop {
        let n = 2 * k + 1;
        term *= -t * t / ((n - 1) as f64 * n as f64);
        let contrib = term / n as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * (1.0 + sum.abs()) || k > 60 {
            return sum;
        }
        k += 1;
    }
}

fn si_cf(t: f64) -> f64 {
    // Lentz continued fraction for the complex auxiliary function; the
    // imaginary part of e^{-it} * h is Si(t) - pi/2.
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-290;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..200 {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += Complex64::new(2.0, 0.0);
        d = (a * d + b).inv();
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - Complex64::new(1.0, 0.0)).norm() < EPS {
            break;
        }
    }
    h *= Complex64::new(t.cos(), -t.sin());
    FRAC_PI_2 + h.im
}

/// Global minimizer of sin(x)/x on (0, ∞) and the value there.
#[derive(Debug, Clone, Copy)]
pub struct SincInf {
    pub argmin: f64,
    pub value: f64,
}

/// Solves x cos x = sin x on (π, 2π) by bisection to 1e-12 in x.
pub fn sinc_inf() -> SincInf {
    static CACHE: OnceLock<SincInf> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let f = |x: f64| x * x.cos() - x.sin();
        let mut lo = PI;
        let mut hi = 2.0 * PI;
        // f(pi) = -pi < 0, f(2pi) = 2pi > 0
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let argmin = 0.5 * (lo + hi);
        SincInf { argmin, value: argmin.sin() / argmin }
    })
}
