//! Fourier transform in the unitary convention f̂(ξ) = ∫ e^{-2πi x ξ} f(x) dx.

use crate::error::{Error, Result};
use crate::quad::{breakpoints_in, integrate_with_breakpoints, QuadratureConfig};
use crate::spec::FunctionSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

pub fn fourier_transform(
    spec: &FunctionSpec,
    xi: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite { what: "frequency" });
    }
    let sup = match spec.support() {
        Some(s) => s,
        None => return Ok(Complex64::new(0.0, 0.0)),
    };
    let mut interior = spec.singular_points();
    for t in &spec.terms {
        let ts = t.support();
        interior.push(ts.lo);
        interior.push(ts.hi);
    }
    // keep oscillations resolved: break panels at half-periods for large xi
    let period = if xi.abs() > 1.0 { 0.5 / xi.abs() } else { f64::INFINITY };
    if period.is_finite() {
        let mut x = (sup.lo / period).ceil() * period;
        while x < sup.hi {
            interior.push(x);
            x += period;
        }
    }
    let pts = breakpoints_in(sup, &interior);
    let sub = cfg.with_substitution();
    let re = integrate_with_breakpoints(|x| spec.eval(x) * (2.0 * PI * x * xi).cos(), &pts, &sub)?;
    let im = integrate_with_breakpoints(|x| -spec.eval(x) * (2.0 * PI * x * xi).sin(), &pts, &sub)?;
    Ok(Complex64::new(re.value, im.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{l1_norm, signed_integral};
    use crate::spec::{arcsine, gaussian, indicator};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn centered_indicator_is_sinc() {
        let spec = indicator(-0.5, 0.5, 1.0);
        let xi = 0.3;
        let v = fourier_transform(&spec, xi, &cfg()).unwrap();
        let expect = (PI * xi).sin() / (PI * xi);
        assert!((v.re - expect).abs() < 1e-10);
        assert!(v.im.abs() < 1e-10);
    }

    #[test]
    fn zero_frequency_is_the_integral() {
        let spec = gaussian(2.0, vec![1.0, 0.3, 0.1]);
        let v = fourier_transform(&spec, 0.0, &cfg()).unwrap();
        let integral = signed_integral(&spec, &cfg()).unwrap().value;
        assert!((v.re - integral).abs() < 1e-9);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn magnitude_bounded_by_l1() {
        let spec = arcsine(0.1, 0.4, 0.8);
        let l1 = l1_norm(&spec, &cfg()).unwrap().value;
        for &xi in &[0.0, 0.7, 1.9, 5.0] {
            let v = fourier_transform(&spec, xi, &cfg()).unwrap();
            assert!(v.norm() <= l1 + 1e-8, "xi={xi}");
        }
    }
}
