//! Autocorrelation g(t) = ∫ f(x) f(x+t) dx, pointwise and on grids, with a
//! direct quadrature route and an independent transform-space route.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quad::{breakpoints_in, integrate_with_breakpoints, Interval, QuadratureConfig};
use crate::spec::{FunctionSpec, Term};
use rustfft::{num_complex::Complex, FftPlanner};
use std::io::Write;

/// A correlation value; divergence (coinciding singularities) is tagged, not
/// raised, so callers decide what to do with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrValue {
    Finite { value: f64, error_estimate: f64 },
    Divergent,
}

impl CorrValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            CorrValue::Finite { value, .. } => Some(*value),
            CorrValue::Divergent => None,
        }
    }
}

const COLLISION_TOL: f64 = 1e-12;

/// ∫ f(x) h(x+t) dx.
pub fn cross_correlation(
    f: &FunctionSpec,
    h: &FunctionSpec,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<CorrValue> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "correlation shift" });
    }
    // singularities of f and of the shifted copy must not coincide
    let shifted: Vec<f64> = h.singular_points().iter().map(|p| p - t).collect();
    for &p in &f.singular_points() {
        if shifted.iter().any(|&q| (p - q).abs() <= COLLISION_TOL) {
            return Ok(CorrValue::Divergent);
        }
    }

    let mut value = 0.0;
    let mut err = 0.0;
    for ti in &f.terms {
        for tj in &h.terms {
            if let Some(v) = closed_form_pair(ti, tj, t) {
                value += v;
                continue;
            }
            let si = ti.support();
            let sj = tj.support();
            let overlap = match si.intersect(&Interval { lo: sj.lo - t, hi: sj.hi - t }) {
                Some(o) => o,
                None => continue,
            };
            let mut interior = ti.singular_points();
            interior.extend(tj.singular_points().iter().map(|p| p - t));
            let pts = breakpoints_in(overlap, &interior);
            let sub = cfg.with_substitution();
            let out = integrate_with_breakpoints(|x| ti.eval(x) * tj.eval(x + t), &pts, &sub)?;
            value += out.value;
            err += out.error_estimate;
        }
    }
    Ok(CorrValue::Finite { value, error_estimate: err })
}

/// Closed forms for gaussian-gaussian and indicator-indicator term pairs.
fn closed_form_pair(ti: &Term, tj: &Term, t: f64) -> Option<f64> {
    match (ti, tj) {
        (Term::GaussianPoly { a: a1, coeffs: c1 }, Term::GaussianPoly { a: a2, coeffs: c2 }) => {
            // complete the square: exp(-a1 x^2 - a2 (x+t)^2)
            //   = exp(-s (x + a2 t / s)^2) exp(-a1 a2 t^2 / s), s = a1 + a2
            let s = a1 + a2;
            let mu = -a2 * t / s;
            let p = Poly(c1.clone()).shift(mu);
            let q = Poly(c2.clone()).shift(mu + t);
            let integral = crate::poly::gaussian_integral(&p.mul(&q), s);
            Some((-a1 * a2 * t * t / s).exp() * integral)
        }
        (Term::Indicator { lo: l1, hi: h1, height: v1 }, Term::Indicator { lo: l2, hi: h2, height: v2 }) => {
            let lo = l1.max(l2 - t);
            let hi = h1.min(h2 - t);
            Some(v1 * v2 * (hi - lo).max(0.0))
        }
        _ => None,
    }
}

/// g(t) = ∫ f(x) f(x+t) dx.
pub fn autocorrelation(spec: &FunctionSpec, t: f64, cfg: &QuadratureConfig) -> Result<CorrValue> {
    cross_correlation(spec, spec, t, cfg)
}

/// (f∗f)(t) = ∫ f(t-x) f(x) dx, computed as a cross-correlation against the
/// reflected spec.
pub fn convolution(spec: &FunctionSpec, t: f64, cfg: &QuadratureConfig) -> Result<CorrValue> {
    cross_correlation(spec, &spec.reflect(), -t, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMethod {
    Direct,
    FastTransform,
}

impl std::str::FromStr for GridMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(GridMethod::Direct),
            "fast_transform" => Ok(GridMethod::FastTransform),
            other => Err(Error::Parse(format!("unknown grid method '{other}'"))),
        }
    }
}

/// Sampled g(t) with per-sample error estimates; divergent samples are marked.
#[derive(Debug, Clone)]
pub struct AutocorrelationCurve {
    pub t_values: Vec<f64>,
    pub g_values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub divergent: Vec<bool>,
    pub warnings: Vec<String>,
}

impl AutocorrelationCurve {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,g,err")?;
        for i in 0..self.t_values.len() {
            if self.divergent[i] {
                writeln!(w, "{:.16e},div,div", self.t_values[i])?;
            } else {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e}",
                    self.t_values[i], self.g_values[i], self.error_estimates[i]
                )?;
            }
        }
        Ok(())
    }
}

/// Evaluate g on a uniform grid over `t_domain`.
///
/// `Direct` calls the quadrature route per point. `FastTransform` samples f
/// on a padded power-of-two grid, forms |f̂|² in transform space, and reads
/// the correlation off the inverse transform; it is the independent second
/// route of the dual-route check.
pub fn autocorrelation_grid(
    spec: &FunctionSpec,
    t_domain: Interval,
    n_points: usize,
    method: GridMethod,
    cfg: &QuadratureConfig,
) -> Result<AutocorrelationCurve> {
    if n_points < 2 {
        return Err(Error::InvalidSpec("autocorrelation grid needs n_points >= 2".into()));
    }
    let step = t_domain.len() / (n_points - 1) as f64;
    let t_values: Vec<f64> = (0..n_points).map(|i| t_domain.lo + step * i as f64).collect();

    match method {
        GridMethod::Direct => {
            let mut g_values = Vec::with_capacity(n_points);
            let mut errs = Vec::with_capacity(n_points);
            let mut divergent = Vec::with_capacity(n_points);
            for &t in &t_values {
                match autocorrelation(spec, t, cfg)? {
                    CorrValue::Finite { value, error_estimate } => {
                        g_values.push(value);
                        errs.push(error_estimate);
                        divergent.push(false);
                    }
                    CorrValue::Divergent => {
                        g_values.push(f64::NAN);
                        errs.push(f64::NAN);
                        divergent.push(true);
                    }
                }
            }
            Ok(AutocorrelationCurve { t_values, g_values, error_estimates: errs, divergent, warnings: Vec::new() })
        }
        GridMethod::FastTransform => {
            let sup = spec
                .support()
                .ok_or_else(|| Error::InvalidSpec("empty spec has no support to sample".into()))?;
            let mut warnings = Vec::new();
            if !spec.singular_points().is_empty() {
                warnings.push(
                    "singular terms sampled with clipped values; refine with the direct method".into(),
                );
            }
            // pad the support 2x so circular correlation does not wrap
            let span = sup.len().max(t_domain.hi.abs().max(t_domain.lo.abs()));
            let lo = sup.lo - 0.5 * span;
            let hi = sup.hi + 0.5 * span;
            let target_dx = (step / 4.0).min((hi - lo) / 4096.0);
            let mut n = 4096usize;
            while (hi - lo) / n as f64 > target_dx && n < (1 << 21) {
                n *= 2;
            }
            let dx = (hi - lo) / n as f64;

            let mut buf: Vec<Complex<f64>> = (0..n)
                .map(|i| {
                    let v = spec.eval(lo + dx * i as f64);
                    Complex::new(if v.is_finite() { v } else { 0.0 }, 0.0)
                })
                .collect();
            let mut planner = FftPlanner::new();
            planner.plan_fft_forward(n).process(&mut buf);
            for v in buf.iter_mut() {
                *v = Complex::new(v.norm_sqr(), 0.0);
            }
            planner.plan_fft_inverse(n).process(&mut buf);
            // lag m: g(m dx) ~ dx * re(buf[m]) / n
            let lag = |m: i64| -> f64 {
                let idx = m.rem_euclid(n as i64) as usize;
                dx * buf[idx].re / n as f64
            };

            let g_values: Vec<f64> = t_values
                .iter()
                .map(|&t| {
                    let pos = t / dx;
                    let m = pos.floor() as i64;
                    let frac = pos - m as f64;
                    // Catmull-Rom cubic through the four nearest lags
                    let pm1 = lag(m - 1);
                    let p0 = lag(m);
                    let p1 = lag(m + 1);
                    let p2 = lag(m + 2);
                    let a = 0.5 * (-pm1 + 3.0 * p0 - 3.0 * p1 + p2);
                    let b = pm1 - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
                    let c = 0.5 * (p1 - pm1);
                    ((a * frac + b) * frac + c) * frac + p0
                })
                .collect();
            let err = dx * dx;
            Ok(AutocorrelationCurve {
                t_values,
                error_estimates: vec![err; g_values.len()],
                divergent: vec![false; g_values.len()],
                g_values,
                warnings,
            })
        }
    }
}
