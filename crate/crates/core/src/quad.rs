//! Adaptive Gauss-Kronrod quadrature with an optional endpoint-singularity
//! substitution mode for inverse-square-root blow-ups.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

/// Closed interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { what: "interval endpoint" });
        }
        if lo > hi {
            return Err(Error::InvalidSpec(format!("interval lo {lo} > hi {hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityMode {
    /// Integrate the panel as-is.
    Ignore,
    /// Map the panel through x = m + r sin(theta); this turns an endpoint
    /// |x - e|^{-1/2} blow-up into a bounded integrand.
    Substitution,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub singularity_mode: SingularityMode,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 10_000,
            singularity_mode: SingularityMode::Ignore,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidSpec("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidSpec("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    pub fn with_substitution(mut self) -> Self {
        self.singularity_mode = SingularityMode::Substitution;
        self
    }

    pub fn with_tols(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Value together with the error estimate the adaptive scheme reached.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub error_estimate: f64,
}

// 15-point Kronrod nodes on [0,1] of |x|, embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One GK15 panel. Returns Err on a non-finite integrand value.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NanIntegrand { x })
        }
    };

    let fc = eval(center)?;
    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = eval(center - x)?;
        let f2 = eval(center + x)?;
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    Ok((value, err))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    let (v, e) = gk15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, err: e });
    let mut total_value = v;
    let mut total_err = e;
    let mut subdivisions = 0usize;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_err <= tol {
            return Ok(QuadOutcome { value: total_value, error_estimate: total_err });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::BudgetExhausted { value: total_value, error_estimate: total_err });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => return Ok(QuadOutcome { value: total_value, error_estimate: total_err }),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further at f64 resolution; accept its estimate.
            if heap.is_empty() {
                return Ok(QuadOutcome { value: total_value, error_estimate: total_err });
            }
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid)?;
        let (v2, e2) = gk15(f, mid, worst.b)?;
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        subdivisions += 1;
    }
}

/// Integrate `f` over `domain`. In substitution mode the panel is mapped
/// through x = m + r sin(theta) first, which removes integrable
/// inverse-square-root endpoint singularities.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Interval, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    cfg.validate()?;
    if domain.is_empty() {
        return Ok(QuadOutcome { value: 0.0, error_estimate: 0.0 });
    }
    match cfg.singularity_mode {
        SingularityMode::Ignore => adaptive(&f, domain.lo, domain.hi, cfg),
        SingularityMode::Substitution => {
            let m = domain.mid();
            let r = 0.5 * domain.len();
            let g = |theta: f64| {
                let (s, c) = theta.sin_cos();
                f(m + r * s) * r * c
            };
            adaptive(&g, -FRAC_PI_2, FRAC_PI_2, cfg)
        }
    }
}

/// Integrate over a partition given by sorted breakpoints, substitution per
/// sub-panel. Used when singular points must sit on panel endpoints.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome> {
    let mut value = 0.0;
    let mut err = 0.0;
    for w in breakpoints.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let out = integrate(&f, Interval { lo: w[0], hi: w[1] }, cfg)?;
        value += out.value;
        err += out.error_estimate;
    }
    Ok(QuadOutcome { value, error_estimate: err })
}

/// Sorted, deduplicated breakpoint list clipped to `domain`, always including
/// the domain endpoints.
pub fn breakpoints_in(domain: Interval, interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![domain.lo];
    for &p in interior {
        if p > domain.lo && p < domain.hi {
            pts.push(p);
        }
    }
    pts.push(domain.hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + a.abs()));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_is_exact() {
        let out = integrate(|_| 1.0, Interval { lo: 0.0, hi: 1.0 }, &QuadratureConfig::default()).unwrap();
        assert!((out.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn arcsine_kernel_with_substitution() {
        let cfg = QuadratureConfig::default().with_substitution();
        let out = integrate(|x: f64| 1.0 / (1.0 - x * x).sqrt(), Interval { lo: -1.0, hi: 1.0 }, &cfg).unwrap();
        assert!((out.value - PI).abs() < 1e-10, "got {}", out.value);
    }

    #[test]
    fn sinc_matches_si_of_pi() {
        let out = integrate(crate::special::sinc, Interval { lo: 0.0, hi: PI }, &QuadratureConfig::default()).unwrap();
        let si_pi = crate::special::si(PI).unwrap();
        assert!((out.value - si_pi).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let cfg = QuadratureConfig { max_subdivisions: 2, abs_tol: 1e-15, rel_tol: 1e-15, singularity_mode: SingularityMode::Ignore };
        let res = integrate(|x: f64| (50.0 * x).sin() / (0.01 + x * x), Interval { lo: -4.0, hi: 7.0 }, &cfg);
        match res {
            Err(Error::BudgetExhausted { value, error_estimate }) => {
                assert!(value.is_finite() && error_estimate > 0.0);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn nan_integrand_aborts() {
        let res = integrate(|x: f64| (x - 0.311).ln(), Interval { lo: 0.0, hi: 1.0 }, &QuadratureConfig::default());
        assert!(matches!(res, Err(Error::NanIntegrand { .. })));
    }
}
