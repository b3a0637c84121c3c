//! Symbolic candidate functions: sums of primitive terms.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quad::Interval;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One primitive term of a candidate function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Term {
    /// e^{-a x^2} (coeffs[0] + coeffs[1] x + ...)
    GaussianPoly { a: f64, coeffs: Vec<f64> },
    /// weight * chi / sqrt(1 - ((x-center)/w)^2), supported on
    /// [center-w, center+w] intersected with the optional clip window.
    Arcsine {
        center: f64,
        half_width: f64,
        weight: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        clip_lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        clip_hi: Option<f64>,
    },
    Indicator { lo: f64, hi: f64, height: f64 },
    /// Uniformly spaced samples on [lo, hi], linearly interpolated.
    Grid { lo: f64, hi: f64, samples: Vec<f64> },
}

impl Term {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, what: &'static str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFinite { what })
            }
        };
        match self {
            Term::GaussianPoly { a, coeffs } => {
                finite(*a, "gaussian decay rate")?;
                if *a <= 0.0 {
                    return Err(Error::InvalidSpec("gaussian_poly decay rate must be positive".into()));
                }
                if coeffs.is_empty() {
                    return Err(Error::InvalidSpec("gaussian_poly needs at least one coefficient".into()));
                }
                for &c in coeffs {
                    finite(c, "gaussian coefficient")?;
                }
            }
            Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => {
                finite(*center, "arcsine center")?;
                finite(*half_width, "arcsine half_width")?;
                finite(*weight, "arcsine weight")?;
                if *half_width <= 0.0 {
                    return Err(Error::InvalidSpec("arcsine half_width must be positive".into()));
                }
                for c in [clip_lo, clip_hi].into_iter().flatten() {
                    finite(*c, "arcsine clip bound")?;
                }
                let lo = clip_lo.unwrap_or(center - half_width).max(center - half_width);
                let hi = clip_hi.unwrap_or(center + half_width).min(center + half_width);
                if hi <= lo {
                    return Err(Error::InvalidSpec("arcsine clip window is empty".into()));
                }
            }
            Term::Indicator { lo, hi, height } => {
                finite(*lo, "indicator lo")?;
                finite(*hi, "indicator hi")?;
                finite(*height, "indicator height")?;
                if hi <= lo {
                    return Err(Error::InvalidSpec("indicator needs hi > lo".into()));
                }
            }
            Term::Grid { lo, hi, samples } => {
                finite(*lo, "grid lo")?;
                finite(*hi, "grid hi")?;
                if hi <= lo {
                    return Err(Error::InvalidSpec("grid needs hi > lo".into()));
                }
                if samples.len() < 2 {
                    return Err(Error::InvalidSpec("grid needs at least two samples".into()));
                }
                for &s in samples {
                    finite(s, "grid sample")?;
                }
            }
        }
        Ok(())
    }

    /// Pointwise value; at an arcsine singular endpoint this returns a signed
    /// infinity (singular endpoints are flagged upstream, not evaluated).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Term::GaussianPoly { a, coeffs } => (-a * x * x).exp() * Poly(coeffs.clone()).eval(x),
            Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => {
                let u = (x - center) / half_width;
                let clipped = clip_lo.is_some_and(|c| x < c) || clip_hi.is_some_and(|c| x > c);
                if u.abs() > 1.0 || clipped {
                    0.0
                } else {
                    weight / (1.0 - u * u).sqrt()
                }
            }
            Term::Indicator { lo, hi, height } => {
                if x >= *lo && x <= *hi {
                    *height
                } else {
                    0.0
                }
            }
            Term::Grid { lo, hi, samples } => {
                if x < *lo || x > *hi {
                    return 0.0;
                }
                let n = samples.len();
                let step = (hi - lo) / (n - 1) as f64;
                let pos = (x - lo) / step;
                let i = (pos.floor() as usize).min(n - 2);
                let frac = pos - i as f64;
                samples[i] * (1.0 - frac) + samples[i + 1] * frac
            }
        }
    }

    /// Finite interval outside which the term is zero or negligible
    /// (Gaussian tails truncated below ~1e-18 of the coefficient scale).
    pub fn support(&self) -> Interval {
        match self {
            Term::GaussianPoly { a, coeffs } => {
                let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1e-300);
                let mut r = (46.0 / a).sqrt().max(1.0);
                // widen while the polynomial envelope still matters
                for _ in 0..64 {
                    let envelope: f64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c.abs() * r.powi(k as i32))
                        .sum();
                    if (-a * r * r).exp() * envelope <= 1e-18 * scale {
                        break;
                    }
                    r *= 1.25;
                }
                Interval { lo: -r, hi: r }
            }
            Term::Arcsine { center, half_width, clip_lo, clip_hi, .. } => Interval {
                lo: clip_lo.unwrap_or(f64::NEG_INFINITY).max(center - half_width),
                hi: clip_hi.unwrap_or(f64::INFINITY).min(center + half_width),
            },
            Term::Indicator { lo, hi, .. } => Interval { lo: *lo, hi: *hi },
            Term::Grid { lo, hi, .. } => Interval { lo: *lo, hi: *hi },
        }
    }

    /// Points where the term blows up (arcsine endpoints).
    pub fn singular_points(&self) -> Vec<f64> {
        match self {
            Term::Arcsine { center, half_width, weight, .. } if *weight != 0.0 => {
                let sup = self.support();
                [center - half_width, center + half_width]
                    .into_iter()
                    .filter(|p| sup.contains(*p))
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn reflect(&self) -> Term {
        match self {
            Term::GaussianPoly { a, coeffs } => {
                let mut c = coeffs.clone();
                for (k, v) in c.iter_mut().enumerate() {
                    if k % 2 == 1 {
                        *v = -*v;
                    }
                }
                Term::GaussianPoly { a: *a, coeffs: c }
            }
            Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => Term::Arcsine {
                center: -center,
                half_width: *half_width,
                weight: *weight,
                clip_lo: clip_hi.map(|c| -c),
                clip_hi: clip_lo.map(|c| -c),
            },
            Term::Indicator { lo, hi, height } => Term::Indicator { lo: -hi, hi: -lo, height: *height },
            Term::Grid { lo, hi, samples } => {
                let mut s = samples.clone();
                s.reverse();
                Term::Grid { lo: -hi, hi: -lo, samples: s }
            }
        }
    }
}

/// A candidate f as a sum of primitive terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub terms: Vec<Term>,
}

impl FunctionSpec {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let spec = Self { terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            t.validate()?;
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Hull of term supports; None for the empty spec.
    pub fn support(&self) -> Option<Interval> {
        self.terms
            .iter()
            .map(|t| t.support())
            .reduce(|a, b| a.hull(&b))
    }

    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.terms.iter().flat_map(|t| t.singular_points()).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
        pts
    }

    pub fn reflect(&self) -> FunctionSpec {
        FunctionSpec { terms: self.terms.iter().map(|t| t.reflect()).collect() }
    }

    /// f(x) -> f(lambda x), lambda > 0.
    pub fn dilate(&self, lambda: f64) -> FunctionSpec {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                Term::GaussianPoly { a, coeffs } => Term::GaussianPoly {
                    a: a * lambda * lambda,
                    coeffs: Poly(coeffs.clone()).dilate(lambda).0,
                },
                Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => Term::Arcsine {
                    center: center / lambda,
                    half_width: half_width / lambda,
                    weight: *weight,
                    clip_lo: clip_lo.map(|c| c / lambda),
                    clip_hi: clip_hi.map(|c| c / lambda),
                },
                Term::Indicator { lo, hi, height } => {
                    Term::Indicator { lo: lo / lambda, hi: hi / lambda, height: *height }
                }
                Term::Grid { lo, hi, samples } => {
                    Term::Grid { lo: lo / lambda, hi: hi / lambda, samples: samples.clone() }
                }
            })
            .collect();
        FunctionSpec { terms }
    }

    /// f(x) -> f(x - s). A shifted Gaussian is not representable termwise, so
    /// gaussian_poly terms are rejected here.
    pub fn translate(&self, s: f64) -> Result<FunctionSpec> {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                Term::GaussianPoly { .. } => Err(Error::InvalidSpec(
                    "translation of gaussian_poly terms is not representable".into(),
                )),
                Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => Ok(Term::Arcsine {
                    center: center + s,
                    half_width: *half_width,
                    weight: *weight,
                    clip_lo: clip_lo.map(|c| c + s),
                    clip_hi: clip_hi.map(|c| c + s),
                }),
                Term::Indicator { lo, hi, height } => {
                    Ok(Term::Indicator { lo: lo + s, hi: hi + s, height: *height })
                }
                Term::Grid { lo, hi, samples } => {
                    Ok(Term::Grid { lo: lo + s, hi: hi + s, samples: samples.clone() })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FunctionSpec { terms })
    }

    pub fn scale(&self, k: f64) -> FunctionSpec {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                Term::GaussianPoly { a, coeffs } => Term::GaussianPoly {
                    a: *a,
                    coeffs: coeffs.iter().map(|c| c * k).collect(),
                },
                Term::Arcsine { center, half_width, weight, clip_lo, clip_hi } => Term::Arcsine {
                    center: *center,
                    half_width: *half_width,
                    weight: weight * k,
                    clip_lo: *clip_lo,
                    clip_hi: *clip_hi,
                },
                Term::Indicator { lo, hi, height } => {
                    Term::Indicator { lo: *lo, hi: *hi, height: height * k }
                }
                Term::Grid { lo, hi, samples } => Term::Grid {
                    lo: *lo,
                    hi: *hi,
                    samples: samples.iter().map(|s| s * k).collect(),
                },
            })
            .collect();
        FunctionSpec { terms }
    }

    /// True if every sampled value on the support is >= -tol.
    pub fn nonnegative_sampled(&self, n: usize, tol: f64) -> bool {
        let sup = match self.support() {
            Some(s) => s,
            None => return true,
        };
        let h = sup.len() / (n + 1) as f64;
        for i in 1..=n {
            let x = sup.lo + h * i as f64;
            let v = self.eval(x);
            if v.is_finite() && v < -tol {
                return false;
            }
        }
        true
    }

    /// True if every term's support lies inside `window` (with slack `tol`).
    pub fn supported_within(&self, window: Interval, tol: f64) -> bool {
        self.terms.iter().all(|t| {
            let s = t.support();
            match t {
                // Gaussians have unbounded true support.
                Term::GaussianPoly { .. } => false,
                _ => s.lo >= window.lo - tol && s.hi <= window.hi + tol,
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FunctionSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("function spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Content hash of the canonical (compact) serialization.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(self).expect("spec serialization cannot fail");
        let mut h = Sha256::new();
        h.update(compact.as_bytes());
        hex::encode(h.finalize())
    }
}

mod hex {
    pub fn encode(bytes: impl AsRef<[u8]>) -> String {
        bytes.as_ref().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Convenience constructors used across tests and the optimizer.
pub fn gaussian(a: f64, coeffs: Vec<f64>) -> FunctionSpec {
    FunctionSpec { terms: vec![Term::GaussianPoly { a, coeffs }] }
}

pub fn arcsine(center: f64, half_width: f64, weight: f64) -> FunctionSpec {
    FunctionSpec {
        terms: vec![Term::Arcsine { center, half_width, weight, clip_lo: None, clip_hi: None }],
    }
}

/// Arcsine density restricted to [clip_lo, clip_hi]; clipping strictly inside
/// the support removes the endpoint singularities.
pub fn arcsine_clipped(
    center: f64,
    half_width: f64,
    weight: f64,
    clip_lo: f64,
    clip_hi: f64,
) -> FunctionSpec {
    FunctionSpec {
        terms: vec![Term::Arcsine {
            center,
            half_width,
            weight,
            clip_lo: Some(clip_lo),
            clip_hi: Some(clip_hi),
        }],
    }
}

pub fn indicator(lo: f64, hi: f64, height: f64) -> FunctionSpec {
    FunctionSpec { terms: vec![Term::Indicator { lo, hi, height }] }
}
