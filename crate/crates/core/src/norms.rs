//! L1 and L2 norms of function specs, with per-term closed forms where they
//! exist and singularity-aware quadrature otherwise.

use crate::error::{Error, Result};
use crate::poly::{gaussian_integral, sign_changes, Poly};
use crate::quad::{breakpoints_in, integrate_with_breakpoints, QuadOutcome, QuadratureConfig};
use crate::spec::{FunctionSpec, Term};

/// ∫ f, signed.
pub fn signed_integral(spec: &FunctionSpec, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    let mut value = 0.0;
    let mut err = 0.0;
    for t in &spec.terms {
        match t {
            Term::GaussianPoly { a, coeffs } => {
                value += gaussian_integral(&Poly(coeffs.clone()), *a);
            }
            Term::Arcsine { center, half_width, weight, .. } => {
                // ∫ w/sqrt(1-u²) dx = w·hw·(asin(u_hi) - asin(u_lo))
                let sup = t.support();
                let u_lo = ((sup.lo - center) / half_width).clamp(-1.0, 1.0);
                let u_hi = ((sup.hi - center) / half_width).clamp(-1.0, 1.0);
                value += weight * half_width * (u_hi.asin() - u_lo.asin());
            }
            Term::Indicator { lo, hi, height } => {
                value += height * (hi - lo);
            }
            Term::Grid { .. } => {
                let sup = t.support();
                let sub = cfg.with_substitution();
                let out = integrate_with_breakpoints(|x| t.eval(x), &[sup.lo, sup.hi], &sub)?;
                value += out.value;
                err += out.error_estimate;
            }
        }
    }
    Ok(QuadOutcome { value, error_estimate: err })
}

/// ∫ |f|. Sign changes of mixed-sign specs are located by bisection and used
/// as panel breakpoints before integrating.
pub fn l1_norm(spec: &FunctionSpec, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    spec.validate()?;
    let sup = match spec.support() {
        Some(s) => s,
        None => return Ok(QuadOutcome { value: 0.0, error_estimate: 0.0 }),
    };
    let mut interior = spec.singular_points();
    interior.extend(sign_changes(|x| spec.eval(x), sup.lo, sup.hi, 4096));
    // term boundaries are kinks of |f|
    for t in &spec.terms {
        let ts = t.support();
        interior.push(ts.lo);
        interior.push(ts.hi);
    }
    let pts = breakpoints_in(sup, &interior);
    let sub = cfg.with_substitution();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in pts.windows(2) {
        let piece = integrate_with_breakpoints(|x| spec.eval(x), &[w[0], w[1]], &sub)?;
        value += piece.value.abs();
        err += piece.error_estimate;
    }
    Ok(QuadOutcome { value, error_estimate: err })
}

/// (∫ f²)^{1/2}. Rejected when the square is non-integrable, i.e. whenever an
/// arcsine singularity survives in f² (a single arcsine term already collides
/// with itself at its endpoints).
pub fn l2_norm(spec: &FunctionSpec, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    spec.validate()?;
    if let Some(&p) = spec
        .terms
        .iter()
        .flat_map(|t| t.singular_points())
        .collect::<Vec<_>>()
        .first()
    {
        return Err(Error::SingularityCollision { point: p });
    }
    let sup = match spec.support() {
        Some(s) => s,
        None => return Ok(QuadOutcome { value: 0.0, error_estimate: 0.0 }),
    };

    // all-gaussian specs have an exact closed form via moments
    if spec.terms.iter().all(|t| matches!(t, Term::GaussianPoly { .. })) {
        let mut sq = 0.0;
        for ti in &spec.terms {
            for tj in &spec.terms {
                if let (Term::GaussianPoly { a: ai, coeffs: ci }, Term::GaussianPoly { a: aj, coeffs: cj }) =
                    (ti, tj)
                {
                    sq += gaussian_integral(&Poly(ci.clone()).mul(&Poly(cj.clone())), ai + aj);
                }
            }
        }
        return Ok(QuadOutcome { value: sq.max(0.0).sqrt(), error_estimate: 0.0 });
    }

    let mut interior: Vec<f64> = Vec::new();
    for t in &spec.terms {
        let ts = t.support();
        interior.push(ts.lo);
        interior.push(ts.hi);
    }
    let pts = breakpoints_in(sup, &interior);
    let out = integrate_with_breakpoints(|x| spec.eval(x).powi(2), &pts, cfg)?;
    Ok(QuadOutcome { value: out.value.max(0.0).sqrt(), error_estimate: out.error_estimate })
}
