//! Derivative-free local search over parametric function families.

use crate::error::{Error, Result};
use crate::functionals::{evaluate, FunctionalId};
use crate::quad::QuadratureConfig;
use crate::spec::{FunctionSpec, Term};
use serde::Serialize;
use std::io::Write;

/// A parametric family together with its dimension and box bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    /// theta = (a) for degree 0, else (a, c_0, ..., c_k) building the even
    /// polynomial c_0 + c_1 x^2 + ... + c_k x^{2k} under e^{-a x^2}.
    GaussianPoly(usize),
    /// theta = (weight, center, half_width, clip_fraction) per term; a clip
    /// fraction below 1 keeps only the central part of the arcsine density.
    ArcsineMixture(usize),
    /// theta = (lo, width, height) per term.
    IndicatorMixture(usize),
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyId::GaussianPoly(k) => write!(f, "gaussian_poly_{k}"),
            FamilyId::ArcsineMixture(m) => write!(f, "arcsine_mixture_{m}"),
            FamilyId::IndicatorMixture(m) => write!(f, "indicator_mixture_{m}"),
        }
    }
}

impl std::str::FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse_suffix = |rest: &str| -> Result<usize> {
            rest.parse()
                .map_err(|_| Error::Parse(format!("bad family index in '{s}'")))
        };
        if let Some(rest) = s.strip_prefix("gaussian_poly_") {
            Ok(FamilyId::GaussianPoly(parse_suffix(rest)?))
        } else if let Some(rest) = s.strip_prefix("arcsine_mixture_") {
            let m = parse_suffix(rest)?;
            if m == 0 {
                return Err(Error::Parse("arcsine_mixture needs at least one term".into()));
            }
            Ok(FamilyId::ArcsineMixture(m))
        } else if let Some(rest) = s.strip_prefix("indicator_mixture_") {
            let m = parse_suffix(rest)?;
            if m == 0 {
                return Err(Error::Parse("indicator_mixture needs at least one term".into()));
            }
            Ok(FamilyId::IndicatorMixture(m))
        } else {
            Err(Error::Parse(format!("unknown family '{s}'")))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamFamily {
    pub id: FamilyId,
}

impl ParamFamily {
    pub fn new(id: FamilyId) -> Self {
        Self { id }
    }

    pub fn dim(&self) -> usize {
        match self.id {
            FamilyId::GaussianPoly(0) => 1,
            FamilyId::GaussianPoly(k) => k + 2,
            FamilyId::ArcsineMixture(m) => 4 * m,
            FamilyId::IndicatorMixture(m) => 3 * m,
        }
    }

    /// Closed per-parameter box bounds.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        match self.id {
            FamilyId::GaussianPoly(k) => {
                let mut b = vec![(1e-3, 1e3)];
                if k > 0 {
                    b.extend(std::iter::repeat((-1e3, 1e3)).take(k + 1));
                }
                b
            }
            FamilyId::ArcsineMixture(m) => {
                let per = [(-100.0, 100.0), (-10.0, 10.0), (1e-3, 10.0), (0.05, 1.0)];
                (0..m).flat_map(|_| per).collect()
            }
            FamilyId::IndicatorMixture(m) => {
                let per = [(-10.0, 10.0), (1e-3, 20.0), (-100.0, 100.0)];
                (0..m).flat_map(|_| per).collect()
            }
        }
    }

    pub fn in_bounds(&self, theta: &[f64]) -> bool {
        theta.len() == self.dim()
            && theta
                .iter()
                .zip(self.bounds())
                .all(|(&v, (lo, hi))| v.is_finite() && v >= lo && v <= hi)
    }

    /// Deterministic map theta -> FunctionSpec; out-of-bounds points are
    /// infeasible rather than clamped.
    pub fn build(&self, theta: &[f64]) -> Result<FunctionSpec> {
        if !self.in_bounds(theta) {
            return Err(Error::Infeasible(format!("{} point out of bounds", self.id)));
        }
        let spec = match self.id {
            FamilyId::GaussianPoly(0) => crate::spec::gaussian(theta[0], vec![1.0]),
            FamilyId::GaussianPoly(k) => {
                let mut coeffs = vec![0.0; 2 * k + 1];
                for (i, &c) in theta[1..].iter().enumerate() {
                    coeffs[2 * i] = c;
                }
                crate::spec::gaussian(theta[0], coeffs)
            }
            FamilyId::ArcsineMixture(_) => {
                let terms = theta
                    .chunks(4)
                    .map(|p| {
                        let (weight, center, half_width, clip) = (p[0], p[1], p[2], p[3]);
                        let clipped = clip < 1.0 - 1e-12;
                        Term::Arcsine {
                            center,
                            half_width,
                            weight,
                            clip_lo: clipped.then(|| center - clip * half_width),
                            clip_hi: clipped.then(|| center + clip * half_width),
                        }
                    })
                    .collect();
                FunctionSpec { terms }
            }
            FamilyId::IndicatorMixture(_) => {
                let terms = theta
                    .chunks(3)
                    .map(|p| Term::Indicator { lo: p[0], hi: p[0] + p[1], height: p[2] })
                    .collect();
                FunctionSpec { terms }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Feasible-or-nothing objective: None marks an infeasible trial point.
pub fn objective<'a>(
    id: FunctionalId,
    family: &'a ParamFamily,
    cfg: &'a QuadratureConfig,
) -> impl Fn(&[f64]) -> Option<f64> + Sync + 'a {
    move |theta: &[f64]| {
        let spec = family.build(theta).ok()?;
        let value = evaluate(id, &spec, cfg).ok()?.value;
        value.is_finite().then_some(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    CoordinateDescent,
    Simplex,
}

impl std::str::FromStr for SearchMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coordinate_descent" => Ok(SearchMethod::CoordinateDescent),
            "simplex" => Ok(SearchMethod::Simplex),
            other => Err(Error::Parse(format!("unknown search method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub method: SearchMethod,
    pub sense: Sense,
    pub initial_step: f64,
    pub shrink: f64,
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            method: SearchMethod::CoordinateDescent,
            sense: Sense::Maximize,
            initial_step: 0.1,
            shrink: 0.5,
            budget: 2000,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidSpec("initial_step must be positive".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidSpec("shrink factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Iterate {
    pub theta: Vec<f64>,
    pub value: f64,
}

/// Accepted iterates (strictly improving), best point, and evaluation count.
#[derive(Debug, Clone, Serialize)]
pub struct SearchTrace {
    pub iterates: Vec<Iterate>,
    pub best_theta: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
}

impl SearchTrace {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let dim = self.best_theta.len();
        let header: Vec<String> = (0..dim).map(|i| format!("theta_{i}")).collect();
        writeln!(w, "iter,value,{}", header.join(","))?;
        for (i, it) in self.iterates.iter().enumerate() {
            let theta: Vec<String> = it.theta.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{},{:.16e},{}", i, it.value, theta.join(","))?;
        }
        Ok(())
    }
}

const STEP_FLOOR: f64 = 1e-6;

/// Monotone local search. `objective` returns None for infeasible trials,
/// which are skipped. Within one sweep (or simplex step) all trials are
/// evaluated before any acceptance, so the trace does not depend on
/// evaluation order.
pub fn optimize<F: Fn(&[f64]) -> Option<f64> + Sync>(
    objective: &F,
    start: &[f64],
    cfg: &SearchConfig,
) -> Result<SearchTrace> {
    cfg.validate()?;
    let start_value = objective(start)
        .ok_or_else(|| Error::Infeasible("objective not evaluable at the start point".into()))?;
    let mut trace = SearchTrace {
        iterates: vec![Iterate { theta: start.to_vec(), value: start_value }],
        best_theta: start.to_vec(),
        best_value: start_value,
        evaluations: 1,
    };
    if cfg.budget <= 1 {
        return Ok(trace);
    }
    match cfg.method {
        SearchMethod::CoordinateDescent => coordinate_descent(objective, cfg, &mut trace),
        SearchMethod::Simplex => simplex(objective, cfg, &mut trace),
    }
    Ok(trace)
}

fn better(sense: Sense, candidate: f64, incumbent: f64) -> bool {
    match sense {
        Sense::Maximize => candidate > incumbent,
        Sense::Minimize => candidate < incumbent,
    }
}

fn coordinate_descent<F: Fn(&[f64]) -> Option<f64> + Sync>(
    objective: &F,
    cfg: &SearchConfig,
    trace: &mut SearchTrace,
) {
    let dim = trace.best_theta.len();
    let mut step = cfg.initial_step;
    while step >= STEP_FLOOR && trace.evaluations < cfg.budget {
        // evaluate the full sweep before selecting, deterministically
        let mut trials: Vec<Vec<f64>> = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for sign in [1.0, -1.0] {
                let mut t = trace.best_theta.clone();
                t[i] += sign * step;
                trials.push(t);
            }
        }
        let room = cfg.budget - trace.evaluations;
        trials.truncate(room);
        use rayon::prelude::*;
        let values: Vec<Option<f64>> = trials.par_iter().map(|t| objective(t)).collect();
        trace.evaluations += trials.len();

        let mut best_trial: Option<usize> = None;
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = *v {
                let reference = best_trial.map_or(trace.best_value, |j| values[j].unwrap());
                if better(cfg.sense, v, reference) {
                    best_trial = Some(i);
                }
            }
        }
        match best_trial {
            Some(i) => {
                trace.best_theta = trials[i].clone();
                trace.best_value = values[i].unwrap();
                trace
                    .iterates
                    .push(Iterate { theta: trace.best_theta.clone(), value: trace.best_value });
            }
            None => step *= cfg.shrink,
        }
    }
}

fn simplex<F: Fn(&[f64]) -> Option<f64> + Sync>(
    objective: &F,
    cfg: &SearchConfig,
    trace: &mut SearchTrace,
) {
    // standard Nelder-Mead coefficients (reflect, expand, contract, shrink)
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let dim = trace.best_theta.len();
    // internal convention: minimize `cost`; infeasible trials are +inf (worst)
    let cost = |theta: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        match objective(theta) {
            Some(v) => match cfg.sense {
                Sense::Maximize => -v,
                Sense::Minimize => v,
            },
            None => f64::INFINITY,
        }
    };
    let record = |trace: &mut SearchTrace, theta: &[f64], c: f64, sense: Sense| {
        let v = match sense {
            Sense::Maximize => -c,
            Sense::Minimize => c,
        };
        if c.is_finite() && better(sense, v, trace.best_value) {
            trace.best_theta = theta.to_vec();
            trace.best_value = v;
            trace.iterates.push(Iterate { theta: theta.to_vec(), value: v });
        }
    };

    let mut evals = 0usize;
    let mut vertices: Vec<Vec<f64>> = vec![trace.best_theta.clone()];
    for i in 0..dim {
        let mut v = trace.best_theta.clone();
        v[i] += cfg.initial_step * v[i].abs().max(1.0);
        vertices.push(v);
    }
    let mut costs: Vec<f64> = vertices.iter().map(|v| cost(v, &mut evals)).collect();
    for (v, &c) in vertices.iter().zip(&costs) {
        record(trace, v, c, cfg.sense);
    }

    while trace.evaluations + evals < cfg.budget {
        // order vertices by cost
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let diameter = vertices
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&vertices[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < STEP_FLOOR {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| {
                order[..dim].iter().map(|&i| vertices[i][j]).sum::<f64>() / dim as f64
            })
            .collect();
        let mix = |coef: f64| -> Vec<f64> {
            (0..dim)
                .map(|j| centroid[j] + coef * (centroid[j] - vertices[worst][j]))
                .collect()
        };

        let reflected = mix(ALPHA);
        let c_reflected = cost(&reflected, &mut evals);
        if c_reflected < costs[best] {
            let expanded = mix(GAMMA);
            let c_expanded = cost(&expanded, &mut evals);
            if c_expanded < c_reflected {
                vertices[worst] = expanded;
                costs[worst] = c_expanded;
            } else {
                vertices[worst] = reflected;
                costs[worst] = c_reflected;
            }
        } else if c_reflected < costs[second_worst] {
            vertices[worst] = reflected;
            costs[worst] = c_reflected;
        } else {
            let contracted = mix(-RHO);
            let c_contracted = cost(&contracted, &mut evals);
            if c_contracted < costs[worst] {
                vertices[worst] = contracted;
                costs[worst] = c_contracted;
            } else {
                for &i in &order[1..] {
                    vertices[i] = (0..dim)
                        .map(|j| vertices[best][j] + SIGMA * (vertices[i][j] - vertices[best][j]))
                        .collect();
                    costs[i] = cost(&vertices[i], &mut evals);
                    record(trace, &vertices[i].clone(), costs[i], cfg.sense);
                }
            }
        }
        let last_changed = worst;
        record(trace, &vertices[last_changed].clone(), costs[last_changed], cfg.sense);
    }
    trace.evaluations += evals;
}

/// Exhaustive Cartesian scan over per-parameter sample lists.
pub fn grid_scan<F: Fn(&[f64]) -> Option<f64> + Sync>(
    objective: &F,
    axes: &[Vec<f64>],
) -> Result<Vec<(Vec<f64>, Option<f64>)>> {
    if axes.is_empty() || axes.iter().any(|a| a.is_empty()) {
        return Err(Error::InvalidSpec("grid_scan needs nonempty axes".into()));
    }
    let total: usize = axes.iter().map(|a| a.len()).try_fold(1usize, |acc, n| {
        acc.checked_mul(n).filter(|&t| t <= 10_000_000)
    })
    .ok_or_else(|| Error::InvalidSpec("grid_scan exceeds the 1e7-point cap".into()))?;

    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes.len()];
    loop {
        let theta: Vec<f64> = idx.iter().zip(axes).map(|(&i, a)| a[i]).collect();
        let value = objective(&theta);
        rows.push((theta, value));
        // odometer increment
        let mut d = axes.len();
        loop {
            if d == 0 {
                return Ok(rows);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

pub fn write_scan_csv<W: Write>(
    rows: &[(Vec<f64>, Option<f64>)],
    w: &mut W,
) -> std::io::Result<()> {
    let dim = rows.first().map_or(0, |(t, _)| t.len());
    let header: Vec<String> = (0..dim).map(|i| format!("theta_{i}")).collect();
    writeln!(w, "{},value", header.join(","))?;
    for (theta, value) in rows {
        let cols: Vec<String> = theta.iter().map(|v| format!("{v:.16e}")).collect();
        match value {
            Some(v) => writeln!(w, "{},{:.16e}", cols.join(","), v)?,
            None => writeln!(w, "{},infeasible", cols.join(","))?,
        }
    }
    Ok(())
}
