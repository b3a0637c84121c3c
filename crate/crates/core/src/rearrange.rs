//! Symmetric decreasing rearrangement on grids.

use crate::error::{Error, Result};

/// Uniformly sampled function on [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn sample<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Self {
        let step = (hi - lo) / (n - 1) as f64;
        let values = (0..n).map(|i| f(lo + step * i as f64)).collect();
        Self { lo, hi, values }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.values.len() - 1) as f64
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.lo + self.step() * i as f64
    }

    pub fn l1_discrete(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.step()
    }

    pub fn l2_sq_discrete(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.step()
    }

    /// #{values > threshold} * step, a discrete distribution function.
    pub fn measure_above(&self, threshold: f64) -> f64 {
        self.values.iter().filter(|&&v| v > threshold).count() as f64 * self.step()
    }
}

/// Sorted-values construction of the symmetric decreasing rearrangement on a
/// grid of the same size, centered at the origin. Negative input is rejected;
/// callers clip first.
pub fn decreasing_rearrangement(input: &GridFunction) -> Result<GridFunction> {
    let n = input.values.len();
    if n < 2 {
        return Err(Error::InvalidSpec("rearrangement needs at least two samples".into()));
    }
    if input.values.iter().any(|&v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "rearrangement sample" });
    }
    if input.values.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidSpec("rearrangement input must be nonnegative".into()));
    }
    let mut sorted = input.values.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // place the largest value at the center, then alternate outward
    let mut values = vec![0.0; n];
    let center = n / 2;
    values[center] = sorted[0];
    let mut k = 1usize;
    let mut offset = 1usize;
    while k < n {
        if center + offset < n {
            values[center + offset] = sorted[k];
            k += 1;
        }
        if k < n && offset <= center {
            values[center - offset] = sorted[k];
            k += 1;
        }
        offset += 1;
    }
    let half = 0.5 * (input.hi - input.lo);
    Ok(GridFunction { lo: -half, hi: half, values })
}
