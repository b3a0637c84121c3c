//! Numerical toolkit for three convolution (autocorrelation) inequalities on the
//! real line, the machine-checked constants appearing in their proofs, and exact
//! small-scale solvers for the mirror problems in additive combinatorics
//! (difference bases, g-difference bases, g-Sidon sets).

pub mod autocorr;
pub mod certificates;
pub mod combinatorics;
pub mod error;
pub mod fourier;
pub mod functionals;
pub mod manifest;
pub mod norms;
pub mod optimizer;
pub mod poly;
pub mod quad;
pub mod rearrange;
pub mod spec;
pub mod special;

pub use error::{Error, Result};
pub use quad::{Interval, QuadratureConfig, SingularityMode};
pub use spec::{FunctionSpec, Term};
