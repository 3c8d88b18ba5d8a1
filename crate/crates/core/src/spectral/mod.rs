//! Bottom-of-spectrum, spectral-gap and Cheeger-constant estimates.
//!
//! All iterative estimates start from fixed vectors and reduce in a fixed
//! order, so they are deterministic functions of `(graph, tol)`.

mod cheeger;
pub mod dense;
mod power;

pub use cheeger::{cheeger_bracket, EXACT_CHEEGER_LIMIT};
pub use power::{
    extrapolate_radius_limit, lambda1_dirichlet, lambda1_dirichlet_with, smallest_eigenvalue_gap, spectral_gap,
    spectral_gap_with, PowerOptions,
};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DirichletPower,
    GapPower,
    ExactEnumeration,
    /// Cheeger bracket derived from the spectral gap.
    SpectralBracket,
}

/// A numeric estimate with a bracket and the effort spent on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub residual: f64,
    pub method: Method,
    #[serde(default = "converged_default")]
    pub converged: bool,
}

fn converged_default() -> bool {
    true
}

impl SpectralEstimate {
    pub fn exact(value: f64, method: Method) -> Self {
        SpectralEstimate {
            value,
            lower: value,
            upper: value,
            iterations: 0,
            residual: 0.0,
            method,
            converged: true,
        }
    }
}
