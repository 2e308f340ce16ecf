//! Core domain types shared by every module: time series, fractional orders,
//! and the crate-wide error type.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by fitting, training, searching, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series too short: need at least {need} points, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate least-squares system (normal-matrix determinant {det:e})")]
    DegenerateFit { det: f64 },
    #[error("forecast horizon too large: |a|*(n+horizon) = {0} exceeds the overflow guard")]
    Horizon(f64),
    #[error("training diverged at iteration {iter}: {what}")]
    Diverged { iter: usize, what: String },
    #[error("search failed: {0}")]
    Search(String),
    #[error("index {index} outside covered range {lo}..={hi}")]
    Range { index: usize, lo: usize, hi: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
}

/// An ordered sequence of finite real observations x(1)..x(n).
///
/// The domain model is 1-indexed to match the usual grey-modeling convention;
/// [`TimeSeries::at`] takes a 1-based index, while [`TimeSeries::values`]
/// exposes the underlying 0-based slice for iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    /// Build a series, rejecting empty input and non-finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { need: 1, got: 0 });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value {} at position {}",
                values[pos],
                pos + 1
            )));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees length >= 1
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// 1-based access: `at(1)` is the first observation.
    pub fn at(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    /// True when every observation is strictly positive (grey-model precondition).
    pub fn all_positive(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }
}

/// The pair (alpha, beta) governing the truncated M-fractional operators,
/// with 0 < alpha <= 1 and beta > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    alpha: f64,
    beta: f64,
}

impl FractionalOrder {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// The classical order (alpha = 1, beta = 1), under which the fractional
    /// operators reduce to plain cumulative sum and first difference.
    pub fn classical() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}
