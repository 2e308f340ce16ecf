//! Small-sample time-series forecasting with grey prediction models and
//! grey-informed neural networks.
//!
//! The crate provides:
//!
//! - [`ops`]: discrete accumulation/difference operators, both classical
//!   (cumulative sum / first difference) and truncated M-fractional, plus the
//!   Gamma and truncated Mittag-Leffler special functions they depend on.
//! - [`grey`]: least-squares fitting, prediction, and restoration for the
//!   classical GM(1,1) model and its fractional generalization tM-FGM(1,1).
//! - [`nn`]: a from-scratch multilayer perceptron trained by full-batch
//!   gradient descent on a composite loss that blends data error with the
//!   error against a pre-fitted grey model (GINN / FGINN).
//! - [`pso`]: particle swarm optimization used to select the fractional
//!   order (alpha, beta).
//! - [`metrics`]: MAPE / MSE / MAE / RMSE evaluation reports.
//!
//! All randomness flows through the seeded [`rng::SplitMix64`] generator, so
//! every fit, training run, and search is deterministic given its seed.

pub mod grey;
pub mod metrics;
pub mod nn;
pub mod ops;
pub mod pso;
pub mod rng;
pub mod series;

pub use grey::{fit_gm11, fit_tmfgm, GreyModelFit, GreyParams};
pub use metrics::{evaluate, MetricReport};
pub use nn::{
    build_windows, composite_loss, forecast, gradient, make_grey_targets, train, Activation,
    GreyInformedLossConfig, GreyTermForm, MlpState, Normalization, Normalizer, TrainConfig,
    TrainedMlp, WindowDataset,
};
pub use pso::{pso_optimize, select_order, PsoConfig, SearchResult};
pub use series::{Error, FractionalOrder, Result, TimeSeries};
