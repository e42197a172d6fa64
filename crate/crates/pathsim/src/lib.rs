//! Seasonal atmospheric path-loss simulation for mm-wave urban microcells.
//!
//! The crate models the close-in (CI) path-loss form anchored at a 1 m
//! free-space reference, with an additive atmospheric attenuation term
//! `alpha * d` driven by seasonal weather state, and a shadow-fading draw.
//! On top of the channel model it provides:
//!
//! * a deterministic scenario sweep producing datasets in a fixed
//!   twelve-column CSV schema,
//! * CSV ingestion and preprocessing (column dropping, season label
//!   encoding, train/test splitting, feature standardization),
//! * nine regression models (linear, Huber-robust, ridge, lasso,
//!   elastic net, polynomial, SGD, random forest, epsilon-SVR) with
//!   MAE/MSE/RMSE/R2 evaluation,
//! * SVG report generation (per-season path-loss curves, an R2 bar
//!   chart, and an RMSE comparison against published studies).
//!
//! Every stochastic step takes an explicit seeded stream; sweeps derive
//! per-point substreams from a master seed so results are independent of
//! thread count. See the `examples/` directory for runnable entry points
//! into each capability, and the `pathsim` binary for the command-line
//! surface.

pub mod atmosphere;
pub mod channel;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod manifest;
pub mod regression;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
