//! Meta-analysis hypothesis testing in the many normal means model.
//!
//! Each of `m` independent studies observes a `d`-dimensional Gaussian mean
//! vector at noise scale `1/√n`. The null hypothesis is that the mean is
//! zero; the alternative is that its Euclidean norm is at least `ρ`. This
//! crate provides:
//!
//! - local per-study statistics (chi-square norms, directional coordinates,
//!   shared-rotation projections, p-values, likelihood-ratio e-values),
//! - combination rules across studies (Fisher, Pearson, Stouffer, Tippett,
//!   Edgington, generalized means, e-value merging, plain sums) together
//!   with Hölder-continuity certificates,
//! - meta-level decision rules with analytic or Monte-Carlo-calibrated
//!   thresholds,
//! - a reproducible Monte Carlo harness for levels, ROC curves, risk and
//!   separation-rate experiments, built on splittable deterministic random
//!   streams, and
//! - a binary-expansion quantizer with explicit error/bit-budget bounds.
//!
//! Reproducibility is a first-class contract: every experiment is driven by
//! a single root seed, per-rep streams are derived by keyed hashing (never
//! by sharing generator state), and results are identical for any worker
//! count.

pub mod combine;
pub mod diag;
pub mod exec;
pub mod harness;
pub mod localstat;
pub mod metatest;
pub mod model;
pub mod quantize;
pub mod rng;
pub mod specfun;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quantile was requested at p = 0 or p = 1 where it is infinite.
    #[error("quantile is infinite at p = {0}")]
    InfiniteQuantile(f64),
    /// A test was evaluated in a parameter regime it does not support
    /// (e.g. directional partitions with fewer studies than dimensions).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    /// A configuration value failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A bit budget too small to represent the integer part of the input.
    #[error("bit budget {given} too small: representing |x| needs at least {needed} bits")]
    InsufficientBits { given: u32, needed: u32 },
    /// A Monte-Carlo-calibrated test was evaluated at a level missing from
    /// its calibration table.
    #[error("no calibrated threshold for `{test}` at alpha = {alpha}")]
    MissingCalibration { test: String, alpha: f64 },
    /// A test name not present in the registry.
    #[error("unknown test `{name}`; known tests: {registry}")]
    UnknownTest { name: String, registry: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
