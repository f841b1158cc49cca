//! # freelab
//!
//! A numerical laboratory for one-variable free probability on compactly
//! supported measures.
//!
//! The crate computes free additive convolutions through subordination
//! fixed points, free entropy and free Fisher information, and turns the
//! standard inequalities relating them (Fisher inequality, free Stam,
//! entropy superadditivity, entropy monotonicity along free CLT sums, and
//! the free entropy power inequality) into executable checks with
//! quantified slack. A classical module provides the parallel Shannon
//! entropy / Fisher information checks, and a random-matrix Monte Carlo
//! oracle cross-validates the convolution engine.
//!
//! ## Layout
//!
//! | module | contents |
//! |--------|----------|
//! | [`measure`] | compactly supported measures (atomic / gridded density), moments, dilation |
//! | [`transforms`] | Cauchy transforms, Stieltjes inversion, finite Hilbert transform |
//! | [`free_conv`] | free additive convolution and semicircular smoothing |
//! | [`cumulants`] | exact free moment/cumulant arithmetic (the side-channel oracle) |
//! | [`entropy`] | free entropy χ, free Fisher information Φ, conjugate variables |
//! | [`inequalities`] | the inequality checks, reported with slack and provenance |
//! | [`classical`] | classical score, Fisher information, Shannon entropy analogues |
//! | [`rmt`] | random-matrix Monte Carlo moments of free sums |
//! | [`cli`] | batch command-line surface emitting JSON-lines / CSV reports |
//!
//! All measures are immutable after construction and every operation is a
//! pure function, so the whole API is safe to drive from multiple threads.

use thiserror::Error;

pub mod classical;
pub mod cli;
pub mod cumulants;
pub mod entropy;
pub mod free_conv;
pub mod inequalities;
pub mod measure;
pub mod rmt;
pub mod transforms;

pub use measure::{Measure, MomentVector};
pub use transforms::{CauchyEvaluator, GridFunction};

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid samples have non-positive total mass")]
    NonPositiveMass,

    #[error("negative density sample at index {index}: {value}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("atom masses sum to {sum}, expected 1 within 1e-9")]
    MassMismatch { sum: f64 },

    #[error("duplicate atom location {location}")]
    DuplicateAtom { location: f64 },

    #[error("moment/cumulant order {order} exceeds supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("dilation scale must be nonzero")]
    ZeroScale,

    #[error("invalid support window: lo = {lo}, hi = {hi}")]
    InvalidWindow { lo: f64, hi: f64 },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("atom detected during Stieltjes inversion (mass score {score:.4} > 0.05)")]
    AtomDetected { score: f64 },

    #[error("mass renormalization factor {factor:.6} outside [0.99, 1.01]")]
    MassLoss { factor: f64 },

    #[error("operation requires a grid measure, got an atomic one")]
    AtomicUnsupported,

    #[error("inversion window [{lo}, {hi}] does not cover declared support [{support_lo}, {support_hi}]")]
    WindowTooSmall {
        lo: f64,
        hi: f64,
        support_lo: f64,
        support_hi: f64,
    },

    #[error("fixed point failed to converge: residual {residual:.3e} after {iterations} iterations at z = {at}")]
    NoConvergence {
        residual: f64,
        iterations: usize,
        at: String,
    },

    #[error("degenerate coefficient: a[{index}]^2 = 1 but b[{index}] != 0")]
    DegenerateCoefficient { index: usize },

    #[error("invalid coefficient vector: {0}")]
    InvalidCoefficients(String),

    #[error("density below threshold everywhere; score window is empty")]
    DensityTooSmall,

    #[error("matrix dimension {dim} too small, need at least {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("measure has no {dim}-dimensional diagonal realization: {reason}")]
    UnrealizableSpec { dim: usize, reason: String },

    #[error("variance {variance:.4} outside [{lo}, {hi}] required by the flow integral")]
    VarianceOutOfRange { variance: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed measure spec: {0}")]
    BadSpec(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::AtomDetected { .. } | Error::MassLoss { .. }
        )
    }
}
