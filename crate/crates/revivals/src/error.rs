//! Error types shared across the crate.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building spectra, weights, packets,
/// or artifacts. Variants carry enough context to point at the offending
/// quantity without the caller re-deriving it.
#[derive(Debug, Error)]
pub enum Error {
    /// A quantum number below the spectrum's floor (e.g. n = 0 for hydrogen).
    #[error("quantum number n = {n} lies below the spectrum floor n_min = {n_min}")]
    QuantumNumberBelowFloor { n: i64, n_min: i64 },

    /// A quantum number outside a tabulated spectrum's range.
    #[error("quantum number n = {n} is outside the tabulated range [{lo}, {hi}]")]
    QuantumNumberOutsideTable { n: i64, lo: i64, hi: i64 },

    /// The finite-difference stencil for spectral derivatives needs more
    /// tabulated neighbors than the table provides.
    #[error("derivatives at n_bar = {n_bar} need tabulated energies for every n in [{lo}, {hi}]")]
    StencilOutsideTable { n_bar: i64, lo: i64, hi: i64 },

    /// A structurally invalid spectrum definition (non-positive length,
    /// empty table, non-consecutive quantum numbers, ...).
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// Gaussian weights requested around a mean below the admissible floor,
    /// which would clamp the window to nothing.
    #[error(
        "gaussian window collapses: n_bar = {n_bar} lies below the spectrum floor n_min = {n_min}"
    )]
    WindowBelowFloor { n_bar: i64, n_min: i64 },

    /// Coherent-state truncation discards too much probability mass.
    #[error(
        "coherent truncation at n_cap = {n_cap} discards probability mass {discarded:.3e} >= {tol:.1e}; raise n_cap"
    )]
    CoherentCapTooSmall {
        n_cap: i64,
        discarded: f64,
        tol: f64,
    },

    /// Custom weights with no nonzero coefficient cannot be normalized.
    #[error("custom weights must contain at least one nonzero coefficient")]
    AllWeightsZero,

    /// Custom weights listed the same quantum number twice.
    #[error("custom weights list the quantum number n = {n} more than once")]
    DuplicateQuantumNumber { n: i64 },

    /// A structurally invalid weight definition (non-positive sigma, ...).
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Box eigenfunctions are only defined on [0, L].
    #[error("position x = {x} lies outside the box [0, {length}]")]
    OutsideBox { x: f64, length: f64 },

    /// Circular-state eigenfunctions are only defined for r > 0.
    #[error("radius r = {r} must be positive")]
    NonPositiveRadius { r: f64 },

    /// An evaluation grid extends outside the basis domain.
    #[error("grid extends outside the basis domain: {0}")]
    GridOutsideDomain(String),

    /// The weight window references quantum numbers the basis cannot represent.
    #[error("weights window [{lo}, {hi}] is incompatible with the {basis} basis")]
    WindowOutsideBasis { lo: i64, hi: i64, basis: String },

    /// Spectrum and eigenbasis describe different physical systems.
    #[error("spectrum kind `{spectrum}` does not match eigenbasis kind `{basis}`")]
    SystemMismatch { spectrum: String, basis: String },

    /// An operation restricted to one basis was called on another.
    #[error("{operation} requires the {required} basis, got {basis}")]
    UnsupportedBasis {
        operation: String,
        required: String,
        basis: String,
    },

    /// A reference transform that is not an isometry of the packet's domain.
    #[error("transform `{transform}` is not applicable to the {basis} basis")]
    IncompatibleTransform { transform: String, basis: String },

    /// Autocorrelation sampling too coarse to resolve the fastest beat in
    /// the window (Nyquist guard).
    #[error(
        "time step dt = {dt:.6e} is too coarse; the fastest beat requires dt <= {required:.6e}"
    )]
    TimeStepTooCoarse { dt: f64, required: f64 },

    /// Degenerate sampling request (t_max < dt, non-positive dt, ...).
    #[error("invalid time sampling: {0}")]
    InvalidSampling(String),

    /// A scenario field failed semantic validation.
    #[error("scenario field `{field}`: {message}")]
    ScenarioInvalid { field: String, message: String },

    /// A symbolic time asked for a fraction of a scale that is unbounded
    /// for the scenario's system (e.g. "1/6 t_sr" for the box).
    #[error("scenario field `{field}`: cannot resolve a fraction of {scale}, which is unbounded for this system")]
    UnboundedScaleFraction { field: String, scale: String },

    /// Scenario JSON that does not parse (carries serde's line/column).
    #[error("scenario does not parse: {0}")]
    ScenarioParse(#[from] serde_json::Error),

    /// Underlying I/O failure while reading inputs or writing artifacts.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
