//! Crate-wide error type.
//!
//! Constructors across the crate validate their inputs eagerly and report
//! failures through this enum rather than panicking or silently repairing
//! data (no renormalization, no clamping of genuinely bad values).

/// Convenient alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building or evaluating a model.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    // ---- probability -------------------------------------------------
    #[error("alphabet `{name}` has no symbols")]
    EmptyAlphabet { name: String },

    #[error("alphabet `{name}` lists symbol `{symbol}` more than once")]
    DuplicateSymbol { name: String, symbol: String },

    #[error("variable `{name}` appears more than once")]
    DuplicateVariable { name: String },

    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String },

    #[error("variable `{name}` appears with two different alphabets")]
    AlphabetMismatch { name: String },

    #[error("variable sets must be disjoint but share `{name}`")]
    OverlappingVariables { name: String },

    #[error("data has {got} entries but the shape requires {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("probability entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("probability mass sums to {total}, expected 1 within {tolerance}")]
    MassNotOne { total: f64, tolerance: f64 },

    #[error("conditional row {row} sums to {total}, expected 1 within {tolerance}")]
    RowMassNotOne {
        row: usize,
        total: f64,
        tolerance: f64,
    },

    // ---- linear algebra / quantum ------------------------------------
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator trace is {trace}, expected 1 within {tolerance}")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error(
        "measurement operators sum to identity only within {deviation:e}, tolerance {tolerance:e}"
    )]
    PovmIncomplete { deviation: f64, tolerance: f64 },

    #[error("measurement has no outcomes")]
    EmptyPovm,

    #[error("observable must square to the identity (max deviation {deviation:e})")]
    NotInvolutory { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("state dimension {dim} does not factor as {left}x{right}")]
    BadPartition {
        dim: usize,
        left: usize,
        right: usize,
    },

    // ---- game ---------------------------------------------------------
    #[error("question index {value} is outside 1..=3")]
    BadQuestion { value: u8 },

    #[error("answer bit {value} is outside 0..=1")]
    BadAnswerBit { value: u8 },

    #[error("observables in {context} fail to commute (deviation {deviation:.3e})")]
    NonCommuting { context: String, deviation: f64 },

    // ---- channel -------------------------------------------------------
    #[error("encoder has no measurement for index triple ({v0}, {u}, {v})")]
    MissingPovm { v0: usize, u: usize, v: usize },

    #[error("invalid encoder: {reason}")]
    InvalidEncoder { reason: String },

    #[error("invalid channel: {reason}")]
    InvalidChannel { reason: String },

    // ---- rate regions ---------------------------------------------------
    #[error("rate coefficient pattern ({a}, {b}) is not supported")]
    PatternNotAllowed { a: i64, b: i64 },

    #[error("information term `{name}` is negative ({value})")]
    NegativeTermValue { name: String, value: f64 },

    #[error("region is unbounded: {detail}")]
    UnboundedRegion { detail: String },

    // ---- inequality systems ----------------------------------------------
    #[error("unknown information term `{name}`")]
    UnknownTerm { name: String },

    #[error("variable `{name}` does not appear in the system")]
    VarNotInSystem { name: String },

    // ---- simulation ---------------------------------------------------
    #[error("{what} {value} exceeds the supported cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },
}
