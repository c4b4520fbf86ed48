use thiserror::Error;

/// Errors produced by basis construction, transforms and operators.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A parameter violates its documented range (e.g. `alpha <= -1`).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An argument lies outside the domain of the map (e.g. `|theta| >= pi`).
    #[error("argument outside domain: {0}")]
    Domain(String),

    /// Coefficient window and operator window are incompatible.
    #[error("window mismatch: {0}")]
    Window(String),

    /// The two expansions do not live in the same basis.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// A recurrence coefficient `b_n` vanished, so the three-term
    /// recurrence decouples and the table cannot be continued.
    #[error("reducible recurrence: b[{0}] = 0")]
    Reducible(usize),

    /// Index beyond what a precomputed table holds.
    #[error("index {index} exceeds table size {n_max}")]
    IndexOutOfRange { index: usize, n_max: usize },

    /// Too few data points survive the fit window and noise floor.
    #[error("insufficient data for fit: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
