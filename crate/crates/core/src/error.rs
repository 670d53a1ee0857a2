use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("site count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{what}: {n} sites exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse Pauli string {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("observable {0} is not Hermitian with coefficient +1 or -1")]
    NotHermitian(String),

    #[error("observables {first} and {second} do not commute")]
    NotCommuting { first: usize, second: usize },

    #[error("state is not an eigenvector of {observable} (residual {residual:e})")]
    NotAnEigenstate { observable: String, residual: f64 },

    #[error("ground level is {dimension}-fold degenerate; choose a parity sector")]
    DegenerateGroundState { dimension: usize },

    #[error("requested {requested} levels but the spectrum has only {available}")]
    TooManyLevels { requested: usize, available: usize },

    #[error("numerical fault: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
