use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a probability or parameter invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// No input distribution satisfies the cost budget.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A mutual information came out below the clamping window; this signals a bug, not user error.
    #[error("negative information value {0:.3e} below clamping tolerance")]
    NegativeInformation(f64),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::Dimension(_)
            | Error::Parse { .. }
            | Error::NegativeInformation(_)
            | Error::Numerical(_) => 2,
            Error::Infeasible(_) => 3,
            Error::Io(_) => 4,
        }
    }
}
