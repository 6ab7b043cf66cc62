use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("user base is empty")]
    EmptyBase,
    #[error("participation did not settle after {0} rounds")]
    NonConvergence(usize),
    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("threshold bracket failed: {0}")]
    BracketFailure(String),
    #[error("hybrid model requires delta > 0")]
    DeltaZero,
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("equilibrium invariant violated: {0}")]
    Invariant(String),
    #[error("worker pool: {0}")]
    Workers(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
