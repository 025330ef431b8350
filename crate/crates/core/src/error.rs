use std::path::PathBuf;

/// Errors surfaced by the library.
///
/// `InvalidArgument`, `NotEnoughData` and `DegenerateVolatility` are
/// validation failures; `Io`, `Csv` and `Format` are input/output failures.
/// The CLI maps the two groups to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not enough data: need {needed} observations, have {available}")]
    NotEnoughData { needed: usize, available: usize },

    #[error("degenerate volatility: rolling standard deviation is zero")]
    DegenerateVolatility,

    #[error("{}: row {row}: {msg}", path.display())]
    Csv {
        path: PathBuf,
        row: usize,
        msg: String,
    },

    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by bad parameters rather than bad inputs or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::NotEnoughData { .. } | Error::DegenerateVolatility
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
