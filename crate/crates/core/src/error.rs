use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gate is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("site {site} out of range for a chain of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("invalid subsystem {start}..{end} for a chain of {sites} sites")]
    InvalidSubsystem { start: usize, end: usize, sites: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state too large: {0}")]
    TooLarge(String),
    #[error("inconsistent Clifford conjugation table: {0}")]
    InvalidClifford(String),
    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("matrix is not antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),
    #[error("gate is not a matchgate")]
    NotMatchgate,
    #[error("empty gate ensemble: {0}")]
    EmptyEnsemble(String),
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("incompatible setup: {0}")]
    Incompatible(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("threshold time censored: {0}")]
    Censored(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
