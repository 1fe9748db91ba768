use thiserror::Error;

/// Failure classes shared by every stage of the pipeline.
///
/// The CLI maps each variant onto an exit code, so new variants should be
/// slotted into [`Error::class`] as well.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate Padé table: {0}")]
    DegenerateTable(String),
    #[error("root finding failed after {iterations} iterations (residual 2^{log2_residual:.1})")]
    RootFindingFailed { iterations: usize, log2_residual: f64 },
    #[error("near-multiple pole: roots {0} and {1} closer than the separation threshold")]
    NearMultiplePole(usize, usize),
    #[error("argument on or too close to a branch cut: {0}")]
    OnCut(String),
    #[error("|x| = {0:.3} exceeds the series cutoff; use the dyadic path")]
    UseAsymptoticPath(f64),
    #[error("tail bound unavailable: term ratio stayed >= 1 for {0} terms")]
    BoundUnavailable(usize),
    #[error("Laplace direction {theta} within margin of Stokes direction {stokes}")]
    StokesCollision { theta: f64, stokes: f64 },
    #[error("point outside the domain of analyticity: {0}")]
    Domain(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse grouping used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Domain,
    Degenerate,
    Convergence,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) => ErrorClass::Usage,
            Error::OnCut(_) | Error::Domain(_) | Error::StokesCollision { .. } => ErrorClass::Domain,
            Error::DegenerateTable(_) | Error::NearMultiplePole(..) => ErrorClass::Degenerate,
            Error::RootFindingFailed { .. }
            | Error::UseAsymptoticPath(_)
            | Error::BoundUnavailable(_) => ErrorClass::Convergence,
            Error::Io(_) => ErrorClass::Io,
        }
    }

    /// Short machine-readable tag, used for NaN markers in grid output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DegenerateTable(_) => "degenerate-table",
            Error::RootFindingFailed { .. } => "root-finding-failed",
            Error::NearMultiplePole(..) => "near-multiple-pole",
            Error::OnCut(_) => "on-cut",
            Error::UseAsymptoticPath(_) => "use-asymptotic-path",
            Error::BoundUnavailable(_) => "bound-unavailable",
            Error::StokesCollision { .. } => "stokes-collision",
            Error::Domain(_) => "domain",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
