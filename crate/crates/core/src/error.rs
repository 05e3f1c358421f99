use core::fmt;

/// Errors raised by the model, the phase extraction and the statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A lattice could not be built with the requested dimensions.
    InvalidTopology(&'static str),
    /// A depletion request removed too many links (or the input had no
    /// constant in-degree).
    InvalidDepletion { k: usize, degree: Option<usize> },
    /// An argument violated an operation's precondition.
    InvalidArgument(&'static str),
    /// Not enough data points for the requested computation.
    InsufficientData(&'static str),
    /// The abscissae (or ordinates) of a fit carry no information.
    DegenerateFit(&'static str),
    /// A value lies outside the domain of a log transform.
    Domain(&'static str),
    /// Every observation is identical, so the F ratio is 0/0.
    UndefinedF,
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Short machine-friendly tag, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTopology(_) => "invalid-topology",
            Error::InvalidDepletion { .. } => "invalid-depletion",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InsufficientData(_) => "insufficient-data",
            Error::DegenerateFit(_) => "degenerate-fit",
            Error::Domain(_) => "domain",
            Error::UndefinedF => "undefined-f",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidTopology(msg) => write!(f, "invalid topology: {msg}"),
            Error::InvalidDepletion { k, degree: Some(d) } => {
                write!(f, "invalid depletion: cannot remove {k} of {d} in-links")
            }
            Error::InvalidDepletion { k, degree: None } => write!(
                f,
                "invalid depletion: removing {k} links needs a constant in-degree network"
            ),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
            Error::DegenerateFit(msg) => write!(f, "degenerate fit: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UndefinedF => write!(f, "F statistic undefined: all observations are identical"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
