use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("spectrum is not real (eigenvalue {re:.3e} + {im:.3e}i)")]
    SpectrumNotReal { re: f64, im: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not an X-state (off-pattern entry magnitude {magnitude:.3e})")]
    NotXState { magnitude: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invariant violated at t = {t}: {what}")]
    InvariantViolated { t: f64, what: String },

    #[error("closed form is singular here ({quantity} = {value:.3e}); use numeric evolution")]
    SingularParameterization { quantity: &'static str, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("eigen-decomposition did not converge")]
    NoConvergence,

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Scenario {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code, used in the `error` column of sweep files.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not_hermitian",
            Error::SpectrumNotReal { .. } => "spectrum_not_real",
            Error::NotPositive { .. } => "not_positive",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NotXState { .. } => "not_x_state",
            Error::InvalidState(_) => "invalid_state",
            Error::InvariantViolated { .. } => "invariant_violated",
            Error::SingularParameterization { .. } => "singular",
            Error::Unsupported(_) => "unsupported",
            Error::NoConvergence => "no_convergence",
            Error::Config(_) => "config",
            Error::Scenario { source, .. } => source.code(),
            Error::Io(_) => "io",
        }
    }

    /// True for errors caused by bad user input rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::OutOfRange { .. } | Error::Io(_) => true,
            Error::Scenario { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub(crate) fn with_context(self, context: impl Into<String>) -> Self {
        Error::Scenario {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
