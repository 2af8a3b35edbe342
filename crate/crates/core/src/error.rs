use thiserror::Error;

/// Errors raised by the operator library.
///
/// The variants split into two families the CLI maps onto different exit
/// codes: bad parameters (`Parameter`, `Parse`, `Aliasing`, `MissingWitness`,
/// `Precondition`) and numerical domain failures (`Domain`, `SingularKernel`,
/// `Divergent`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("K_max = {k_max} aliases on a grid of {n} nodes (need n >= 2*K_max + 2)")]
    Aliasing { k_max: usize, n: usize },

    #[error("a Hölder witness is required for this operation")]
    MissingWitness,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point outside the operator domain: {0}")]
    Domain(String),

    #[error("kernel is singular at collinear points ({x1}, {x2}) and ({y1}, {y2})")]
    SingularKernel { x1: f64, x2: f64, y1: f64, y2: f64 },

    #[error("integral diverges: {0}")]
    Divergent(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by the caller's parameters rather than by the
    /// numerical domain of the operator.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parameter { .. }
                | Error::Parse { .. }
                | Error::Aliasing { .. }
                | Error::MissingWitness
                | Error::Precondition(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
