use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A declared precondition of an operation does not hold; the string
    /// names the violated condition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The greedy partition needed more intervals than the caller allowed.
    #[error("partition needs {achieved} intervals but only {max} are allowed")]
    Admissibility { achieved: usize, max: usize },

    /// The red/blue/green decomposition reached a state its structure theory
    /// says is impossible.
    #[error("structure violation: {0}")]
    Structure(String),

    /// An enumeration request exceeds the configured capacity guard.
    #[error("capacity guard: space of {required} profiles exceeds the limit {limit}")]
    Capacity { required: f64, limit: f64 },

    /// Geometry operation hit a singular configuration.
    #[error("singular configuration: {0}")]
    Singularity(String),

    /// Malformed external input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Error {
        Error::Domain(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Error {
        Error::Contract(msg.into())
    }

    pub fn structure(msg: impl Into<String>) -> Error {
        Error::Structure(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Error {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
