use thiserror::Error;

/// Errors raised by the copier, information and optimisation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid joint state: {0}")]
    InvalidJointState(String),

    #[error("Bloch vector of length {0} lies outside the unit ball")]
    InvalidBloch(f64),

    #[error("no admissible copier at f = {f}, r = {r}: {reason}")]
    Infeasible { f: f64, r: f64, reason: String },

    #[error("copier construction failed: {0}")]
    Construction(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("unknown copier tag `{0}`")]
    UnknownCopier(String),

    #[error("malformed sweep data: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
