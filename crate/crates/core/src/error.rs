use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("precision failure in {op}: {reason}")]
    PrecisionFailure { op: &'static str, reason: String },

    #[error("{op} did not converge after {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    #[error("index {n} is outside the domain {lo}..={hi} of sequence `{label}`")]
    OutOfDomain {
        label: String,
        n: u64,
        lo: u64,
        hi: u64,
    },

    #[error("{path}:{line}: malformed cache record: {reason}")]
    CacheParse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: {reason}")]
    SequenceFormat { path: PathBuf, reason: String },

    #[error(
        "degenerate Sturm chain: the polynomial is not squarefree (gcd has degree {gcd_degree})"
    )]
    DegenerateChain { gcd_degree: usize },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn precision(op: &'static str, reason: impl Into<String>) -> Self {
        Error::PrecisionFailure {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
