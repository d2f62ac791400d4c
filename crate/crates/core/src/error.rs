use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `s > 1`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of an operation does not hold.
    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    /// A lemma hypothesis does not hold; `field` names the offending input.
    #[error("hypothesis `{field}` violated: {detail}")]
    Hypothesis { field: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("Orlicz bisection could not bracket the Luxemburg norm: {0}")]
    OrliczBracket(String),

    #[error("measure budget exhausted in round {round}: {detail}")]
    MeasureBudget { round: usize, detail: String },
}

impl Error {
    pub(crate) fn pre(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition { op, detail: detail.into() }
    }

    pub(crate) fn hyp(field: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis { field, detail: detail.into() }
    }
}
