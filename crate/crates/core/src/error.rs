use thiserror::Error;

/// Errors produced by samplers and numeric kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument left the mathematical domain of an operation.
    #[error("{op}: parameter `{param}` = {value} outside its domain")]
    Domain {
        op: &'static str,
        param: &'static str,
        value: f64,
    },

    /// Truncation region carries no representable probability mass.
    #[error("truncated gamma(shape={shape}, rate={rate}) above {lower}: tail mass underflows")]
    InfeasibleTruncation { shape: f64, rate: f64, lower: f64 },

    /// Parameter regime the library deliberately does not support.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A quantity that must be positive for the full conditional to be proper
    /// came out non-positive. This indicates a defect or improper inputs, and
    /// is never clipped silently.
    #[error("propriety violation in {what}: computed value {value} <= 0")]
    Propriety { what: &'static str, value: f64 },

    /// Series diagnostics cannot be computed (e.g. constant chain).
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    /// Too few observations for the requested augmentation.
    #[error("{what}: needs at least {needed} observations, got {got}")]
    TooFewObservations {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// A matrix that must be symmetric positive definite is not.
    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, param: &'static str, value: f64) -> Self {
        Error::Domain { op, param, value }
    }
}
