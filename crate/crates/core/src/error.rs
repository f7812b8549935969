use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A k-dependent denominator factor outside the supported integer-affine class.
    #[error("unsupported denominator factor: {residual}")]
    UnsupportedDenominator { residual: String },

    #[error("pole at n = {n}{}", .k.as_ref().map(|k| format!(", k = {k}")).unwrap_or_default())]
    PoleAtPoint { n: String, k: Option<String> },

    #[error("window too short: need {needed} values, have {have}")]
    InsufficientWindow { needed: usize, have: usize },

    #[error("ansatz cap {cap} exceeded: {what}")]
    AnsatzCapExceeded { cap: usize, what: String },

    #[error("unsupported pole order {order}")]
    UnsupportedPoleOrder { order: usize },

    #[error("unsupported decomposition: {0}")]
    UnsupportedDecomposition(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with stage labels stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Out-of-scope inputs as opposed to resource caps or wrong answers.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self.root(),
            Error::UnsupportedDenominator { .. }
                | Error::UnsupportedPoleOrder { .. }
                | Error::UnsupportedDecomposition(_)
                | Error::Parse { .. }
                | Error::InvalidInput(_)
        )
    }

    /// Short machine-readable name of the innermost error.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::DivisionByZero => "division_by_zero",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse { .. } => "parse",
            Error::UnsupportedDenominator { .. } => "unsupported_denominator",
            Error::PoleAtPoint { .. } => "pole",
            Error::InsufficientWindow { .. } => "insufficient_window",
            Error::AnsatzCapExceeded { .. } => "cap_exceeded",
            Error::UnsupportedPoleOrder { .. } => "unsupported_pole_order",
            Error::UnsupportedDecomposition(_) => "unsupported_decomposition",
            Error::Internal(_) => "internal",
            Error::Stage { .. } => unreachable!("root strips stages"),
        }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self.root(), Error::AnsatzCapExceeded { .. })
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}
