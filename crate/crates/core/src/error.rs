use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar or structural argument failed validation. `field` names the offending input.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("distribution is not normalized: sum = {sum} (tolerance {tolerance:e})")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("schema error at row {row}, field `{field}`: {reason}")]
    Schema {
        row: usize,
        field: String,
        reason: String,
    },

    #[error("unsupported {what} version {found} (supported: {supported})")]
    Version {
        what: &'static str,
        found: String,
        supported: u32,
    },

    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn schema(row: usize, field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            row,
            field: field.into(),
            reason: reason.into(),
        }
    }
}
