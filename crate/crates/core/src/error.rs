use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown fuzzy variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },

    #[error("missing crisp input for variable `{0}`")]
    MissingInput(String),

    #[error("value {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("density grids are incompatible: {0}")]
    GridMismatch(String),

    #[error("enumeration needs {required} nodes, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("scenario generation failed after {0} redraws")]
    RedrawLimit(usize),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
