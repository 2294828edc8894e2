use kaleido_core::algebra::AlgebraError;
use kaleido_core::compose::ComposeError;
use kaleido_core::designs::DesignError;
use kaleido_core::io::IoError;
use kaleido_core::schema::SchemaError;
use kaleido_core::search::SearchError;
use kaleido_core::tables::TablesError;
use serde_json::Value;

/// Why a command did not produce a valid object.
#[derive(Debug)]
pub enum Failure {
    /// Well-formed input that is mathematically invalid, or nothing found (exit 1).
    Invalid(String),
    /// Input that could not be read or understood (exit 2).
    Malformed(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Malformed(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Malformed(m) => m,
        }
    }
}

pub fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Malformed(msg.into())
}

macro_rules! malformed_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Malformed(e.to_string())
            }
        }
    )*};
}

malformed_from!(AlgebraError, SchemaError, IoError, TablesError, std::io::Error);

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        match e {
            DesignError::InvalidKdf { .. } | DesignError::NotAUnitalDesign(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::NotAnInitialBlock { .. } => Failure::Invalid(e.to_string()),
            SearchError::Design(d) => d.into(),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

impl From<ComposeError> for Failure {
    fn from(e: ComposeError) -> Self {
        match e {
            ComposeError::IngredientInvalid(_)
            | ComposeError::SchemaMismatch(..)
            | ComposeError::MissingIngredient(_)
            | ComposeError::InvalidPbd(_) => Failure::Invalid(e.to_string()),
            ComposeError::Design(d) => d.into(),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

/// Result of a command that ran to completion: a JSON document for stdout, a
/// one-line summary for stderr, and whether the requested object is valid.
pub struct Outcome {
    pub ok: bool,
    pub json: Value,
    pub summary: String,
}

impl Outcome {
    pub fn new(ok: bool, json: Value, summary: impl Into<String>) -> Self {
        Outcome { ok, json, summary: summary.into() }
    }
}
