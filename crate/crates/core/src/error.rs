use thiserror::Error;

/// Errors raised by the algebra, series, symmetric-function and Fock layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("roster error: {0}")]
    Roster(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expansion-order error: {0}")]
    ExpansionOrder(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("symmetry error: {0}")]
    Symmetry(String),
    #[error("basis error: {0}")]
    Basis(String),
    #[error("invalid index: {0}")]
    Index(String),
    #[error("operator error: {0}")]
    Operator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
