use thiserror::Error;

use crate::trace::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chain is not a d1-cycle (d1 = {0})")]
    NotACycle(String),
    #[error("chain has terms in more than one semiconjugacy class")]
    MixedClasses,
    #[error("operation requires b1 = 1 and b2 = 0, got phi = {0}")]
    PhiOutsideRegime(String),
    #[error("cellular data violates {} chain identit{}", .0.len(), if .0.len() == 1 { "y" } else { "ies" })]
    InvalidCellular(Vec<Violation>),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid search budget: {0}")]
    Budget(String),
    #[error("no valid data within budget: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
