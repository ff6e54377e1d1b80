use thiserror::Error;

use crate::cartan::BValue;
use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("index {} out of range for rank {n}", index + 1)]
    IndexOutOfRange { index: usize, n: usize },
    #[error("k and j must differ (both are {})", .0 + 1)]
    EqualIndices(usize),
    #[error("invalid Cartan datum: {0}")]
    InvalidDatum(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    /// The recursion and the closed form disagree, or a zero that must exist
    /// was not found. Always an arithmetic bug.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    /// Characteristic 0 only: the bounded scan found no zero although the
    /// closed form gives a finite value beyond the cap.
    #[error("recursion found no zero up to m = {cap}, closed form gives {closed}")]
    ScanCapExceeded { cap: u64, closed: BValue },
    #[error("B is infinite at j={}; reflection in α_{} is undefined", j + 1, k + 1)]
    InfiniteB { k: usize, j: usize },
    #[error("value does not fit in 64 bits")]
    Overflow,
}
