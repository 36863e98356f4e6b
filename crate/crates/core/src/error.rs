use thiserror::Error;

use crate::rat::RVec;

/// Errors raised by the polyhedral, solver and set-algebra layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size cap exceeded: {what} = {got} > {cap}")]
    SizeCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    /// The set is empty; `farkas` is a multiplier vector `y >= 0` with `yᵀA = 0` and `yᵀb < 0`
    /// for the H-system that was found infeasible.
    #[error("empty set: {context}")]
    Empty { context: String, farkas: Option<RVec> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("rank-deficient parameterization: {0}")]
    RankDeficient(String),

    /// `c` is outside the domain of the cone value function; `direction` is a ray of the cone along
    /// which the objective decreases without bound.
    #[error("linear term outside the value-function domain")]
    NotInDomain { direction: RVec },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown gallery case {0:?}")]
    UnknownCase(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_dim(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected {want}, got {got}"
        )));
    }
    Ok(())
}
