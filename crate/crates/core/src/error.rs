use crate::algebra::AlgebraError;

/// Errors produced by the kernel, series and pipeline operations.
///
/// `NonExactDivision` and `Internal` indicate a broken invariant rather than
/// bad user input: every division performed by the library is exact by
/// theorem, so a nonzero remainder means a bug (or a degenerate input that
/// slipped past validation).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// Some pair of a-entries is (0, 0), so the common denominator of the
    /// permutation sum vanishes identically.
    #[error("degenerate a-vector: entries {0} and {1} are both zero")]
    DegenerateA(usize, usize),
    #[error("interpolation grid is singular after {0} attempts")]
    SingularGrid(u32),
    #[error("weights must sum to zero, got {0}")]
    Unbalanced(i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("oracle not validated: run self_check() before querying")]
    OracleNotValidated,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True when the error signals a broken internal invariant (as opposed
    /// to a rejected input).
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Algebra(AlgebraError::NonExactDivision) | Error::Internal(_)
        )
    }
}
