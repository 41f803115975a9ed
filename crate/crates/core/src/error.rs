use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate basis")]
    DegenerateBasis,
    #[error("singular matrix")]
    Singular,
    #[error("dimension unsupported: {op} supports n <= {max}, got n = {n}")]
    DimensionUnsupported {
        op: &'static str,
        n: usize,
        max: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("irrational facet normal")]
    IrrationalNormal,
    #[error("degenerate: dim(K∩Λ)<n")]
    DegenerateHull,
    #[error("degenerate parallelepiped")]
    DegenerateParallelepiped,
    #[error("enumeration budget exceeded: {candidates} candidates, budget {budget}")]
    BudgetExceeded { candidates: String, budget: u64 },
    #[error("random generation hit {0} consecutive degenerate draws")]
    RetryLimit(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
