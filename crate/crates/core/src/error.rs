use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not divisible by {1} in Z[v, v^-1]")]
    NotDivisible(String, String),
    #[error("quantum factorial of negative integer {0}")]
    NegativeFactorial(i64),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("shape mismatch: (n={0}, D={1}) vs (n={2}, D={3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("window entries {0:?} are not a periodic bijection")]
    NotABijection(Vec<i64>),
    #[error("invalid residue {residue} for n = {n}")]
    InvalidResidue { residue: usize, n: usize },
    #[error("{0:?} is not a dominant flag symbol")]
    NotDominant(Vec<i64>),
    #[error("elements lie in different length-zero cosets (rotation {0} vs {1})")]
    IncomparableRotation(i64, i64),
    #[error("flag symbol {0:?} is not in the orbit of {1:?}")]
    NotInOrbit(Vec<i64>, Vec<i64>),
    #[error("matrix does not belong to the requested block: {0}")]
    NotInBlock(String),
    #[error("invalid periodic matrix: {0}")]
    InvalidMatrix(String),
    #[error("Hecke element is not a combination of coset sums: {0}")]
    Collapse(String),
    #[error("bar matrix is not unitriangular: {0}")]
    NotUnitriangular(String),
    #[error("bar discrepancy is not of the form p - bar(p): {0}")]
    BarDiscrepancy(String),
    #[error("io: {0}")]
    Io(String),
    #[error("support exceeded the configured cap of {cap} labels")]
    CapExceeded { cap: usize },
    #[error("element is not in the span of the monomial images: {0}")]
    NotInSpan(String),
    #[error("preimage dependence detected: {0}")]
    PreimageDependence(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
