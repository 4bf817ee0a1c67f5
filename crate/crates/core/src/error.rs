use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("alphabet mismatch: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range 1..={d}")]
    GeneratorOutOfRange { index: usize, d: usize },
    #[error("center of a basic open must be a nonzero polynomial")]
    ZeroCenter,
    #[error("bracket of weight {weight} exceeds the basis registry (max weight {max})")]
    WeightOverflow { weight: usize, max: usize },
    #[error("basis registry too small: weight {required} needed, {available} available")]
    BasisTooSmall { required: usize, available: usize },
    #[error("unknown basis element {0}")]
    UnknownBasisElement(usize),
    #[error("invalid bracket monomial: {0}")]
    InvalidMonomial(String),
    #[error("filtration degree of the zero polynomial is infinite")]
    ZeroPolynomial,
    #[error("operator C[{lambda}; {mu} -> {nu}] has not stabilized at degree bound {bound}")]
    OperatorNotStabilized { lambda: String, mu: String, nu: String, bound: usize },
    #[error("missing operator: {0}")]
    MissingOperator(String),
    #[error("sections live over different basic opens")]
    CenterMismatch,
    #[error("truncation mismatch: K = {left} vs K = {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("elements belong to different quivers")]
    QuiverMismatch,
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension vector has total {found}, expected {expected}")]
    TotalMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("negative arrow count {count} from w{from} to w{to} in the local quiver")]
    NegativeArrowCount { from: usize, to: usize, count: i64 },
    #[error("unsupported stability parameter: {0}")]
    InvalidTheta(String),
    #[error("v0 must carry a one-dimensional space, found dimension {0}")]
    NonUnitBaseVertex(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}
