use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in cyclotomic field")]
    DivisionByZero,
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("coefficient vector for conductor {conductor} has length {found}, expected {expected}")]
    BadCoefficientLength { conductor: u32, expected: usize, found: usize },
    #[error("not a polynomial: factor Φ_{d} has exponent {e}")]
    NotPolynomial { d: u64, e: i64 },
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("catalog entry `{name}`: {msg}")]
    Invalid { name: String, msg: String },
    #[error("catalog entry `{name}` failed to parse: {source}")]
    Parse {
        name: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("reading catalog file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group `{name}` of order {order} exceeds the enumeration budget {budget}")]
    BudgetExceeded { name: String, order: u64, budget: u64 },
    #[error("group `{name}` is too large to enumerate here (order {order}); it is never built")]
    Refused { name: String, order: u64 },
    #[error("group `{name}` requires the large-group flag (order {order})")]
    NeedsLarge { name: String, order: u64 },
    #[error("group `{name}`: closure produced {found} elements, catalog says {expected}")]
    OrderMismatch { name: String, expected: u64, found: u64 },
    #[error("group `{name}`: found {found} reflections, catalog says {expected}")]
    ReflectionMismatch { name: String, expected: u64, found: u64 },
    #[error("group `{name}`: generator {index} is not a reflection")]
    NotReflection { name: String, index: usize },
    #[error("group `{name}`: root orbit has {count} vectors, more than supported")]
    TooManyRoots { name: String, count: usize },
    #[error("group `{name}`: roots do not span the space")]
    Degenerate { name: String },
    #[error("group `{name}`: no Coxeter element found")]
    NoCoxeterElement { name: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcpError {
    #[error("Fuß–Catalan number is not an integer (corrupted degrees?)")]
    NonInteger,
    #[error("NC^{m} has {count} elements, above the budget {budget}")]
    BudgetExceeded { m: usize, count: u64, budget: u64 },
    #[error("evaluation at q = ζ_{denom}^{p} is not a rational integer: {value}")]
    NotInteger { denom: u64, p: u64, value: String },
    #[error("p = {p} out of range for denominator {denom}")]
    BadExponent { denom: u64, p: u64 },
    #[error("denominator {denom} is neither mh nor (m+1)h")]
    BadDenominator { denom: u64 },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("search space of {size} candidates exceeds the budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("rank sum {got} of the requested types differs from the group rank {rank}")]
    RankMismatch { got: usize, rank: usize },
    #[error("unknown parabolic type `{0}`")]
    UnknownType(String),
    #[error("missing input `{0}`")]
    MissingInput(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("gcd({k}, {modulus}) != 1")]
    NotCoprime { k: u64, modulus: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("gcd({k}, {modulus}) != 1")]
    NotCoprime { k: u64, modulus: u64 },
    #[error(transparent)]
    Ncp(#[from] NcpError),
}
