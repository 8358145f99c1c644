use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} out of range 1..=16")]
    InvalidDegree(u32),
    #[error("defining polynomial {poly:#x} is not monic of degree {m}")]
    NotMonic { poly: u32, m: u32 },
    #[error("defining polynomial {poly:#x} is reducible: divisible by {factor:#x}")]
    Reducible { poly: u32, factor: u32 },
    #[error("element {element} does not have multiplicative order {expected}")]
    NotPrimitive { element: String, expected: u64 },
    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("trace a+d is zero: the map has order 2")]
    ExcludedOrderTwo,
    #[error("matrix is singular (ad + bc = 0)")]
    Singular,
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Goppa polynomial vanishes at support point {0}")]
    SupportRoot(String),
    #[error("support points are not pairwise distinct")]
    DuplicateSupport,
    #[error("degree bound violated: {0}")]
    DegreeBound(String),
    #[error("code lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension {k} exceeds exhaustive enumeration guard {limit}; use a smaller code")]
    GuardExceeded { k: usize, limit: usize },
}

impl Error {
    /// Stable machine-readable kind, used in JSON error blocks.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDegree(_) => "invalid_degree",
            Error::NotMonic { .. } => "not_monic",
            Error::Reducible { .. } => "reducible",
            Error::NotPrimitive { .. } => "not_primitive",
            Error::FieldMismatch { .. } => "field_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::ExcludedOrderTwo => "order_two",
            Error::Singular => "singular",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidExponent(_) => "invalid_exponent",
            Error::Parse(_) => "parse",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::SupportRoot(_) => "support_root",
            Error::DuplicateSupport => "duplicate_support",
            Error::DegreeBound(_) => "degree_bound",
            Error::LengthMismatch(..) => "length_mismatch",
            Error::GuardExceeded { .. } => "guard_exceeded",
        }
    }

    /// Errors that signal a violated standing assumption rather than bad input.
    pub fn is_skip(&self) -> bool {
        matches!(self, Error::ExcludedOrderTwo | Error::Unsupported(_))
    }
}
