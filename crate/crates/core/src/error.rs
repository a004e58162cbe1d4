use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field of order {p}^{f} exceeds the bound {bound}")]
    FieldTooLarge { p: u64, f: u32, bound: u64 },
    #[error("no irreducible polynomial of degree {f} over F_{p} (internal bug)")]
    NoIrreducible { p: u64, f: u32 },
    #[error("operands live in different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,

    #[error("subgroup closure exceeded {bound} elements")]
    ClosureTooLarge { bound: usize },
    #[error("unknown subgroup name `{0}`")]
    UnknownName(String),
    #[error("group of order {order} exceeds the bound {bound}")]
    GroupTooLarge { order: u64, bound: u64 },
    #[error("matrix is not in GSp(4)")]
    NotSymplectic,

    #[error("precision exhausted: value indistinguishable from zero")]
    PrecisionExhausted,
    #[error("precision {have} below the required {need}")]
    PrecisionTooLow { have: u32, need: u32 },
    #[error("precision insufficient to decide integrality")]
    PrecisionInsufficient,
    #[error("sampler did not stabilise within {budget} samples")]
    NonConvergence { budget: usize },

    #[error("expression evaluated to the non-integer {0}")]
    NonIntegralResult(String),
    #[error("resource bound exceeded: {0}")]
    TooLarge(String),
    #[error("character value not determined: {0}")]
    ValueNotPinned(String),
    #[error("fixed-vector dimension {0} is not a nonnegative integer")]
    NonIntegralDimension(String),
    #[error("character lemma mismatches: {0:?}")]
    MismatchReport(Vec<String>),
    #[error("sum {sum} disagrees with closed form {formula}")]
    Disagreement { sum: i128, formula: i128 },
    #[error("values are not those of a polynomial of degree <= {max_degree}")]
    NotPolynomial { max_degree: usize },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
