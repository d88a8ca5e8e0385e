use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order {0} outside supported range 2..=1024")]
    FieldOrderOutOfRange(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element {value} out of range for field of order {order}")]
    ElementOutOfRange { value: u32, order: u32 },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("no all-nonzero vector of length {n} over GF({q}) sums to zero")]
    NoSuchVector { q: u32, n: usize },

    #[error("enumeration of {needed} events exceeds budget of {budget}")]
    TooLarge { needed: u128, budget: u128 },

    #[error("code needs at least {min} codewords, got {got}")]
    TooSmall { got: usize, min: usize },

    #[error("duplicate codeword at index {0}")]
    DuplicateCodeword(usize),

    #[error("range size {0} has no configured group")]
    NoGroup(u32),

    #[error("all-ones word is not a codeword")]
    AllOnesNotInCode,

    #[error("bound inapplicable: {0}")]
    Inapplicable(String),

    #[error("epsilon {eps} below floor {floor}")]
    OutOfRange { eps: String, floor: String },

    #[error("negative discriminant {0} in threshold quadratic")]
    NegativeDiscriminant(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}
