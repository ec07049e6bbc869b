use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no square class")]
    Zero,

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("{0} is not a prime")]
    NotPrime(String),

    #[error("Kronecker symbol needs a nonzero lower argument")]
    ZeroModulus,

    #[error("delta0 = {0} must be a positive squarefree integer")]
    BadField(String),

    #[error("odd number of ramified places in {0}")]
    OddRamification(String),

    #[error("L is not a splitting field: Q(sqrt(-{delta0})) does not split {class}")]
    NotSplitting { class: String, delta0: u64 },

    #[error("degenerate Hermitian form")]
    Degenerate,

    #[error("Gram matrix is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("forms live over different fields")]
    FieldMismatch,

    #[error("only defined for definite forms")]
    Indefinite,

    #[error("prime {p} is not inert in Q(sqrt(-{delta0}))")]
    NotInert { p: String, delta0: u64 },

    #[error("prime {p} is not an odd prime ramified in Q(sqrt(-{delta0}))")]
    NotOddRamified { p: String, delta0: u64 },

    #[error("contradictory facts at {place}: {first} gives {first_status}, {second} gives {second_status}")]
    Contradiction {
        place: String,
        first: String,
        first_status: String,
        second: String,
        second_status: String,
    },

    #[error("not unitary stable: {0}")]
    NotUnitaryStable(String),

    #[error("no conclusion (only local information available): {0}")]
    NoConclusion(String),

    #[error("invalid fact sheet: {0}")]
    InvalidSheet(String),

    #[error("{0}")]
    Parse(String),
}
