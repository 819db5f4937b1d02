use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field element {value} out of range for GF({order})")]
    InvalidElement { value: u32, order: u32 },

    #[error("inversion of zero")]
    ZeroInversion,

    #[error("curve file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("declared genus {declared} but the footprint has {computed} gaps")]
    GenusMismatch { declared: u32, computed: u32 },

    #[error("{0} is not a nongap")]
    NotANongap(i64),

    #[error("only {found} of {needed} independent evaluation rows below pole order {bound}")]
    RankDeficient { found: usize, needed: usize, bound: u32 },

    #[error("no vanishing element in residue class {class} below pole order {bound}")]
    SearchBoundExceeded { class: usize, bound: u32 },

    #[error("{0} is not in the set of pole orders indexing the evaluation basis")]
    InvalidGamma(u32),

    #[error("no s has nu(s) >= {0}; the code would be empty")]
    EmptyGamma(u32),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("iteration budget of {0} exceeded")]
    BudgetExceeded(u128),

    #[error("no nonzero codeword with weight >= {tau} found after {samples} samples")]
    NearestUnavailable { tau: usize, samples: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
