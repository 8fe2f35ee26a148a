use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("thresholds must start at 0 and be strictly increasing")]
    ThresholdNotIncreasing,
    #[error("sentinel threshold {sentinel} must exceed (q-1)*u = {bound}")]
    SentinelTooSmall { sentinel: u64, bound: u64 },
    #[error("defective range l={l}, u={u} is invalid")]
    BadRange { l: usize, u: usize },
    #[error("sum {sum} reaches the sentinel threshold {sentinel}")]
    SumOutOfRange { sum: u64, sentinel: u64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need more than {d} columns, got {n}")]
    TooFewColumns { n: usize, d: usize },
    #[error("enumeration of {count} subsets exceeds the budget of {budget}")]
    ExplosionGuard { count: u128, budget: u64 },
    #[error("matrix is not binary")]
    NotBinary,
    #[error("alphabet too small: q-1 = {q_minus_1} < {needed}")]
    AlphabetTooSmall { q_minus_1: u64, needed: u64 },
    #[error("level distribution does not sum to one: {total}")]
    BadDistribution { total: f64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("threshold {0} is too small")]
    BadThreshold(u64),
    #[error("row density {0} is out of range")]
    DensityOutOfRange(f64),
    #[error("kappa must be between 1 and 10, got {0}")]
    BadKappa(u32),
    #[error("inconsistent code description: {0}")]
    InconsistentSpec(String),
    #[error("block {block} residue {residue} has no binary representation")]
    NonBinaryResidue { block: usize, residue: i64 },
    #[error("no defective set is consistent with the syndrome")]
    NoConsistentSet,
    #[error("belief propagation messages vanished at iteration {0}")]
    NumericalUnderflow(usize),
    #[error("bad number of defectives d={d} for n={n}")]
    BadD { d: usize, n: usize },
    #[error("partition size i={i} must lie in 1..={d}")]
    BadPartition { i: usize, d: usize },
    #[error("search needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("threshold eta={eta} must satisfy 2 <= eta <= d={d}")]
    BadEta { eta: u64, d: u64 },
    #[error("entry {value} is outside the alphabet of size {q}")]
    EntryOutOfAlphabet { value: u64, q: u64 },
    #[error("noise probabilities gamma_p={gamma_p}, gamma_n={gamma_n} are invalid")]
    BadNoise { gamma_p: f64, gamma_n: f64 },
    #[error("subject index {index} is out of range 1..={n}")]
    BadSubject { index: usize, n: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("config error: {0}")]
    ConfigError(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, printed by the command-line tool on failure.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ThresholdNotIncreasing => "ThresholdNotIncreasing",
            Error::SentinelTooSmall { .. } => "SentinelTooSmall",
            Error::BadRange { .. } => "BadRange",
            Error::SumOutOfRange { .. } => "SumOutOfRange",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooFewColumns { .. } => "TooFewColumns",
            Error::ExplosionGuard { .. } => "ExplosionGuard",
            Error::NotBinary => "NotBinary",
            Error::AlphabetTooSmall { .. } => "AlphabetTooSmall",
            Error::BadDistribution { .. } => "BadDistribution",
            Error::NotPrime(_) => "NotPrime",
            Error::Overflow(_) => "Overflow",
            Error::BadThreshold(_) => "BadThreshold",
            Error::DensityOutOfRange(_) => "DensityOutOfRange",
            Error::BadKappa(_) => "BadKappa",
            Error::InconsistentSpec(_) => "InconsistentSpec",
            Error::NonBinaryResidue { .. } => "NonBinaryResidue",
            Error::NoConsistentSet => "NoConsistentSet",
            Error::NumericalUnderflow(_) => "NumericalUnderflow",
            Error::BadD { .. } => "BadD",
            Error::BadPartition { .. } => "BadPartition",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BadEta { .. } => "BadEta",
            Error::EntryOutOfAlphabet { .. } => "EntryOutOfAlphabet",
            Error::BadNoise { .. } => "BadNoise",
            Error::BadSubject { .. } => "BadSubject",
            Error::ParseError { .. } => "ParseError",
            Error::ConfigError(_) => "ConfigError",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
