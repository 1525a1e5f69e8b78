use thiserror::Error;

/// Every failure the workbench reports. Variants map onto the CLI exit codes
/// through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("mixed fields: GF({0}) and GF({1})")]
    MixedFields(u32, u32),
    #[error("unsupported field order {0}")]
    InvalidFieldOrder(u64),
    #[error("modulus is not a monic irreducible polynomial of the stated degree")]
    ReducibleModulus,
    #[error("element {elem} out of range for GF({q})")]
    ElementOutOfRange { elem: u64, q: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid distance: {0}")]
    InvalidDistance(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration of {size} items exceeds the limit {limit}")]
    EnumerationLimitExceeded { size: String, limit: u64 },
    #[error("invalid distances: {0}")]
    InvalidDistances(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("rank {rank} exceeds cap {cap}")]
    RankCapViolated { rank: usize, cap: usize },
    #[error("{pairs} pairs exceed the pair limit {limit}")]
    PairLimitExceeded { pairs: u64, limit: u64 },
    #[error("missing sub-code {0}")]
    MissingSubcode(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("identifying vectors {0} and {1} have Hamming distance {2} < {3}")]
    HammingDistanceViolated(usize, usize, usize, usize),
    #[error("registry miss: no value for A_{q}({n},{d},{k}), entry (q,n,d,k) = ({q},{n},{d},{k})")]
    RegistryMiss { q: u64, n: u64, d: u64, k: u64 },
    #[error("no manifest for {0}")]
    ManifestMiss(String),
    #[error("table {table} row {row}: computed {computed}, published {published}")]
    Mismatch { table: u32, row: u32, computed: String, published: String },
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// 2 usage/hypothesis, 3 registry, 4 verification (reported separately), 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RegistryMiss { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
