use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported characteristic {0} (expected one of 2, 3, 5, 7)")]
    UnsupportedPrime(u32),
    #[error("extension degree {0} out of range 1..=8")]
    DegreeOutOfRange(u32),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient `{0}` is not interpretable in the field")]
    BadCoefficient(String),
    #[error("missing image for variable `{0}`")]
    MissingImage(String),
    #[error("invalid surface model: {0}")]
    InvalidModel(String),
    #[error("singular locus is not isolated in chart {0}")]
    NonIsolated(String),
    #[error("completeness certificate failed in chart {chart}: found {found}, ideal has length {expected}; points missing beyond the extension bound, raise it")]
    CertificateMismatch {
        chart: String,
        found: usize,
        expected: usize,
    },
    #[error("base point check failed: {0}")]
    BasePoint(String),
    #[error("local model: {0}")]
    LocalModel(String),
    #[error("not a Du Val singularity: {0}")]
    NotDuVal(String),
    #[error("resolution needs a field larger than F_{{{p}^{k}}}")]
    FieldTooSmall { p: u32, k: u32 },
    #[error("resolution depth limit {0} exceeded")]
    DepthExceeded(usize),
    #[error("dual graph is not an ADE diagram: {0}")]
    NotAde(String),
    #[error("Tjurina number {tau} matches no normal form of {ty}")]
    NoCoindexMatch { ty: String, tau: usize },
    #[error("normal-form table: {0}")]
    ArtinTable(String),
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("point count fault: {0}")]
    PointCount(String),
    #[error("dynkin type parse error: {0}")]
    DynkinParse(String),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("entry {id}: {source}")]
    Entry { id: String, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
