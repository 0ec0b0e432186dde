use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown anyon model '{0}' (expected su2_2 or ising)")]
    UnknownModel(String),

    #[error("model has no label named '{0}'")]
    UnknownLabel(String),

    #[error("unsupported anyon count {0}: only 3 and 6 sigma anyons are modelled")]
    UnsupportedAnyonCount(usize),

    #[error("no admissible fusion labeling for {n_anyons} sigma anyons with total charge {charge}")]
    EmptyBasis { n_anyons: usize, charge: String },

    #[error("the two-triple fusion tree is only modelled with total charge vac, not {0}")]
    UnsupportedTotalCharge(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalised (norm {0})")]
    NotNormalised(f64),

    #[error("zero vector cannot be normalised")]
    ZeroVector,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("strand index {index} out of range for {n_strands} strands")]
    StrandOutOfRange { index: usize, n_strands: usize },

    #[error("cannot parse braid word: {0}")]
    BraidParse(String),

    #[error("group closure exceeded the bound of {0} elements")]
    ClosureExceeded(usize),

    #[error("invalid fusion pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("fusion pair ({0}, {1}) crosses the clock/system partition")]
    CrossPartitionFusion(usize, usize),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("ancilla count {m} exceeds the enumeration guard ({max})")]
    ScaleGuard { m: usize, max: usize },

    #[error("tick index {index} out of range for {n_ticks} ticks")]
    TickOutOfRange { index: usize, n_ticks: usize },

    #[error("a clock needs at least two ticks, got {0}")]
    DegenerateSchedule(usize),

    #[error("invalid clock schedule: {0}")]
    InvalidSchedule(String),

    #[error("clock outcome has probability {0:.3e}; the conditional state is undefined")]
    ZeroProbability(f64),

    #[error("global state is not stationary for this schedule: {0}")]
    NonStationary(String),

    #[error("braided resource has fidelity {0:.3e} with the target Bell state")]
    BraidConvention(f64),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
