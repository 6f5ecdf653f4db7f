use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation number must be at least 1 (got {0})")]
    InvalidTruncation(usize),

    #[error("operator dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("operator shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("eigensolver failed to converge (matrix fingerprint {fingerprint:016x}, dim {dim})")]
    EigenNonConvergence { fingerprint: u64, dim: usize },

    #[error("requested {requested} levels but only {available} are available")]
    TooManyLevels { requested: usize, available: usize },

    #[error("truncation not converged at the cap n_trunc = {cap}")]
    TruncationCapReached {
        cap: usize,
        previous: Vec<f64>,
        last: Vec<f64>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("at grid point {index}: {source}")]
    AtGridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("density matrix trace deviates from one (trace = {0})")]
    TraceDeviation(f64),

    #[error("atom and field entropies differ: {atom} vs {field}")]
    SchmidtMismatch { atom: f64, field: f64 },

    #[error("spectra of the lab and polaron frames differ by {deviation:e} (relative)")]
    FrameMismatch { deviation: f64 },

    #[error("gap threshold must be positive (got {0})")]
    InvalidThreshold(f64),

    #[error("window [{lo}, {hi}] is not contained in the grid [{grid_lo}, {grid_hi}]")]
    WindowOutsideGrid {
        lo: f64,
        hi: f64,
        grid_lo: f64,
        grid_hi: f64,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("{what} not found below g_max = {g_max}")]
    BoundaryNotFound { what: &'static str, g_max: f64 },

    #[error("no degenerate point for sector n = {n} at delta = {delta}")]
    NoDegeneracy { n: usize, delta: f64 },

    #[error("perturbation too strong: epsilon / g_star = {ratio:.4} (must stay below {limit})")]
    PerturbationTooStrong { ratio: f64, limit: f64 },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at_grid_point(index: usize, source: Error) -> Self {
        Error::AtGridPoint {
            index,
            source: Box::new(source),
        }
    }

    /// True for failures of the numerics, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::EigenNonConvergence { .. }
            | Error::TruncationCapReached { .. }
            | Error::SchmidtMismatch { .. }
            | Error::FrameMismatch { .. }
            | Error::BoundaryNotFound { .. }
            | Error::NoDegeneracy { .. }
            | Error::NotBracketed { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
