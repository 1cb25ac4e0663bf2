use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular to tolerance (pivot {pivot:.3e} below {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("gram matrix is not symmetric positive-definite")]
    DegenerateGram,

    #[error("vectors do not span a 2-plane (area^2 = {area2:.3e})")]
    DegeneratePlane { area2: f64 },

    #[error("vector is not horizontal: eta(X) = {value:.3e}")]
    NotHorizontal { value: f64 },

    #[error("metric is not associated: max |g(., xi) - eta| = {residual:.3e}")]
    NotAssociated { residual: f64 },

    #[error("structure is not contact metric: {0}")]
    NotContactMetric(String),

    #[error("Boeckx invariant requires k < 1, got k = {0}")]
    KNotLessThanOne(f64),

    #[error("parameter must be positive, got {0}")]
    NonPositiveParameter(f64),

    #[error("eta does not vanish on the distribution (max |eta| = {0:.3e})")]
    NotLegendreCandidate(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Boeckx invariant must satisfy I < -1, got {0}")]
    InvariantOutOfRange(f64),

    #[error("matrix is not positive-definite: {0}")]
    NonPositiveDefinite(String),

    #[error("operation does not support family {0}")]
    UnsupportedFamily(String),

    #[error("vector is not in m = ker eta: eta(X) = {0:.3e}")]
    NotInM(f64),

    #[error("no model tensor fits the base curvature (best relative residual {0:.3e})")]
    ModelMismatch(f64),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("tolerance must be strictly positive")]
    InvalidTolerance,

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("invalid input: {0}")]
    Input(String),
}
