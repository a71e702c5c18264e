//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String },

    #[error("domain error in `{subterm}`: {message}")]
    EvalDomain { subterm: String, message: String },

    #[error("chart mismatch: `{expected}` vs `{found}`")]
    ChartMismatch { expected: String, found: String },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("form of degree {degree} exceeds chart dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("operation needs degree >= 1, got a 0-form")]
    ZeroDegree,

    #[error("symbolic operation on a pointwise operand")]
    PointwiseUnsupported,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("chart dimension {0} is even; contact charts must be odd-dimensional")]
    EvenDimensional(usize),

    #[error("contact condition failed: |eta ^ (d eta)^n| = {min_abs:.3e} at {point:?}")]
    ContactConditionFailed { min_abs: f64, point: Vec<f64> },

    #[error("singular linear system at {point:?}: {context}")]
    SingularSystem { point: Vec<f64>, context: String },

    #[error("function vanishes at sample {point:?} (|f| = {value:.3e})")]
    VanishingFunction { point: Vec<f64>, value: f64 },

    #[error("homogeneity check L_nu Omega = Omega failed: residual {residual:.3e}")]
    HomogeneityFailed { residual: f64 },

    #[error("vector field not transversal to the hypersurface at {point:?} (sigma_min = {sigma_min:.3e})")]
    NotTransversal { point: Vec<f64>, sigma_min: f64 },

    #[error("p . sigma differs from the identity at {point:?} (residual {residual:.3e})")]
    NotASection { point: Vec<f64>, residual: f64 },

    #[error("fibers are not Reeb orbits: Tp(R) = {residual:.3e} at {point:?}")]
    FiberMismatch { point: Vec<f64>, residual: f64 },

    #[error("trajectory left the chart domain at t = {time:.6}")]
    DomainExit { time: f64 },

    #[error("quadrature node {node:?} failed: {message}")]
    QuadratureNode { node: Vec<f64>, message: String },

    #[error("grid {0}x{1} too coarse; need at least 8x8")]
    GridTooCoarse(usize, usize),

    #[error("integer overflow in exact rational arithmetic")]
    RationalOverflow,

    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("periods are not commensurate: {0}")]
    NotCommensurate(String),

    #[error("declared periods differ; tensor sections need a common period")]
    PeriodMismatch,

    #[error("contact form is not in principal normal form: {0}")]
    NotNormalForm(String),

    #[error("equivariance violated: residual {residual:.3e} exceeds {tolerance:.3e}")]
    EquivarianceViolation { residual: f64, tolerance: f64 },

    #[error("minimal period undefined: {0}")]
    PeriodUndefined(String),

    #[error("candidate map is not an immersion at {point:?} (sigma_min = {sigma_min:.3e})")]
    NotImmersed { point: Vec<f64>, sigma_min: f64 },

    #[error("unknown catalog example `{0}`")]
    UnknownExample(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
