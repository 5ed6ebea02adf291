use thiserror::Error;

/// Errors raised by the splitting toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty state")]
    EmptyState,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("stability function pole")]
    StabilityPole,

    #[error("tridiagonal breakdown at row {row}")]
    TridiagonalBreakdown { row: usize },

    #[error("Péclet bound violated: mu = {mu} > 2")]
    PecletBound { mu: f64 },

    #[error("stage solve failed in pass {pass}, stage {stage}: {source}")]
    StageSolve {
        pass: usize,
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("factorization failed for part {part}, component {component}")]
    Factorization { part: usize, component: usize },

    #[error("degenerate element {element} (zero area)")]
    DegenerateElement { element: usize },

    #[error("invalid theta {theta} for scheme {scheme}")]
    InvalidTheta { scheme: &'static str, theta: f64 },

    #[error("time step must be positive, got {dt}")]
    InvalidStep { dt: f64 },

    #[error("interval length is not an integer number of steps (dt = {dt}, span = {span})")]
    NonIntegerSteps { dt: f64, span: f64 },

    #[error("blow-up at step {step}")]
    BlowUp { step: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
