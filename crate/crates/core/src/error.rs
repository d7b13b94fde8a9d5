use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CdError {
    #[error("division by an element of norm {0:e}")]
    ZeroDivision(f64),
    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: u8 },
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("zero argument in {0}")]
    ZeroArgument(&'static str),
    #[error("degenerate angles: {0}")]
    DegenerateAngles(String),
    #[error("real parts differ: {0} vs {1}")]
    RePartMismatch(f64, f64),
    #[error("point outside the declared domain: {0}")]
    OutOfDomain(String),
    #[error("seed undefined at {0}")]
    SeedSingularity(String),
    #[error("series evaluated outside its radius: |z - y0| = {dist}, radius {radius}")]
    DivergenceRadius { dist: f64, radius: f64 },
    #[error("finite-difference step underflows at scale {0:e}")]
    StepUnderflow(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("branch failure: {0}")]
    BranchFailure(String),
    #[error("function vanishes on the path at t = {0}")]
    ZeroOnPath(f64),
    #[error("argument unwrap ambiguous at t = {0}")]
    UnwrapAmbiguity(f64),
    #[error("Re p = {re_p} not inside the convergence region ({detail})")]
    DomainOfConvergence { re_p: f64, detail: String },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("empty strip: s0 = {0}, s1 = {1}")]
    EmptyStrip(f64, f64),
    #[error("inversion truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("unsupported inversion line: {0}")]
    UnsupportedLine(String),
    #[error("pole at {0}")]
    PoleAt(String),
    #[error("zeta has its pole at 1")]
    PoleAtOne,
    #[error("outside the domain of the representation: {0}")]
    DomainOfRepresentation(String),
    #[error("argument must be positive, got {0}")]
    NonPositive(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CdError>;
