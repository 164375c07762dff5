use thiserror::Error;

/// Every failure the library can report. `code()` gives the stable
/// machine-readable class used by the CLI and the C ABI.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("slot {0} is not glued exactly once")]
    UngluedSlot(String),
    #[error("triangle {0}: vectors do not close or area is not positive")]
    TriangleIneq(String),
    #[error("gluing {0} does not match its edge vectors")]
    GluingMismatch(String),
    #[error("surface is disconnected")]
    Disconnected,
    #[error("bad cone angle at vertex {vertex}: {msg}")]
    BadConeAngle { vertex: usize, msg: String },
    #[error("Gauss-Bonnet violated: sum of orders {sum} != {expected}")]
    GaussBonnetViolation { sum: i64, expected: i64 },
    #[error("standing hypothesis 3g+n-3 >= 2 fails (g={g}, n={n})")]
    ComplexityTooLow { g: i64, n: usize },
    #[error("double cover requested for a surface with trivial holonomy")]
    TrivialHolonomyInput,
    #[error("curve is inessential")]
    InessentialCurve,
    #[error("tightening did not converge: {0}")]
    Nonconvergent(String),
    #[error("unfolding budget of {0} triangles exceeded")]
    BudgetExceeded(usize),
    #[error("relation matrix has rank {rank}, expected {expected}")]
    RankDefect { rank: usize, expected: usize },
    #[error("combinatorics mismatch: {0}")]
    CombinatoricsMismatch(String),
    #[error("perturbation produced a degenerate triangle ({0})")]
    DegenerateTriangle(usize),
    #[error("first chart coordinate vanishes")]
    ZeroFirstCoordinate,
    #[error("crossing data inconsistent: {0}")]
    SingularSystem(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("no segment found within budget L={0}")]
    NotFoundWithinBudget(f64),
    #[error("certificate construction failed for edge {edge}: {msg}")]
    ConstructionFailed { edge: usize, msg: String },
    #[error("angle violation: {0}")]
    AngleViolation(String),
    #[error("unstable point: {0}")]
    UnstablePoint(String),
    #[error("Jacobian null space is trivial")]
    NullityZero,
    #[error("path left a stability region after {0} steps")]
    StabilityWall(usize),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "PARSE_ERROR",
            Error::UngluedSlot(_) => "UNGLUED_SLOT",
            Error::TriangleIneq(_) => "TRIANGLE_INEQ",
            Error::GluingMismatch(_) => "GLUING_MISMATCH",
            Error::Disconnected => "DISCONNECTED",
            Error::BadConeAngle { .. } => "BAD_CONE_ANGLE",
            Error::GaussBonnetViolation { .. } => "GAUSS_BONNET_VIOLATION",
            Error::ComplexityTooLow { .. } => "COMPLEXITY_TOO_LOW",
            Error::TrivialHolonomyInput => "TRIVIAL_HOLONOMY_INPUT",
            Error::InessentialCurve => "INESSENTIAL_CURVE",
            Error::Nonconvergent(_) => "NONCONVERGENT",
            Error::BudgetExceeded(_) => "BUDGET_EXCEEDED",
            Error::RankDefect { .. } => "RANK_DEFECT",
            Error::CombinatoricsMismatch(_) => "COMBINATORICS_MISMATCH",
            Error::DegenerateTriangle(_) => "DEGENERATE_TRIANGLE",
            Error::ZeroFirstCoordinate => "ZERO_FIRST_COORDINATE",
            Error::SingularSystem(_) => "SINGULAR_SYSTEM",
            Error::DegenerateInput(_) => "DEGENERATE_INPUT",
            Error::NotFoundWithinBudget(_) => "NOT_FOUND_WITHIN_BUDGET",
            Error::ConstructionFailed { .. } => "CONSTRUCTION_FAILED",
            Error::AngleViolation(_) => "ANGLE_VIOLATION",
            Error::UnstablePoint(_) => "UNSTABLE_POINT",
            Error::NullityZero => "NULLITY_ZERO",
            Error::StabilityWall(_) => "STABILITY_WALL",
            Error::InvalidCurve(_) => "INVALID_CURVE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::CheckFailed(_) => "CHECK_FAILED",
            Error::Io(_) => "IO_ERROR",
        }
    }

    /// Process exit status for this class: 10 plus its position in
    /// [`Error::CODES`].
    pub fn status(&self) -> i32 {
        10 + Self::CODES.iter().position(|c| *c == self.code()).unwrap() as i32
    }

    pub const CODES: [&'static str; 28] = [
        "PARSE_ERROR",
        "UNGLUED_SLOT",
        "TRIANGLE_INEQ",
        "GLUING_MISMATCH",
        "DISCONNECTED",
        "BAD_CONE_ANGLE",
        "GAUSS_BONNET_VIOLATION",
        "COMPLEXITY_TOO_LOW",
        "TRIVIAL_HOLONOMY_INPUT",
        "INESSENTIAL_CURVE",
        "NONCONVERGENT",
        "BUDGET_EXCEEDED",
        "RANK_DEFECT",
        "COMBINATORICS_MISMATCH",
        "DEGENERATE_TRIANGLE",
        "ZERO_FIRST_COORDINATE",
        "SINGULAR_SYSTEM",
        "DEGENERATE_INPUT",
        "NOT_FOUND_WITHIN_BUDGET",
        "CONSTRUCTION_FAILED",
        "ANGLE_VIOLATION",
        "UNSTABLE_POINT",
        "NULLITY_ZERO",
        "STABILITY_WALL",
        "INVALID_CURVE",
        "INVALID_ARGUMENT",
        "CHECK_FAILED",
        "IO_ERROR",
    ];
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
