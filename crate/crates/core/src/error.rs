use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Each variant corresponds to a mathematical precondition that did not hold or a
/// numerical procedure that could not reach its tolerance. [`Error::name`] gives a stable
/// identifier used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet arity mismatch: expected {expected} variable(s), found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("jet is not divisible: coefficient {coeff:e} at exponent {exponent} does not vanish")]
    NotDivisible { exponent: usize, coeff: f64 },
    #[error("inner jet has nonzero constant term {0:e}")]
    NonZeroConstant(f64),
    #[error("jet constant term {0:e} is not strictly positive")]
    NonPositiveConstant(f64),
    #[error("jet order {have} is too low, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("curve is regular at the origin")]
    NotSingular,
    #[error("degenerate singular curve: second derivative vanishes")]
    Degenerate,
    #[error("singular point is not of (2,3)-type")]
    Not23Type,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("singular point of the curve at t = {0}")]
    SingularPoint(f64),
    #[error("torsion undefined at t = {t} (curvature {kappa:e})")]
    UndefinedTorsion { t: f64, kappa: f64 },

    #[error("surface germ is not in adapted coordinates")]
    NotAdapted,
    #[error("surface germ is not a front at the origin")]
    NotFront,
    #[error("surface germ is not a cuspidal edge")]
    NotCuspidalEdge,
    #[error("boundary velocity vanishes at the origin")]
    DegenerateBoundary,
    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),

    #[error("boundary is not transverse to the kernel (case 1 required)")]
    NotCase1,
    #[error("boundary is not tangent to the kernel (case 2 required)")]
    NotCase2,
    #[error("boundary image has vanishing second derivative")]
    DegenerateContact,
    #[error("invariant is undefined for these coefficients: {0}")]
    DegenerateInvariant(&'static str),
    #[error("reparametrization has the wrong derivative: {0}")]
    InvalidReparametrization(String),

    #[error("rank of df at the origin is {0}, expected 1")]
    WrongRank(usize),
    #[error("umbilic curvature is not defined for a non-degenerate parabola")]
    NotDefined,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(&'static str),

    #[error("sampled data is on a different grid")]
    GridMismatch,
}

impl Error {
    /// Variant name, as reported by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NonZeroConstant(_) => "NonZeroConstant",
            Error::NonPositiveConstant(_) => "NonPositiveConstant",
            Error::InsufficientOrder { .. } => "InsufficientOrder",
            Error::InvalidData(_) => "InvalidData",
            Error::NotSingular => "NotSingular",
            Error::Degenerate => "Degenerate",
            Error::Not23Type => "Not23Type",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::SingularPoint(_) => "SingularPoint",
            Error::UndefinedTorsion { .. } => "UndefinedTorsion",
            Error::NotAdapted => "NotAdapted",
            Error::NotFront => "NotFront",
            Error::NotCuspidalEdge => "NotCuspidalEdge",
            Error::DegenerateBoundary => "DegenerateBoundary",
            Error::LinearSolveFailure(_) => "LinearSolveFailure",
            Error::NotCase1 => "NotCase1",
            Error::NotCase2 => "NotCase2",
            Error::DegenerateContact => "DegenerateContact",
            Error::DegenerateInvariant(_) => "DegenerateInvariant",
            Error::InvalidReparametrization(_) => "InvalidReparametrization",
            Error::WrongRank(_) => "WrongRank",
            Error::NotDefined => "NotDefined",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::GridMismatch => "GridMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
