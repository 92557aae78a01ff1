use thiserror::Error;

/// Every failure the library can report. `name()` gives the stable
/// machine-readable identifier used by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator sample at t={t} is not symmetric (asymmetry {asym:e})")]
    NonSymmetricGenerator { t: f64, asym: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("integration step control failed near t={0}")]
    IntegrationDivergence(f64),
    #[error("eigenvalue solver failed: {0}")]
    EigenSolverFailure(String),
    #[error("endpoint is degenerate (nullity {0})")]
    DegenerateEndpoint(usize),
    #[error("could not resolve crossing: {0}")]
    CrossingResolutionFailure(String),
    #[error("index engines disagree: crossing form {crossing}, winding {winding}")]
    EngineDisagreement { crossing: i64, winding: i64 },
    #[error("no stable perturbation parameter found")]
    EpsilonSelectionFailure,
    #[error("eigenvalue continuation is ambiguous: {0}")]
    ContinuationAmbiguity(String),
    #[error("breakpoints too close to resolve one-sided limits")]
    GapTooSmall,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("certificate contradicts its hypotheses: {0}")]
    CertificateViolation(String),

    #[error("cone is not strictly convex")]
    NotStrictlyConvex,
    #[error("cone has empty interior")]
    EmptyInterior,
    #[error("normal {0} is not primitive")]
    NonPrimitiveNormal(usize),
    #[error("normal {0} is redundant")]
    RedundantNormal(usize),
    #[error("face {0:?} lies on more facets than its codimension")]
    FaceFacetCountMismatch(Vec<usize>),
    #[error("normals {0:?} cannot be completed to a lattice basis")]
    NotIntegralBasisCompletable(Vec<usize>),
    #[error("vector is not in the interior of the dual cone")]
    NotInInteriorDualCone,
    #[error("edge basis is degenerate")]
    DegenerateEdgeBasis,
    #[error("Reeb vector is degenerate: {0}")]
    DegenerateReebVector(String),
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("perturbation failed after bounded retries")]
    PerturbationFailure,
    #[error("element is not in the subgroup K")]
    NotInSubgroupK,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("Morse index {0} out of range")]
    MorseIndexOutOfRange(i64),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("pinching violated: R/r = {ratio} >= {limit}")]
    PinchingViolated { ratio: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonSymmetricGenerator { .. } => "NonSymmetricGenerator",
            Error::InvalidPath(_) => "InvalidPath",
            Error::IntegrationDivergence(_) => "IntegrationDivergence",
            Error::EigenSolverFailure(_) => "EigenSolverFailure",
            Error::DegenerateEndpoint(_) => "DegenerateEndpoint",
            Error::CrossingResolutionFailure(_) => "CrossingResolutionFailure",
            Error::EngineDisagreement { .. } => "EngineDisagreement",
            Error::EpsilonSelectionFailure => "EpsilonSelectionFailure",
            Error::ContinuationAmbiguity(_) => "ContinuationAmbiguity",
            Error::GapTooSmall => "GapTooSmall",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::CertificateViolation(_) => "CertificateViolation",
            Error::NotStrictlyConvex => "NotStrictlyConvex",
            Error::EmptyInterior => "EmptyInterior",
            Error::NonPrimitiveNormal(_) => "NonPrimitiveNormal",
            Error::RedundantNormal(_) => "RedundantNormal",
            Error::FaceFacetCountMismatch(_) => "FaceFacetCountMismatch",
            Error::NotIntegralBasisCompletable(_) => "NotIntegralBasisCompletable",
            Error::NotInInteriorDualCone => "NotInInteriorDualCone",
            Error::DegenerateEdgeBasis => "DegenerateEdgeBasis",
            Error::DegenerateReebVector(_) => "DegenerateReebVector",
            Error::CutoffTooSmall(_) => "CutoffTooSmall",
            Error::PerturbationFailure => "PerturbationFailure",
            Error::NotInSubgroupK => "NotInSubgroupK",
            Error::Overflow => "Overflow",
            Error::MorseIndexOutOfRange(_) => "MorseIndexOutOfRange",
            Error::HypothesesNotMet(_) => "HypothesesNotMet",
            Error::PinchingViolated { .. } => "PinchingViolated",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
