use thiserror::Error;

/// Errors raised by the certification pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ray index triple ({0},{1},{2}) for {3}: {4}")]
    InvalidTriple(usize, usize, usize, char, &'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("affine span is not coordinate aligned (dim {dim}, {varying} varying coordinates)")]
    NotCoordinateAligned { dim: usize, varying: usize },

    #[error("mixed volume needs exactly {expected} polytopes, got {got}")]
    ArgumentCount { expected: usize, got: usize },

    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),

    #[error("cone {cone:?} is not a face of {parent:?}")]
    NotAFace {
        cone: Vec<usize>,
        parent: Vec<usize>,
    },

    #[error("no maximal cone contains {0:?}")]
    NoContainingCone(Vec<usize>),

    #[error("fan consistency failure: {0}")]
    Fan(String),

    #[error("saturation check failed on stratum {cone:?}: {points} lattice points vs {monomials} monomials")]
    Saturation {
        cone: Vec<usize>,
        points: usize,
        monomials: usize,
    },

    #[error("zero-dimensional stratum {0:?} lies on the variety; point-count and mixed-volume semantics disagree")]
    PointStratum(Vec<usize>),

    #[error("series precision exhausted: need {needed}, have {have}")]
    Precision { needed: i64, have: i64 },

    #[error("principal part does not cancel (surviving pole order {0})")]
    PrincipalPart(i64),

    #[error("non-integral Euler characteristic {0}")]
    NonIntegral(String),

    #[error("division by a series without unit constant term")]
    NonUnit,

    #[error("singular operator: {0}")]
    SingularOperator(&'static str),

    #[error("log-variable failed to cancel: {0}")]
    LogCancellation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
