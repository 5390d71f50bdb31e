use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} out of range 1..=12")]
    DegreeOutOfRange(u32),
    #[error("field of order {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("cannot embed GF({src}) into GF({dst})")]
    IncompatibleEmbedding { src: u64, dst: u64 },
    #[error("no root of the source modulus in the target field")]
    NoEmbeddingRoot,
    #[error("q = {q} is not compatible with a field of order {order}")]
    IncompatibleRoot { q: u64, order: u64 },
    #[error("point is not in the plane")]
    PointNotInPlane,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("classes belong to different surfaces")]
    SurfaceMismatch,
    #[error("divisor class is not integral")]
    NonIntegral,
    #[error("surface is not the blowup at all rational points")]
    NotAllPointsBlowup,
    #[error("centers are not pairwise distinct")]
    RepeatedCenter,
    #[error("negative h^1 = {0}: internal inconsistency")]
    NegativeH1(i64),
    #[error("boundary curves fail the disjoint smooth rational check: {0}")]
    BoundaryNotDisjoint(String),
    #[error("coefficient {0} outside [0, 1)")]
    BoundaryCoefficient(String),
    #[error("mode requires q = 2, got q = {0}")]
    RequiresQ2(u64),
    #[error("no ample perturbation found")]
    NoAmplePerturbation,
    #[error("self-intersection {0} outside {{-1, -2}}")]
    SelfIntersectionOutOfDomain(i64),
    #[error("undetermined candidates remain: {0}")]
    Undetermined(String),
    #[error("three of the four points are collinear")]
    Collinear,
    #[error("field must have characteristic 2")]
    RequiresChar2,
    #[error("points must be pairwise distinct")]
    RepeatedPoint,
    #[error("{0}")]
    Contradiction(String),
    #[error("configuration of {0} points out of range")]
    PointCount(usize),
    #[error("sampling budget of {0} attempts exhausted")]
    BudgetExhausted(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
