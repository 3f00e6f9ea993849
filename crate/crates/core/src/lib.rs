//! Exact computations on polyhedral convex sets: polars and the D-set
//! decomposition of the polar, slack matrices, cone factorizations of slack
//! matrices, and the cone lifts those factorizations induce.
//!
//! All arithmetic is exact over the rationals or a real quadratic field
//! `Q(sqrt d)`. Floating point appears only inside the nonnegative
//! factorization search, whose candidates are re-verified exactly before
//! they are reported.

pub mod factorization;
pub mod io;
pub mod lift;
pub mod linalg;
pub mod lp;
pub mod polar;
pub mod polyhedron;
pub mod scalar;
pub mod slack;

pub use factorization::{ConeKind, Factorization};
pub use lift::Lift;
pub use linalg::{AffineSubspace, Matrix, Vector};
pub use polar::PolarData;
pub use polyhedron::{HRep, Polyhedron, VRep};
pub use scalar::{Domain, Scalar};
pub use slack::SlackMatrix;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mixed radicands sqrt({0}) and sqrt({1}) in one instance")]
    MixedRadicands(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("polyhedron contains lines")]
    LinesPresent,
    #[error("polyhedron is not full dimensional")]
    NotFullDimensional,
    #[error("polyhedron is a translated cone")]
    TranslatedCone,
    #[error("the line-free component is a translated cone")]
    TranslatedComponent,
    #[error("polyhedron is not a pointed cone with apex at the origin")]
    NotPointedCone,
    #[error("representations disagree: {0}")]
    RepresentationMismatch(String),
    #[error("columns of Q are not pairwise orthogonal")]
    QNotOrthogonal,
    #[error("matrix rank {0} is below 2")]
    RankTooSmall(usize),
    #[error("instance exceeds size cap: {0}")]
    SizeCap(String),
    #[error("need at least {needed} sample points, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("factorization does not verify: {0}")]
    FactorizationMismatch(String),
    #[error("lift system does not determine x uniquely: {0}")]
    DegenerateSystem(String),
    #[error("lineality factors are missing")]
    MissingLinealityFactors,
    #[error("inconsistent linear system")]
    InconsistentSystem,
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
