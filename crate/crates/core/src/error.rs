use thiserror::Error;

use crate::group::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("point has norm {norm}, outside the closed unit ball")]
    OutsideBall { norm: f64 },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("hyperbolic distance is infinite: argument has norm {norm} (not an interior point)")]
    InfiniteDistance { norm: f64 },

    #[error("point lies at the center of the inversion sphere")]
    SphereCenterSingularity,

    #[error("distance ratio undefined for coincident points")]
    UndefinedRatio,

    #[error("no boundary-orthogonal sphere exists for a center of norm {norm} (need > 1)")]
    NoOrthogonalSphere { norm: f64 },

    #[error("sphere radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("sphere is not orthogonal to the unit sphere: | |c|^2 - 1 - r^2 | = {residual:e}")]
    NotBoundaryOrthogonal { residual: f64 },

    #[error("matrix is not orthogonal: max |A^T A - I| = {residual:e}")]
    NotOrthogonalMatrix { residual: f64 },

    #[error("isometry fixes the origin and has no isometric sphere")]
    NoIsometricSphere,

    #[error("word is not freely reduced at position {position}")]
    NotReduced { position: usize },

    #[error("generator index {index} out of range (group has {generators} generators)")]
    GeneratorOutOfRange { index: usize, generators: usize },

    #[error("cannot parse word {0:?}")]
    WordSyntax(String),

    #[error("invalid Schottky group:\n{0}")]
    InvalidGroup(Box<ValidationReport>),

    #[error("disk cover level {level} is too deep: radius {radius:e} below floor")]
    CoverTooDeep { level: usize, radius: f64 },

    #[error("image of a pairing disk under a prefix is not a bounded disk (level {level})")]
    CoverDegenerate { level: usize },

    #[error("enumeration of {words} words exceeds the cap of {cap} (BALLCOLLAR_MAX_WORDS)")]
    EnumerationTooLarge { words: u128, cap: u128 },

    #[error("level must be at least {min}, got {level}")]
    LevelTooSmall { level: usize, min: usize },

    #[error("point is not certifiable: {0}")]
    NotCertifiable(String),

    #[error("constant must be >= 1, got {0}")]
    ConstantBelowOne(f64),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("rejection sampling failed: {0}")]
    Sampling(String),
}
