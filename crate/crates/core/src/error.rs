use thiserror::Error;

/// Errors shared by the geometric operations.
///
/// Degenerate inputs are reported, never silently patched: callers decide
/// whether a coincident pair or an absent tangent is an error for them.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("invalid curvature parameter: {0}")]
    InvalidCurvature(f64),
    #[error("point does not lie on the model surface (residual {0:.3e})")]
    InvalidPoint(f64),
    #[error("invalid disk radius {0}")]
    InvalidRadius(f64),
    #[error("coincident points admit no unique geodesic")]
    DegenerateGeodesic,
    #[error("antipodal points admit no unique geodesic")]
    AntipodalPoints,
    #[error("one disk contains the other: no outer common tangent")]
    NoTangent,
    #[error("coincident equal disks: infinite tangent family")]
    InfiniteTangentFamily,
    #[error("spherical configuration has no certified closed hemisphere (margin {0:.3e})")]
    HemisphereViolation(f64),
    #[error("configuration holds no disks")]
    EmptyConfiguration,
    #[error("boundary chain failed integrity checks: {0}")]
    ChainIntegrity(String),
    #[error("computed graph is not a tree: {0}")]
    TreeStructure(String),
    #[error("point lies outside the region")]
    OutsideRegion,
    #[error("spindle undefined: point separation {0:.6} exceeds 2*rho = {1:.6}")]
    SpindleUndefined(f64, f64),
    #[error("configuration too close to the projection pole")]
    PoleProximity,
    #[error("contraction generator unsupported for this plane: {0}")]
    UnsupportedGenerator(&'static str),
    #[error("rejection sampler exhausted after {0} attempts")]
    SamplerExhausted(usize),
    #[error("operation needs at least {0} disks")]
    TooFewDisks(usize),
    #[error("numerical solve failed: {0}")]
    SolveFailure(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
