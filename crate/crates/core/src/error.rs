use thiserror::Error;

/// Errors raised while building or validating a combinatorial surface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("surface has no triangles")]
    NoTriangles,
    #[error("side ({triangle}, {side}) does not exist")]
    InvalidSide { triangle: usize, side: usize },
    #[error("side ({triangle}, {side}) is not glued to any other side")]
    UnpairedSide { triangle: usize, side: usize },
    #[error("side ({triangle}, {side}) appears in more than one gluing")]
    SideGluedTwice { triangle: usize, side: usize },
    #[error("gluings admit no consistent orientation (at side ({triangle}, {side}))")]
    OrientationConflict { triangle: usize, side: usize },
    #[error("gluing graph on triangles is disconnected")]
    Disconnected,
    #[error("surface has genus 0, no homology basis")]
    GenusZero,
}

/// Errors raised by multicurve construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("expected {expected} edge weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("odd weight sum in triangle {triangle}")]
    ParityViolation { triangle: usize },
    #[error("triangle inequality fails in triangle {triangle}")]
    TriangleInequalityViolation { triangle: usize },
    #[error("multicurve is empty")]
    EmptyCurve,
    #[error("expected {expected} orientations, got {got}")]
    OrientationCount { expected: usize, got: usize },
    #[error("orientation must be +1 or -1, got {0}")]
    BadOrientation(i64),
    #[error("curves live on different surfaces")]
    SurfaceMismatch,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Errors raised by the abstract cobordism calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("wiring mismatch: {0}")]
    WiringMismatch(String),
    #[error("piece with in={in_circles:?} out={out_circles:?} is a null cobordism")]
    NullPiece { in_circles: Vec<String>, out_circles: Vec<String> },
    #[error("level {level} consists entirely of annuli")]
    AllAnnuliLevel { level: usize },
    #[error("glued surface is disconnected")]
    DisconnectedGluing,
    #[error("euler characteristic {found} does not match genus {genus} (expected {expected})")]
    EulerMismatch { genus: i64, expected: i64, found: i64 },
    #[error("composite piece has non-integral or negative genus (chi={chi}, boundary={boundary})")]
    NegativeGenus { chi: i64, boundary: usize },
    #[error("a vertex has no faces")]
    VertexHasNoFaces,
    #[error("face index {index} out of range for {levels} levels")]
    FaceOutOfRange { index: usize, levels: usize },
    #[error("pants schedule needs a non-annular piece")]
    AnnulusInput,
    #[error("pants schedule needs a non-null piece")]
    NullInput,
    #[error("genus must be at least 2 to extend to a top simplex, got {0}")]
    GenusTooSmall(i64),
}

/// Errors raised by dual-graph reduction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("configuration vanished: the input cycle is null-homologous")]
    VanishedConfiguration,
    #[error("weights must be positive and sum to 1")]
    BadWeights,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Errors raised by the surgery retraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("base curve must be a single component, got {0}")]
    MultiComponentBase(usize),
    #[error("base curve is not reduced")]
    BaseNotReduced,
    #[error("no crossings between the configuration and the base curve")]
    NoCrossings,
    #[error("base curve and cycle represent different homology classes")]
    ClassMismatch,
    #[error("labeling takes {0} values, expected 2")]
    KappaOverflow(usize),
    #[error("configuration crosses the base curve")]
    NotDisjoint,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Errors raised by bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("the zero class has no reduced representatives")]
    ZeroClass,
    #[error("class has {got} coordinates, surface needs {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed snapshot: {0}")]
    Malformed(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl SurfaceError {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceError::NoTriangles => "NoTriangles",
            SurfaceError::InvalidSide { .. } => "InvalidSide",
            SurfaceError::UnpairedSide { .. } => "UnpairedSide",
            SurfaceError::SideGluedTwice { .. } => "SideGluedTwice",
            SurfaceError::OrientationConflict { .. } => "OrientationConflict",
            SurfaceError::Disconnected => "Disconnected",
            SurfaceError::GenusZero => "GenusZero",
        }
    }
}

impl CurveError {
    pub fn name(&self) -> &'static str {
        match self {
            CurveError::WeightCount { .. } => "WeightCount",
            CurveError::ParityViolation { .. } => "ParityViolation",
            CurveError::TriangleInequalityViolation { .. } => "TriangleInequalityViolation",
            CurveError::EmptyCurve => "EmptyCurve",
            CurveError::OrientationCount { .. } => "OrientationCount",
            CurveError::BadOrientation(_) => "BadOrientation",
            CurveError::SurfaceMismatch => "SurfaceMismatch",
            CurveError::Internal(_) => "Internal",
        }
    }
}

impl CobordismError {
    pub fn name(&self) -> &'static str {
        match self {
            CobordismError::WiringMismatch(_) => "WiringMismatch",
            CobordismError::NullPiece { .. } => "NullPiece",
            CobordismError::AllAnnuliLevel { .. } => "AllAnnuliLevel",
            CobordismError::DisconnectedGluing => "DisconnectedGluing",
            CobordismError::EulerMismatch { .. } => "EulerMismatch",
            CobordismError::NegativeGenus { .. } => "NegativeGenus",
            CobordismError::VertexHasNoFaces => "VertexHasNoFaces",
            CobordismError::FaceOutOfRange { .. } => "FaceOutOfRange",
            CobordismError::AnnulusInput => "AnnulusInput",
            CobordismError::NullInput => "NullInput",
            CobordismError::GenusTooSmall(_) => "GenusTooSmall",
        }
    }
}

impl ReductionError {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionError::VanishedConfiguration => "VanishedConfiguration",
            ReductionError::BadWeights => "BadWeights",
            ReductionError::WeightCount { .. } => "WeightCount",
            ReductionError::Cobordism(e) => e.name(),
            ReductionError::Curve(e) => e.name(),
            ReductionError::Invariant(_) => "Invariant",
        }
    }
}

impl SurgeryError {
    pub fn name(&self) -> &'static str {
        match self {
            SurgeryError::MultiComponentBase(_) => "MultiComponentBase",
            SurgeryError::BaseNotReduced => "BaseNotReduced",
            SurgeryError::NoCrossings => "NoCrossings",
            SurgeryError::ClassMismatch => "ClassMismatch",
            SurgeryError::KappaOverflow(_) => "KappaOverflow",
            SurgeryError::NotDisjoint => "NotDisjoint",
            SurgeryError::InvalidConfiguration(_) => "InvalidConfiguration",
            SurgeryError::Curve(e) => e.name(),
            SurgeryError::Cobordism(e) => e.name(),
            SurgeryError::Invariant(_) => "Invariant",
        }
    }
}

impl EnumerationError {
    pub fn name(&self) -> &'static str {
        match self {
            EnumerationError::ZeroClass => "ZeroClass",
            EnumerationError::ClassLength { .. } => "ClassLength",
            EnumerationError::Precondition(_) => "Precondition",
            EnumerationError::Malformed(_) => "Malformed",
            EnumerationError::Surface(e) => e.name(),
            EnumerationError::Curve(e) => e.name(),
        }
    }
}
