use alloc::string::String;

/// Errors raised by the numerical core.
///
/// Several variants are diagnostic rather than fatal: they mark the point
/// where a computation would otherwise have to round a verdict.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vector is not timelike in R^(2,2): form value {form}")]
    NonTimelikeVector { form: f64 },
    #[error("point lies outside the affine chart x4 != 0")]
    ChartUndefined,
    #[error("points are not joined by a spacelike geodesic (form value {form})")]
    CausallyRelated { form: f64 },
    #[error("operands belong to different geometries")]
    GeometryMismatch,
    #[error("Newton projection did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },
    #[error("rank decision is ambiguous: singular value {value:e} within a factor {factor} of threshold {threshold:e}")]
    RankAmbiguous { value: f64, threshold: f64, factor: f64 },
    #[error("orbit point {word} left the affine chart")]
    ChartExit { word: String },
    #[error("orbit cloud is degenerate (coplanar) around a marked vertex")]
    DegenerateHull,
    #[error("marked vertex {vertex} is not a vertex of the hull")]
    NonVertexMarkedPoint { vertex: usize },
    #[error("orbit truncation too short to resolve the fundamental-domain faces")]
    TruncationTooShort,
    #[error("triangle with edge lengths ({a}, {b}, {c}) violates the strict triangle inequality")]
    TriangleInequalityViolation { a: f64, b: f64, c: f64 },
    #[error("point is outside the light cone of the origin")]
    OutsideCone,
    #[error("point lies on the singular locus of the Pogorelov map")]
    SingularRadius,
    #[error("least-squares fit is ill-conditioned (condition number {condition:e})")]
    IllConditionedFit { condition: f64 },
    #[error("operation requires a Fuchsian representation")]
    NotFuchsian,
    #[error("surface is not spacelike at the sampled point")]
    NonSpacelike,
    #[error("operator id +/- jb is degenerate (determinant {det:e})")]
    DegenerateOperator { det: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
