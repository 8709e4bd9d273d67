use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants split into two families: schema/input problems and geometric
/// precondition failures. The CLI maps the latter to exit code 3 via
/// [`Error::is_geometric`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex set spans an affine hull of dimension {found}, expected a full-dimensional body in R^{expected}")]
    NotFullDimensional { expected: usize, found: usize },

    #[error("origin is not an interior point of the body (smallest support value {min_support:e})")]
    OriginNotInterior { min_support: f64 },

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("every facet of the hull was degenerate")]
    DegenerateFacet,

    #[error("could not draw a non-degenerate sample after {attempts} attempts")]
    DegenerateSample { attempts: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("potential is not differentiable at the requested point")]
    NonSmoothPoint,

    #[error("point lies outside the sampled grid")]
    OutsideDomain,

    #[error("Legendre transform is not positive off the origin (value {value:e} at radius {radius})")]
    PositivityViolation { value: f64, radius: f64 },

    #[error("{backend} backend is not available for the {family} family")]
    BackendUnavailable { family: &'static str, backend: &'static str },

    #[error("potential has a restricted domain; the operation needs dom = R^n")]
    RestrictedDomain,

    #[error("linear map is singular")]
    SingularMap,

    #[error("measure is not isotropic (residual {residual:e})")]
    NotIsotropic { residual: f64 },

    #[error("weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("image of atom {index} is not a unit vector (norm {norm})")]
    NonUnitImage { index: usize, norm: f64 },

    #[error("function is not in isotropic position (LYZ residual {residual:e})")]
    NotIsotropicPosition { residual: f64 },

    #[error("barycenter of the surface-area measure is off the origin by {offset:e}")]
    BarycenterOffOrigin { offset: f64 },

    #[error("level {t} is outside (0, 1]")]
    InvalidLevel { t: f64 },

    #[error("body is not origin-symmetric (vertex {index} has no antipode)")]
    NotOriginSymmetric { index: usize },

    #[error("grid potential does not attain a strict minimum at the origin")]
    OriginNotMinimum,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {n} for this operation")]
    UnsupportedDimension { n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a geometric or analytic precondition, false for
    /// malformed input and I/O.
    pub fn is_geometric(&self) -> bool {
        !matches!(
            self,
            Error::Json(_) | Error::Io(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
