use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("matrix is not semisimple within tolerance ({0})")]
    NonSemisimple(String),

    #[error("ambiguous eigenvalue moduli: {0}")]
    AmbiguousModuli(String),

    #[error("element is not hyperbolic (s(g) = {s:?})")]
    NotHyperbolic { s: Option<f64> },

    #[error("element is not regular: {0}")]
    NotRegular(String),

    #[error("linear part acts non-trivially on its neutral subspace (residual {residual:e})")]
    NontrivialNeutralAction { residual: f64 },

    #[error("translation has no component along the neutral subspace")]
    ZeroNeutralTranslation,

    #[error("ill-conditioned linear solve (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("zero vector or zero subspace where a nonzero one is required")]
    ZeroSubspace,

    #[error("linearly dependent basis (smallest singular value {sigma_min:e})")]
    DependentBasis { sigma_min: f64 },

    #[error("quadratic form is degenerate (smallest |eigenvalue| {0:e})")]
    DegenerateForm(f64),

    #[error("form signature ({p},{q}) does not fit: {reason}")]
    WrongSignature { p: usize, q: usize, reason: String },

    #[error("subspace is not maximal isotropic (residual {residual:e}, dim {dim})")]
    NotIsotropic { residual: f64, dim: usize },

    #[error("subspaces are not transversal (margin {margin:e})")]
    NotTransversal { margin: f64 },

    #[error("linear part does not preserve the form (residual {residual:e})")]
    NotInGroup { residual: f64 },

    #[error("splitting is not preserved by the element (residual {residual:e})")]
    SplittingNotPreserved { residual: f64 },

    #[error("no ordering of the four elements puts the intersection line in the cone")]
    NoConeOrdering,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("no sampler for family {0}")]
    NoSampler(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid group file: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
