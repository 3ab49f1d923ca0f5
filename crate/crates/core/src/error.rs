use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrameError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("map has no value for atom {atom:?}")]
    MapDomainMismatch { atom: Vec<f64> },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),

    #[error("symmetric matrix input is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("matrix is not positive semi-definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is singular (smallest eigenvalue {min_eigenvalue:e})")]
    Singular { min_eigenvalue: f64 },

    #[error("measure is not a frame (lower frame bound {lower_bound:e})")]
    NotAFrame { lower_bound: f64 },

    #[error("k = {k} is below 1/2")]
    KTooSmall { k: f64 },

    #[error("reference measure is not tight with bound {expected} (bounds {lower}, {upper})")]
    EtaNotTight {
        lower: f64,
        upper: f64,
        expected: f64,
    },

    #[error("Bessel bound {bound} is not valid (largest frame operator eigenvalue {lambda_max})")]
    InvalidBesselBound { bound: f64, lambda_max: f64 },

    #[error("exponent p = {p} is out of range")]
    BadExponent { p: f64 },

    #[error("coefficients do not reconstruct f (error {error:e})")]
    NotAReconstruction { error: f64 },

    #[error("map does not define a dual frame (residual {residual:e})")]
    NotADual { residual: f64 },

    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("measure is not supported on the unit sphere (max deviation {max_deviation:e})")]
    NotSphereSupported { max_deviation: f64 },

    #[error("invalid linear program: {0}")]
    InvalidProblem(String),

    #[error("numerical breakdown in simplex: {0}")]
    NumericalBreakdown(String),
}

impl FrameError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            FrameError::InvalidMeasure(_) => "InvalidMeasure",
            FrameError::DimMismatch { .. } => "DimMismatch",
            FrameError::MapDomainMismatch { .. } => "MapDomainMismatch",
            FrameError::InvalidMap(_) => "InvalidMap",
            FrameError::InvalidCoupling(_) => "InvalidCoupling",
            FrameError::NotSymmetric { .. } => "NotSymmetric",
            FrameError::NonConvergence { .. } => "NonConvergence",
            FrameError::NotPsd { .. } => "NotPSD",
            FrameError::Singular { .. } => "Singular",
            FrameError::NotAFrame { .. } => "NotAFrame",
            FrameError::KTooSmall { .. } => "KTooSmall",
            FrameError::EtaNotTight { .. } => "EtaNotTight",
            FrameError::InvalidBesselBound { .. } => "InvalidBesselBound",
            FrameError::BadExponent { .. } => "BadExponent",
            FrameError::NotAReconstruction { .. } => "NotAReconstruction",
            FrameError::NotADual { .. } => "NotADual",
            FrameError::NotOrthogonal { .. } => "NotOrthogonal",
            FrameError::NotUnitVector { .. } => "NotUnitVector",
            FrameError::NotSphereSupported { .. } => "NotSphereSupported",
            FrameError::InvalidProblem(_) => "InvalidProblem",
            FrameError::NumericalBreakdown(_) => "NumericalBreakdown",
        }
    }
}
