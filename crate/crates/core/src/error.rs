use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inadmissible angle indices ({p}, {q}, {r})")]
    InadmissibleAngles { p: u32, q: u32, r: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("root vector is not unit length (norm {norm})")]
    NonUnitRoot { norm: f64 },

    #[error("degenerate linear part (determinant {det})")]
    DegenerateMatrix { det: f64 },

    #[error("matrix is not orthogonal (deviation {deviation:e})")]
    NonOrthogonal { deviation: f64 },

    #[error("point is not strictly inside the domain")]
    PointNotInterior,

    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),

    #[error("domain is unbounded; use the wedge routines instead")]
    UnboundedDomain,

    #[error("quadrature did not converge: last {last}, previous {previous}")]
    ConvergenceFailure { last: f64, previous: f64 },

    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),

    #[error("exterior angles sum to {sum}, not 2π")]
    NotClosedPolygon { sum: f64 },

    #[error("wrong dimension: expected {expected}, domain has {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("unknown kind: {0}")]
    UnknownKind(String),

    #[error("identity outside its domain of validity: {0}")]
    DomainViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveTime(t))
    }
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
