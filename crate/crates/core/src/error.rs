use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from its mirror by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix is not positive definite: pivot {index} is {value:e}")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("covariance is indefinite at pivot {index} (value {value:e})")]
    Indefinite { index: usize, value: f64 },

    #[error("monomial degree {degree} exceeds the supported maximum of {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("observation covariance is singular: pivot {index} is {value:e} (relative threshold {threshold:e})")]
    SingularCovariance { index: usize, value: f64, threshold: f64 },

    #[error("reduction vector is unsuitable: Ψ has minimum eigenvalue {min_eigenvalue:e} below {threshold:e}")]
    UnsuitableReduction { min_eigenvalue: f64, threshold: f64 },

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
