use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("transfer-matrix prefactor (eta - eta*) xi+ chi = {0:e} is too small; parameters sit on a removable degenerate surface")]
    DegenerateDivision(f64),
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("transmission denominator |D| = {0:e} below threshold; too close to the spectral singularity")]
    SingularTransmission(f64),
    #[error("lattice equations are numerically rank deficient")]
    SingularSystem,
    #[error("critical point violates sin^2(2 phi_c) = gamma_c^2, cos k_c = 0 (residual {0:e})")]
    InvalidCriticalPoint(f64),
    #[error("eigenstate construction needs |chi| > tol, got {0:e}")]
    SingularConstruction(f64),
    #[error("no real singularity locus for gamma = {0} (need 0 < gamma <= 1)")]
    NoLocus(f64),
    #[error("dimension mismatch: matrix {matrix}, state {state}")]
    DimensionMismatch { matrix: usize, state: usize },
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
