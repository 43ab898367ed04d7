use thiserror::Error;

/// Errors produced by the geodesic kernels and the boundary-value solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic modulus {0} outside [0, 1]")]
    ModulusDomain(f64),

    #[error("covector is off the unit Hamiltonian level: |2H - 1| = {0:e}")]
    OffLevel(f64),

    #[error("operation not supported for geodesic class {0}")]
    UnsupportedClass(crate::pendulum::GeodesicClass),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("no Maxwell time found in ({lo}, {hi}) for an oscillating-phase geodesic")]
    MaxwellSearch { lo: f64, hi: f64 },

    #[error("shooting did not converge; best endpoint residual {best_residual:e}")]
    Unsolved { best_residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
