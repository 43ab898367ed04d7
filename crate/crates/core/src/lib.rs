//! Sub-Riemannian geodesics on the roto-translation group `SE(2)` and the
//! existence of minimizers for the curve-completion problem they model.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod geodesic;
pub mod optimality;
pub mod oracle;
pub mod pendulum;
pub mod pose;
pub mod solver;
pub mod symmetry;

pub use error::{Error, Result};
pub use geodesic::{exponential_map, Geodesic};
pub use pendulum::{Covector, GeodesicClass, PendulumState};
pub use pose::{Frame, Pose};
