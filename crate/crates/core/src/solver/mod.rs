//! Boundary-value problems between two poses.
//!
//! The mechanical problem is solved by multi-start shooting on the initial
//! pendulum state and the duration. On top of it sit the projective
//! variant, the existence verdict for curves with unit planar speed, and
//! sweeps over grids of targets.

mod atlas;
mod exec;
mod existence;
mod shooting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pose::{Frame, Pose};

pub use atlas::{atlas, ring_sweep, ring_transitions, AtlasEntry, AtlasSpec, RingEntry, RingSpec};
pub use exec::{configure_threads, Execution, THREADS_ENV};
pub use existence::{
    pcurve_existence, solve_lift, solve_pprojective, ExistenceTag, ExistenceVerdict, Lift,
    mirror_lift, ProjectiveSolution, BOUNDARY_MARGIN, ENDPOINT_TIME_TOL,
};
pub use shooting::{solve_pmec, Minimizer, Solver, SolverConfig};

/// Start and end poses with the horizontal weight `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPair {
    pub q_in: Pose,
    pub q_fin: Pose,
    pub xi: f64,
}

impl BoundaryPair {
    pub fn new(q_in: Pose, q_fin: Pose, xi: f64) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
        }
        Ok(Self { q_in, q_fin, xi })
    }

    /// Problem from the origin with `ξ = 1`.
    pub fn from_origin(q_fin: Pose) -> Self {
        Self {
            q_in: Pose::ORIGIN,
            q_fin,
            xi: 1.0,
        }
    }
}

/// Moves `q_in` to the origin; returns the moved target and the frame that did it.
pub fn normalize_to_origin(bp: &BoundaryPair) -> (Pose, Frame) {
    let frame = bp.q_in.as_frame().inverse();
    (frame.apply(&bp.q_fin), frame)
}

/// Rescales positions by `ξ` so that the weighted cost becomes sR-length.
///
/// With `x̃ = ξx` the horizontal control becomes `ũ = ξu`, so
/// `∫√(ξ²u² + v²) = ∫√(ũ² + v²)` and the cost is unchanged.
pub fn reduce_xi(bp: &BoundaryPair) -> BoundaryPair {
    let s = bp.xi;
    let scale = |p: &Pose| Pose {
        x: s * p.x,
        y: s * p.y,
        theta: p.theta,
    };
    BoundaryPair {
        q_in: scale(&bp.q_in),
        q_fin: scale(&bp.q_fin),
        xi: 1.0,
    }
}

/// Inverse of [`reduce_xi`] for a problem originally posed at `xi`.
pub fn expand_xi(bp: &BoundaryPair, xi: f64) -> BoundaryPair {
    let scale = |p: &Pose| Pose {
        x: p.x / xi,
        y: p.y / xi,
        theta: p.theta,
    };
    BoundaryPair {
        q_in: scale(&bp.q_in),
        q_fin: scale(&bp.q_fin),
        xi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn normalization_examples() {
        let bp = BoundaryPair::from_origin(Pose::new(1.0, 2.0, 3.0));
        let (q, f) = normalize_to_origin(&bp);
        assert_eq!(f, Frame::IDENTITY.inverse());
        assert!(q.residual(&bp.q_fin) < 1e-15);

        let bp = BoundaryPair::new(Pose::new(1.0, 0.0, FRAC_PI_2), Pose::new(1.0, 1.0, FRAC_PI_2), 1.0).unwrap();
        let (q, f) = normalize_to_origin(&bp);
        assert!(q.residual(&Pose::new(1.0, 0.0, 0.0)) < 1e-15);
        assert!(f.inverse().apply(&q).residual(&bp.q_fin) < 1e-15);
    }

    #[test]
    fn xi_examples() {
        let bp = BoundaryPair::from_origin(Pose::new(2.0, 0.0, 0.0));
        assert_eq!(reduce_xi(&bp), bp);
        let bp = BoundaryPair::new(Pose::ORIGIN, Pose::new(2.0, 0.0, 0.0), 2.0).unwrap();
        let r = reduce_xi(&bp);
        assert_eq!(r.q_fin, Pose::new(4.0, 0.0, 0.0));
        assert_eq!(r.xi, 1.0);
        assert!(BoundaryPair::new(Pose::ORIGIN, Pose::ORIGIN, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn normalize_round_trip(
            a in -3.0..3.0f64, b in -3.0..3.0f64, t in 0.0..std::f64::consts::TAU,
            x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.0..std::f64::consts::TAU,
        ) {
            let bp = BoundaryPair::from_origin(Pose::new(x, y, s));
            let bp = BoundaryPair { q_in: Pose::new(a, b, t), ..bp };
            let (q, f) = normalize_to_origin(&bp);
            prop_assert!(f.inverse().apply(&q).residual(&bp.q_fin) < 1e-12);
            prop_assert!(f.apply(&bp.q_in).residual(&Pose::ORIGIN) < 1e-12);
        }

        #[test]
        fn dilation_round_trip(xi in 0.1..10.0f64, x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.0..std::f64::consts::TAU) {
            let bp = BoundaryPair::new(Pose::new(0.5, -0.2, 1.0), Pose::new(x, y, s), xi).unwrap();
            let back = expand_xi(&reduce_xi(&bp), xi);
            prop_assert!(back.q_fin.residual(&bp.q_fin) < 1e-12);
            prop_assert!(back.q_in.residual(&bp.q_in) < 1e-12);
        }
    }
}
