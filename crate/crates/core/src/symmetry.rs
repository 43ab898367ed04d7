//! The reflections `S` and `T` of a geodesic segment and Maxwell points.
//!
//! Both act on a segment `q : [0, T] → SE(2)` with `q(0)` at the origin.
//! Up to a rotation of the plane, `S` reflects the planar curve in the
//! perpendicular bisector of its chord and `T` reflects it in the chord's
//! midpoint.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geodesic::{Geodesic, RawPose};
use crate::pendulum::PendulumState;
use crate::pose::angdist;

pub const DEFAULT_SAMPLES: usize = 512;
pub const MAXWELL_TOL: f64 = 1e-9;
pub const DISTINCT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reflection {
    S,
    T,
}

/// A segment sampled at `n + 1` uniform times on `[0, T]`, starting at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySegment {
    pub duration: f64,
    pub poses: Vec<RawPose>,
}

impl TrajectorySegment {
    pub fn from_geodesic(g: &Geodesic, duration: f64, n: usize) -> Self {
        let n = n.max(1);
        let poses = (0..=n)
            .map(|i| {
                if i == 0 {
                    RawPose {
                        x: 0.0,
                        y: 0.0,
                        theta: 0.0,
                    }
                } else {
                    let t = if i == n {
                        duration
                    } else {
                        duration * i as f64 / n as f64
                    };
                    g.eval_origin(t)
                }
            })
            .collect();
        Self { duration, poses }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.duration * i as f64 / (self.poses.len() - 1) as f64
    }

    pub fn endpoint(&self) -> RawPose {
        *self.poses.last().expect("non-empty segment")
    }

    /// Length of the sampled curve in `(x, y, θ)`; equals sR-length for horizontal curves.
    pub fn length(&self) -> f64 {
        self.poses
            .windows(2)
            .map(|w| {
                let (dx, dy, dt) = (w[1].x - w[0].x, w[1].y - w[0].y, w[1].theta - w[0].theta);
                (dx * dx + dy * dy + dt * dt).sqrt()
            })
            .sum()
    }

    /// Sup-norm distance to another segment sampled on the same grid.
    pub fn distance(&self, other: &Self) -> f64 {
        self.poses
            .iter()
            .zip(&other.poses)
            .map(|(a, b)| {
                (a.x - b.x)
                    .abs()
                    .max((a.y - b.y).abs())
                    .max((a.theta - b.theta).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn reflect(&self, r: Reflection) -> Self {
        match r {
            Reflection::S => self.reflect_s(),
            Reflection::T => self.reflect_t(),
        }
    }

    pub fn reflect_s(&self) -> Self {
        let e = self.endpoint();
        let (s, c) = e.theta.sin_cos();
        let poses = self
            .poses
            .iter()
            .rev()
            .map(|q| {
                let (dx, dy) = (e.x - q.x, e.y - q.y);
                RawPose {
                    x: -c * dx - s * dy,
                    y: -s * dx + c * dy,
                    theta: e.theta - q.theta,
                }
            })
            .collect();
        Self {
            duration: self.duration,
            poses,
        }
    }

    pub fn reflect_t(&self) -> Self {
        let e = self.endpoint();
        let (s, c) = e.theta.sin_cos();
        let poses = self
            .poses
            .iter()
            .rev()
            .map(|q| {
                let (dx, dy) = (q.x - e.x, q.y - e.y);
                RawPose {
                    x: c * dx + s * dy,
                    y: -s * dx + c * dy,
                    theta: q.theta - e.theta,
                }
            })
            .collect();
        Self {
            duration: self.duration,
            poses,
        }
    }
}

pub fn reflect_s(seg: &TrajectorySegment) -> TrajectorySegment {
    seg.reflect_s()
}

pub fn reflect_t(seg: &TrajectorySegment) -> TrajectorySegment {
    seg.reflect_t()
}

/// Initial pendulum state of the reflected geodesic on `[0, t]`.
pub fn reflected_state(g: &Geodesic, t: f64, r: Reflection) -> PendulumState {
    let s = g.state_at(t);
    match r {
        Reflection::S => PendulumState::new(-s.nu, s.c),
        Reflection::T => PendulumState::new(s.nu + TAU, -s.c),
    }
}

/// Endpoint mismatch `|Δx| + |Δy| + angdist(Δθ)` between `q(t)` and its image.
pub fn endpoint_residual(g: &Geodesic, t: f64, r: Reflection) -> f64 {
    let e = g.eval_origin(t);
    let (s, c) = e.theta.sin_cos();
    let (x, y, th) = match r {
        Reflection::S => (-c * e.x - s * e.y, -s * e.x + c * e.y, e.theta),
        Reflection::T => (-c * e.x - s * e.y, s * e.x - c * e.y, -e.theta),
    };
    (x - e.x).abs() + (y - e.y).abs() + angdist(th, e.theta)
}

/// Smooth function vanishing at the endpoints where `q(t) = q_r(t)`.
///
/// For `S` this is `x cos(θ/2) + y sin(θ/2)`; for `T` it is `cos(θ/2)`.
pub fn maxwell_function(g: &Geodesic, t: f64, r: Reflection) -> f64 {
    let e = g.eval_origin(t);
    let (s, c) = (0.5 * e.theta).sin_cos();
    match r {
        Reflection::S => e.x * c + e.y * s,
        Reflection::T => c,
    }
}

/// Outcome of testing one reflection at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellCheck {
    pub reflection: Reflection,
    pub residual: f64,
    pub distance: f64,
}

impl MaxwellCheck {
    pub fn is_maxwell(&self, tol: f64) -> bool {
        self.residual <= tol && self.distance > DISTINCT_TOL
    }
}

pub fn maxwell_check(g: &Geodesic, t: f64, r: Reflection) -> MaxwellCheck {
    let seg = TrajectorySegment::from_geodesic(g, t, DEFAULT_SAMPLES);
    MaxwellCheck {
        reflection: r,
        residual: endpoint_residual(g, t, r),
        distance: seg.distance(&seg.reflect(r)),
    }
}

/// Whether `q(t)` is a Maxwell point for `S` or `T`.
pub fn is_maxwell_point(g: &Geodesic, t: f64, tol: f64) -> bool {
    maxwell_reflection(g, t, tol).is_some()
}

pub fn maxwell_reflection(g: &Geodesic, t: f64, tol: f64) -> Option<Reflection> {
    if !(t > 0.0) {
        return None;
    }
    [Reflection::T, Reflection::S]
        .into_iter()
        .find(|&r| maxwell_check(g, t, r).is_maxwell(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pose::Pose;
    use std::f64::consts::PI;

    fn origin(nu: f64, c: f64) -> Geodesic {
        Geodesic::new(Pose::ORIGIN, PendulumState::new(nu, c))
    }

    #[test]
    fn line_is_invariant() {
        let g = origin(PI, 0.0);
        let seg = TrajectorySegment::from_geodesic(&g, 2.0, 64);
        // both images are the same segment traversed backwards from the origin
        for r in [Reflection::S, Reflection::T] {
            let img = seg.reflect(r);
            for (a, b) in seg.poses.iter().zip(&img.poses) {
                assert!((a.x + b.x).abs() < 1e-15 && b.y.abs() < 1e-15 && b.theta == 0.0);
            }
        }
        assert!(!is_maxwell_point(&g, 2.0, MAXWELL_TOL));
    }

    #[test]
    fn rotation_keeps_endpoints() {
        let g = origin(0.0, 0.0);
        let seg = TrajectorySegment::from_geodesic(&g, 1.0, 16);
        let s = seg.reflect_s();
        assert!((s.endpoint().theta - seg.endpoint().theta).abs() < 1e-15);
        assert!(seg.distance(&s) < 1e-15);
    }

    #[test]
    fn involutions() {
        let g = origin(1.0, 2.7);
        let seg = TrajectorySegment::from_geodesic(&g, 3.0, 128);
        assert!(seg.reflect_s().reflect_s().distance(&seg) < 1e-12);
        assert!(seg.reflect_t().reflect_t().distance(&seg) < 1e-12);
    }

    #[test]
    fn oscillation_has_maxwell_point_at_half_period() {
        let g = origin(0.4, 0.9);
        let t = 0.5 * g.period();
        assert!(is_maxwell_point(&g, t, MAXWELL_TOL));
        assert_eq!(maxwell_reflection(&g, t, MAXWELL_TOL), Some(Reflection::T));
    }
}
