//! Poses on `R² × S¹` and rototranslations acting on them.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Signed difference `a − b` reduced to `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// `min(|Δθ|, 2π − |Δθ|)`.
pub fn angdist(a: f64, b: f64) -> f64 {
    angle_diff(a, b).abs()
}

/// Configuration `(x, y, θ)` of the moving frame; `θ` is kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub const ORIGIN: Pose = Pose {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    /// Endpoint residual `|Δx| + |Δy| + angdist(Δθ)`.
    pub fn residual(&self, other: &Pose) -> f64 {
        (self.x - other.x).abs() + (self.y - other.y).abs() + angdist(self.theta, other.theta)
    }

    /// The pose viewed as the group element that maps the origin onto it.
    pub fn as_frame(&self) -> Frame {
        Frame {
            x: self.x,
            y: self.y,
            theta: self.theta,
        }
    }
}

/// Rototranslation `g = (a, b, φ)` acting by `g·(x, y, θ) = (a + R_φ(x, y), θ + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    pub fn apply(&self, p: &Pose) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose::new(
            self.x + c * p.x - s * p.y,
            self.y + s * p.x + c * p.y,
            self.theta + p.theta,
        )
    }

    /// Applies the frame to a pose whose angle is kept unwrapped.
    pub fn apply_raw(&self, x: f64, y: f64, theta: f64) -> (f64, f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.x + c * x - s * y, self.y + s * x + c * y, self.theta + theta)
    }

    pub fn inverse(&self) -> Frame {
        let (s, c) = self.theta.sin_cos();
        Frame {
            x: -(c * self.x + s * self.y),
            y: s * self.x - c * self.y,
            theta: -self.theta,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Frame) -> Frame {
        let p = self.apply(&Pose {
            x: other.x,
            y: other.y,
            theta: other.theta,
        });
        Frame {
            x: p.x,
            y: p.y,
            theta: self.theta + other.theta,
        }
    }
}
