//! Existence of minimizers for curves with unit planar speed, and the
//! projective problem on `R² × P¹`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::shooting::{Minimizer, Solver};
use super::BoundaryPair;
use crate::error::Result;
use crate::geodesic::Geodesic;
use crate::pendulum::{GeodesicClass, PendulumState};
use crate::pose::Pose;

/// Cusps closer than this to an endpoint count as boundary cusps.
pub const ENDPOINT_TIME_TOL: f64 = 1e-9;
/// Cusps closer than this (but farther than [`ENDPOINT_TIME_TOL`]) mark a marginal verdict.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExistenceTag {
    /// A cusp-free minimizer traversed forward exists.
    Exists,
    /// Every minimizer has a cusp strictly inside the interval.
    NoSolutionInternalCusp,
    /// The minimizer rotates in place between different angles.
    NoSolutionAngularCusp,
    /// Minimizers are cusp-free but run backwards (`u < 0`).
    NoSolutionReversed,
}

impl ExistenceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ExistenceTag::Exists => "Exists",
            ExistenceTag::NoSolutionInternalCusp => "NoSolutionInternalCusp",
            ExistenceTag::NoSolutionAngularCusp => "NoSolutionAngularCusp",
            ExistenceTag::NoSolutionReversed => "NoSolutionReversed",
        }
    }

    pub fn exists(self) -> bool {
        self == ExistenceTag::Exists
    }
}

impl std::fmt::Display for ExistenceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ExistenceVerdict {
    pub tag: ExistenceTag,
    /// The minimizer that decides the verdict: the forward one for `Exists`.
    pub witness: Minimizer,
    pub minimizers: Vec<Minimizer>,
    /// Interior cusp times of the witness.
    pub internal_cusps: Vec<f64>,
    /// A cusp lies within [`BOUNDARY_MARGIN`] of an endpoint.
    pub boundary_marginal: bool,
    /// All minimizers agree on having an internal cusp.
    pub twin_consistent: bool,
}

fn interior(m: &Minimizer) -> (Vec<f64>, bool) {
    let t_end = m.duration;
    let mut inner = Vec::new();
    let mut marginal = false;
    for &t in &m.cusp_times {
        let d = t.min(t_end - t);
        if d > BOUNDARY_MARGIN {
            inner.push(t);
        } else if d > ENDPOINT_TIME_TOL {
            marginal = true;
        }
    }
    (inner, marginal)
}

pub fn pcurve_existence(bp: &BoundaryPair) -> Result<ExistenceVerdict> {
    Solver::shared().existence(bp)
}

impl Solver {
    pub fn existence(&self, bp: &BoundaryPair) -> Result<ExistenceVerdict> {
        let minimizers = self.solve(bp)?;
        Ok(verdict(minimizers))
    }

    pub fn solve_lift(&self, bp: &BoundaryPair, lift: Lift) -> Result<Vec<Minimizer>> {
        self.solve(&lift.apply(bp))
    }

    pub fn solve_pprojective(&self, bp: &BoundaryPair) -> Result<ProjectiveSolution> {
        let a = self.solve_lift(bp, Lift::Q1)?;
        let b = self.solve_lift(bp, Lift::Q2)?;
        let lengths = [a[0].length, b[0].length];
        let (minimizer, lift) = if lengths[1] < lengths[0] {
            (b[0].clone(), Lift::Q2)
        } else {
            (a[0].clone(), Lift::Q1)
        };
        let partner = lift.partner().apply(bp);
        let mirrored = mirror_lift(&minimizer);
        let end = mirrored.eval(minimizer.duration);
        let scaled = Pose {
            x: end.x / bp.xi,
            y: end.y / bp.xi,
            theta: end.theta,
        };
        Ok(ProjectiveSolution {
            minimizer,
            lift,
            lengths,
            partner_residual: scaled.residual(&partner.q_fin),
        })
    }
}

fn verdict(minimizers: Vec<Minimizer>) -> ExistenceVerdict {
    let first = &minimizers[0];
    if first.class() == GeodesicClass::S && first.duration > 0.0 {
        return ExistenceVerdict {
            tag: ExistenceTag::NoSolutionAngularCusp,
            witness: first.clone(),
            internal_cusps: Vec::new(),
            boundary_marginal: false,
            twin_consistent: true,
            minimizers,
        };
    }
    let info: Vec<(Vec<f64>, bool)> = minimizers.iter().map(interior).collect();
    let with_cusp = info.iter().filter(|(c, _)| !c.is_empty()).count();
    let twin_consistent = with_cusp == 0 || with_cusp == info.len();
    let marginal = info.iter().any(|(_, m)| *m);
    if with_cusp > 0 {
        let i = info.iter().position(|(c, _)| !c.is_empty()).unwrap_or(0);
        return ExistenceVerdict {
            tag: ExistenceTag::NoSolutionInternalCusp,
            witness: minimizers[i].clone(),
            internal_cusps: info[i].0.clone(),
            boundary_marginal: marginal,
            twin_consistent,
            minimizers,
        };
    }
    let forward = minimizers
        .iter()
        .position(|m| m.duration == 0.0 || m.is_forward());
    let (tag, i) = match forward {
        Some(i) => (ExistenceTag::Exists, i),
        None => (ExistenceTag::NoSolutionReversed, 0),
    };
    ExistenceVerdict {
        tag,
        witness: minimizers[i].clone(),
        internal_cusps: Vec::new(),
        boundary_marginal: marginal,
        twin_consistent,
        minimizers,
    }
}

pub fn solve_lift(bp: &BoundaryPair, lift: Lift) -> Result<Vec<Minimizer>> {
    Solver::shared().solve_lift(bp, lift)
}

pub fn solve_pprojective(bp: &BoundaryPair) -> Result<ProjectiveSolution> {
    Solver::shared().solve_pprojective(bp)
}

/// The four lifts of a projective boundary pair to `SE(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lift {
    /// `(θ_in, θ_fin)`
    Q1,
    /// `(θ_in, θ_fin + π)`
    Q2,
    /// `(θ_in + π, θ_fin)`
    Q3,
    /// `(θ_in + π, θ_fin + π)`
    Q4,
}

impl Lift {
    pub const ALL: [Lift; 4] = [Lift::Q1, Lift::Q2, Lift::Q3, Lift::Q4];

    pub fn apply(self, bp: &BoundaryPair) -> BoundaryPair {
        let (a, b) = match self {
            Lift::Q1 => (0.0, 0.0),
            Lift::Q2 => (0.0, PI),
            Lift::Q3 => (PI, 0.0),
            Lift::Q4 => (PI, PI),
        };
        BoundaryPair {
            q_in: Pose::new(bp.q_in.x, bp.q_in.y, bp.q_in.theta + a),
            q_fin: Pose::new(bp.q_fin.x, bp.q_fin.y, bp.q_fin.theta + b),
            xi: bp.xi,
        }
    }

    /// The lift traced by the same planar curve run with `u ↦ −u`.
    pub fn partner(self) -> Lift {
        match self {
            Lift::Q1 => Lift::Q4,
            Lift::Q4 => Lift::Q1,
            Lift::Q2 => Lift::Q3,
            Lift::Q3 => Lift::Q2,
        }
    }
}

/// Image of a minimizer under `θ ↦ θ + π`, `(u, v) ↦ (−u, v)`.
pub fn mirror_lift(m: &Minimizer) -> Geodesic {
    let g = &m.geodesic;
    let s = g.state0;
    Geodesic::new(
        Pose::new(g.base.x, g.base.y, g.base.theta + PI),
        PendulumState::new(-s.nu, -s.c),
    )
}

#[derive(Debug, Clone)]
pub struct ProjectiveSolution {
    pub minimizer: Minimizer,
    pub lift: Lift,
    /// Minimal lengths of lifts `Q1` and `Q2`.
    pub lengths: [f64; 2],
    /// Endpoint mismatch of the mirrored curve against the partner lift's target.
    pub partner_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn verdict_at(x: f64, y: f64, th: f64) -> ExistenceVerdict {
        pcurve_existence(&BoundaryPair::from_origin(Pose::new(x, y, th))).unwrap()
    }

    #[test]
    fn paper_examples() {
        assert_eq!(verdict_at(1.0, 0.0, 0.0).tag, ExistenceTag::Exists);
        assert_eq!(verdict_at(0.0, 0.0, FRAC_PI_2).tag, ExistenceTag::NoSolutionAngularCusp);
        assert!(!verdict_at(-1.0, 0.0, 0.0).tag.exists());
        let v = verdict_at(0.0, 1.0, PI);
        assert_eq!(v.tag, ExistenceTag::Exists, "{:?}", v.witness.cusp_times);
    }

    #[test]
    fn projective_line() {
        let p = solve_pprojective(&BoundaryPair::from_origin(Pose::new(1.0, 0.0, 0.0))).unwrap();
        assert!((p.minimizer.length - 1.0).abs() < 1e-12);
        assert!(p.partner_residual < 1e-12);
    }
}
