//! Existence verdicts over grids of targets.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::exec::Execution;
use super::existence::ExistenceTag;
use super::shooting::Solver;
use super::BoundaryPair;
use crate::pose::Pose;

/// A cube of `grid³` targets over `[−r, r]² × S¹`, cell centred in `x`, `y`,
/// restricted to the disk of radius `r`. Angles are `2πk/grid`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtlasSpec {
    pub radius: f64,
    pub grid: usize,
}

impl AtlasSpec {
    /// Centre of cell `i`; `coordinate(grid − 1 − i) == −coordinate(i)` exactly.
    pub fn coordinate(&self, i: usize) -> f64 {
        let n = self.grid;
        if 2 * i + 1 > n {
            return -self.coordinate(n - 1 - i);
        }
        -self.radius + 2.0 * self.radius * (i as f64 + 0.5) / n as f64
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.grid as f64
    }

    /// Index of the image under `(x, y, θ) ↦ (x, −y, −θ)`.
    pub fn mirror(&self, idx: [usize; 3]) -> [usize; 3] {
        let n = self.grid;
        [idx[0], n - 1 - idx[1], (n - idx[2]) % n]
    }

    /// Grid indices `(i, j, k)` of all targets inside the disk.
    pub fn indices(&self) -> Vec<[usize; 3]> {
        let n = self.grid;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (self.coordinate(i), self.coordinate(j));
                if x * x + y * y <= self.radius * self.radius {
                    out.extend((0..n).map(|k| [i, j, k]));
                }
            }
        }
        out
    }

    pub fn target(&self, idx: [usize; 3]) -> Pose {
        Pose::new(self.coordinate(idx[0]), self.coordinate(idx[1]), self.angle(idx[2]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub index: [usize; 3],
    pub target: Pose,
    /// `None` when the solver failed on this target.
    pub tag: Option<ExistenceTag>,
    pub length: Option<f64>,
    pub boundary_marginal: bool,
    pub error: Option<String>,
}

pub fn atlas(spec: &AtlasSpec, solver: &Solver, exec: Execution) -> Vec<AtlasEntry> {
    let idx = spec.indices();
    exec.map(&idx, |&index| {
        let target = spec.target(index);
        match solver.existence(&BoundaryPair::from_origin(target)) {
            Ok(v) => AtlasEntry {
                index,
                target,
                tag: Some(v.tag),
                length: Some(v.witness.length),
                boundary_marginal: v.boundary_marginal,
                error: None,
            },
            Err(e) => AtlasEntry {
                index,
                target,
                tag: None,
                length: None,
                boundary_marginal: false,
                error: Some(e.to_string()),
            },
        }
    })
}

/// Targets on the upper half of the circle `x² + y² = r²`:
/// `bases + 1` base points at angles `πi/bases`, each with `angles` headings `2πk/angles`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub radius: f64,
    pub bases: usize,
    pub angles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingEntry {
    pub base: usize,
    pub heading: usize,
    pub target: Pose,
    pub tag: Option<ExistenceTag>,
    pub length: Option<f64>,
}

pub fn ring_sweep(spec: &RingSpec, solver: &Solver, exec: Execution) -> Vec<RingEntry> {
    let jobs: Vec<(usize, usize)> = (0..=spec.bases)
        .flat_map(|i| (0..spec.angles).map(move |k| (i, k)))
        .collect();
    exec.map(&jobs, |&(base, heading)| {
        let a = PI * base as f64 / spec.bases.max(1) as f64;
        let target = Pose::new(
            spec.radius * a.cos(),
            spec.radius * a.sin(),
            TAU * heading as f64 / spec.angles as f64,
        );
        let v = solver.existence(&BoundaryPair::from_origin(target)).ok();
        RingEntry {
            base,
            heading,
            target,
            tag: v.as_ref().map(|v| v.tag),
            length: v.map(|v| v.witness.length),
        }
    })
}

/// Number of Exists/non-Exists switches around the heading circle of each base point.
pub fn ring_transitions(entries: &[RingEntry], spec: &RingSpec) -> Vec<usize> {
    (0..=spec.bases)
        .map(|b| {
            let row: Vec<bool> = entries
                .iter()
                .filter(|e| e.base == b)
                .map(|e| e.tag.is_some_and(|t| t.exists()))
                .collect();
            (0..row.len())
                .filter(|&k| row[k] != row[(k + 1) % row.len()])
                .count()
        })
        .collect()
}
