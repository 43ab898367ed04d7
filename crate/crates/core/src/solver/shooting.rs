//! Multi-start shooting for the mechanical problem.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exec::Execution;
use super::{normalize_to_origin, reduce_xi, BoundaryPair};
use crate::error::{Error, Result};
use crate::geodesic::{Geodesic, RawPose};
use crate::optimality::{cut_time, CutInfo};
use crate::pendulum::{GeodesicClass, PendulumState};
use crate::pose::{angle_diff, Pose};
use crate::symmetry::{maxwell_reflection, reflected_state, Reflection, TrajectorySegment};

const DEGENERATE: f64 = 1e-12;
const CUT_SLACK: f64 = 1e-9;
const TWIN_LENGTH_TOL: f64 = 1e-8;
const TWIN_SAMPLES: usize = 128;

/// Knobs of the multi-start search.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Seed of the stratified jitter; fixes every result.
    pub seed: u64,
    pub nu_cells: usize,
    pub c_cells: usize,
    /// Forward samples per cell along `t`.
    pub t_samples: usize,
    /// Cells cover `c = 2 sinh(w)` for `|w| ≤ w_max`.
    pub w_max: f64,
    /// Longest duration stored in the seed table.
    pub t_cap: f64,
    /// Starts refined per batch, and number of batches.
    pub starts: usize,
    pub batches: usize,
    pub max_iter: usize,
    /// Accepted endpoint residual `|Δx| + |Δy| + angdist(Δθ)`.
    pub tol: f64,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed: 0x5e2_9e0,
            nu_cells: 32,
            c_cells: 32,
            t_samples: 32,
            w_max: 3.0,
            t_cap: 8.0,
            starts: 6,
            batches: 12,
            max_iter: 80,
            tol: 1e-8,
            execution: Execution::default(),
        }
    }
}

/// A length-minimizing geodesic between the poses of a [`BoundaryPair`].
///
/// The geodesic lives in the reduced problem (`ξ = 1`, positions scaled by
/// `ξ`); [`Minimizer::pose_at`] maps back to the original coordinates.
#[derive(Debug, Clone)]
pub struct Minimizer {
    pub geodesic: Geodesic,
    pub duration: f64,
    /// Cost of the original problem; equals `duration`.
    pub length: f64,
    pub xi: f64,
    pub residual: f64,
    pub cut: CutInfo,
    /// Cusp times in `(0, T]`, endpoints included when numerically present.
    pub cusp_times: Vec<f64>,
    pub twin: Option<Box<Minimizer>>,
    /// Reflection taking this minimizer to its twin, when one is known.
    pub twin_reflection: Option<Reflection>,
}

impl Minimizer {
    pub fn pose_at(&self, t: f64) -> Pose {
        let p = self.geodesic.eval(t);
        Pose {
            x: p.x / self.xi,
            y: p.y / self.xi,
            theta: p.theta,
        }
    }

    pub fn class(&self) -> GeodesicClass {
        self.geodesic.class
    }

    pub fn state0(&self) -> PendulumState {
        self.geodesic.state0
    }

    /// Cusps strictly inside `(tol, T − tol)`.
    pub fn internal_cusps(&self, tol: f64) -> Vec<f64> {
        self.cusp_times
            .iter()
            .copied()
            .filter(|&t| t > tol && t < self.duration - tol)
            .collect()
    }

    /// Sign of the planar control in the middle of the curve.
    pub fn is_forward(&self) -> bool {
        self.geodesic.control_u(0.5 * self.duration) > 0.0
    }
}

#[derive(Debug, Clone)]
struct SeedCell {
    state: PendulumState,
    poses: Vec<(f64, RawPose)>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    state: PendulumState,
    t: f64,
    residual: f64,
}

/// Seed table plus configuration; build once and reuse across targets.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    cells: Vec<SeedCell>,
}

static SHARED: OnceLock<Solver> = OnceLock::new();

/// Solves with the shared default solver.
pub fn solve_pmec(bp: &BoundaryPair) -> Result<Vec<Minimizer>> {
    Solver::shared().solve(bp)
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut jobs = Vec::with_capacity(config.nu_cells * config.c_cells);
        for i in 0..config.nu_cells {
            for j in 0..config.c_cells {
                let a: f64 = rng.gen();
                let b: f64 = rng.gen();
                let nu = (i as f64 + a) * 4.0 * PI / config.nu_cells as f64;
                let w = -config.w_max + (j as f64 + b) * 2.0 * config.w_max / config.c_cells as f64;
                jobs.push(PendulumState::new(nu, 2.0 * w.sinh()));
            }
        }
        let cells = config.execution.map(&jobs, |s| {
            let g = Geodesic::new(Pose::ORIGIN, *s);
            let limit = optimal_horizon(&g).min(config.t_cap);
            let n = config.t_samples;
            let poses = (1..=n)
                .map(|k| {
                    let t = limit * k as f64 / n as f64;
                    (t, g.eval_origin(t))
                })
                .collect();
            SeedCell { state: *s, poses }
        });
        Self { config, cells }
    }

    pub fn shared() -> &'static Solver {
        SHARED.get_or_init(|| Solver::new(SolverConfig::default()))
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, bp: &BoundaryPair) -> Result<Vec<Minimizer>> {
        let red = reduce_xi(bp);
        let (target, _) = normalize_to_origin(&red);
        let found = self.candidates(&target)?;
        let build = |c: &Candidate| {
            let g = Geodesic::new(red.q_in, c.state);
            let g0 = Geodesic::new(Pose::ORIGIN, c.state);
            finish(g, &g0, c.t, c.residual, bp.xi)
        };
        let best = found
            .iter()
            .min_by(|a, b| a.t.total_cmp(&b.t))
            .expect("non-empty candidate set");
        let mut primary = build(best)?;

        let g0 = Geodesic::new(Pose::ORIGIN, best.state);
        let tol = self.config.tol.max(1e-9);
        let twin = if best.t > 0.0 {
            maxwell_reflection(&g0, best.t, tol).map(|r| {
                let s = reflected_state(&g0, best.t, r);
                (Candidate { state: s, t: best.t, residual: best.residual }, Some(r))
            })
        } else {
            None
        };
        let twin = twin.or_else(|| {
            let seg = TrajectorySegment::from_geodesic(&g0, best.t, TWIN_SAMPLES);
            found
                .iter()
                .filter(|c| (c.t - best.t).abs() <= TWIN_LENGTH_TOL)
                .find_map(|c| {
                    let other = TrajectorySegment::from_geodesic(
                        &Geodesic::new(Pose::ORIGIN, c.state),
                        c.t,
                        TWIN_SAMPLES,
                    );
                    if other.distance(&seg) <= 1e-6 {
                        return None;
                    }
                    let rel = [Reflection::S, Reflection::T]
                        .into_iter()
                        .find(|&r| seg.reflect(r).distance(&other) <= 1e-6);
                    Some((*c, rel))
                })
        });
        if let Some((c, rel)) = twin {
            let mut t = build(&c)?;
            t.twin_reflection = rel;
            primary.twin_reflection = rel;
            let mut out_twin = t.clone();
            out_twin.twin = None;
            primary.twin = Some(Box::new(out_twin));
            let mut second = t;
            let mut p_copy = primary.clone();
            p_copy.twin = None;
            second.twin = Some(Box::new(p_copy));
            return Ok(vec![primary, second]);
        }
        Ok(vec![primary])
    }

    /// Candidate endpoints-matching geodesics within their optimal horizon.
    fn candidates(&self, target: &Pose) -> Result<Vec<Candidate>> {
        if target.y < 0.0 {
            // (x, y, θ) ↦ (x, −y, −θ) acts on states by (ν, c) ↦ (2π − ν, −c)
            let mirrored = Pose::new(target.x, -target.y, -target.theta);
            let mut found = self.search(&mirrored)?;
            for c in &mut found {
                c.state = PendulumState::new(TAU - c.state.nu, -c.state.c);
            }
            return Ok(found);
        }
        self.search(target)
    }

    fn search(&self, target: &Pose) -> Result<Vec<Candidate>> {
        let (x, y) = (target.x, target.y);
        let dth = angle_diff(target.theta, 0.0);
        if x.hypot(y) <= DEGENERATE {
            // rotation in place, or nothing to do
            let nu = if dth > 0.0 { TAU } else { 0.0 };
            let (state, t) = if dth.abs() <= DEGENERATE {
                (PendulumState::new(PI, 0.0), 0.0)
            } else {
                (PendulumState::new(nu, 0.0), dth.abs())
            };
            return Ok(vec![Candidate { state, t, residual: 0.0 }]);
        }
        if y.abs() <= DEGENERATE && dth.abs() <= DEGENERATE {
            let nu = if x > 0.0 { PI } else { 3.0 * PI };
            return Ok(vec![Candidate {
                state: PendulumState::new(nu, 0.0),
                t: x.abs(),
                residual: y.abs() + dth.abs(),
            }]);
        }

        let mut ranked: Vec<(f64, usize, f64)> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                let (d, t) = cell
                    .poses
                    .iter()
                    .map(|(t, p)| {
                        let dt = angle_diff(p.theta, target.theta);
                        ((p.x - x).powi(2) + (p.y - y).powi(2) + dt * dt, *t)
                    })
                    .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
                (d, i, t)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut accepted = Vec::new();
        let mut best_residual = f64::INFINITY;
        for batch in ranked.chunks(self.config.starts).take(self.config.batches) {
            for &(_, i, t) in batch {
                let s = self.cells[i].state;
                let z = self.refine([s.nu, s.c, t], target);
                let pose = Geodesic::new(Pose::ORIGIN, PendulumState::new(z[0], z[1])).eval(z[2]);
                let res = pose.residual(target);
                best_residual = best_residual.min(res);
                if res > self.config.tol || !(z[2] > 0.0) {
                    continue;
                }
                let cand = Candidate {
                    state: PendulumState::new(z[0], z[1]),
                    t: z[2],
                    residual: res,
                };
                if within_cut(&cand) {
                    accepted.push(cand);
                }
            }
            if !accepted.is_empty() {
                return Ok(accepted);
            }
        }
        Err(Error::Unsolved { best_residual })
    }

    /// Levenberg–Marquardt on `(ν₀, c₀, T)` with a forward-difference Jacobian,
    /// from a caller-supplied start. No optimality filter is applied.
    pub fn shoot(&self, z: [f64; 3], target: &Pose) -> [f64; 3] {
        self.refine(z, target)
    }

    fn refine(&self, mut z: [f64; 3], target: &Pose) -> [f64; 3] {
        let resid = |z: &[f64; 3]| -> [f64; 3] {
            let g = Geodesic::new(Pose::ORIGIN, PendulumState::new(z[0], z[1]));
            let p = g.eval_origin(z[2]);
            [p.x - target.x, p.y - target.y, angle_diff(p.theta, target.theta)]
        };
        let norm2 = |r: &[f64; 3]| r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        let mut r = resid(&z);
        let mut cost = norm2(&r);
        let mut lambda = 1e-3;
        for _ in 0..self.config.max_iter {
            if cost < 1e-30 {
                break;
            }
            let mut jac = [[0.0; 3]; 3];
            for k in 0..3 {
                let h = 1e-7 * z[k].abs().max(1.0);
                let mut zh = z;
                zh[k] += h;
                let rh = resid(&zh);
                jac[0][k] = (rh[0] - r[0]) / h;
                jac[1][k] = (rh[1] - r[1]) / h;
                jac[2][k] = angle_diff(rh[2], r[2]) / h;
            }
            let mut a = [[0.0; 3]; 3];
            let mut g = [0.0; 3];
            for i in 0..3 {
                for j in 0..3 {
                    a[i][j] = (0..3).map(|m| jac[m][i] * jac[m][j]).sum();
                }
                g[i] = -(0..3).map(|m| jac[m][i] * r[m]).sum::<f64>();
            }
            let mut improved = false;
            for _ in 0..12 {
                let mut m = a;
                for i in 0..3 {
                    m[i][i] += lambda * a[i][i].max(1e-12);
                }
                let Some(d) = solve3(&m, &g) else {
                    lambda *= 10.0;
                    continue;
                };
                let mut zn = [z[0] + d[0], z[1] + d[1], z[2] + d[2]];
                if zn[2] <= 0.0 {
                    zn[2] = 0.5 * z[2];
                }
                let rn = resid(&zn);
                let cn = norm2(&rn);
                if cn < cost {
                    let step = (d[0].abs() + d[1].abs() + d[2].abs()) / (1.0 + z[2]);
                    z = zn;
                    r = rn;
                    cost = cn;
                    lambda = (lambda / 5.0).max(1e-12);
                    improved = step > 1e-16;
                    break;
                }
                lambda *= 6.0;
            }
            if !improved {
                break;
            }
        }
        z[0] = z[0].rem_euclid(4.0 * PI);
        z
    }
}

/// `t_cut` capped where the pendulum never closes.
fn optimal_horizon(g: &Geodesic) -> f64 {
    match g.class {
        GeodesicClass::R => 0.5 * g.period(),
        GeodesicClass::O => cut_time(g).map(|c| c.t_cut).unwrap_or(0.5 * g.period()),
        _ => f64::INFINITY,
    }
}

fn within_cut(c: &Candidate) -> bool {
    let g = Geodesic::new(Pose::ORIGIN, c.state);
    match g.class {
        GeodesicClass::R => c.t <= 0.5 * g.period() + CUT_SLACK,
        // the cut of a rotating pendulum lies beyond half the period
        GeodesicClass::O if c.t <= 0.5 * g.period() => true,
        GeodesicClass::O => optimal_horizon(&g) + CUT_SLACK >= c.t,
        _ => true,
    }
}

fn finish(g: Geodesic, g0: &Geodesic, t: f64, residual: f64, xi: f64) -> Result<Minimizer> {
    let cut = cut_time(g0)?;
    let cusp_times = if g.class == GeodesicClass::S || t == 0.0 {
        Vec::new()
    } else {
        let mut v = g0.cusp_times(t * (1.0 + 1e-12) + 1e-12)?;
        // a cusp exactly at the start
        if g0.control_u(0.0).abs() <= 1e-12 {
            v.insert(0, 0.0);
        }
        v
    };
    Ok(Minimizer {
        geodesic: g,
        duration: t,
        length: t,
        xi,
        residual,
        cut,
        cusp_times,
        twin: None,
        twin_reflection: None,
    })
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if !(d.abs() > 1e-300) || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = *a;
        for i in 0..3 {
            m[i][k] = b[i];
        }
        *o = det(&m) / d;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn line_and_rotation() {
        let m = solve_pmec(&BoundaryPair::from_origin(Pose::new(1.0, 0.0, 0.0))).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].class(), GeodesicClass::U);
        assert!((m[0].length - 1.0).abs() < 1e-15);

        let m = solve_pmec(&BoundaryPair::from_origin(Pose::new(0.0, 0.0, FRAC_PI_2))).unwrap();
        assert_eq!(m[0].class(), GeodesicClass::S);
        assert!((m[0].length - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn half_turn_in_place_has_two_rotations() {
        let m = solve_pmec(&BoundaryPair::from_origin(Pose::new(0.0, 0.0, PI))).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m[0].length - m[1].length).abs() < 1e-12);
    }

    #[test]
    fn generic_target() {
        let target = Pose::new(0.8, 0.5, 0.7);
        let m = solve_pmec(&BoundaryPair::from_origin(target)).unwrap();
        assert!(m[0].pose_at(m[0].duration).residual(&target) <= 1e-8);
    }
}
