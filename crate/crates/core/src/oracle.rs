//! Reference integrator for the Hamiltonian flow.
//!
//! A Taylor-series method of fixed high order integrates
//!
//! ```text
//! ν̇ = c,  ċ = −sin ν,  ẋ = sin(ν/2) cos θ,  ẏ = sin(ν/2) sin θ,  θ̇ = −cos(ν/2)
//! ```
//!
//! directly, without any elliptic function. Each step keeps its full
//! Taylor polynomial, so dense output has the order of the method.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::pendulum::{classify, GeodesicClass, PendulumState};
use crate::pose::Pose;

const ORDER: usize = 24;
const DIM: usize = 5;
const MIN_STEP: f64 = 1e-10;
const MAX_HORIZON: f64 = 1e5;

/// Tolerances used by an oracle run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleTolerances {
    /// Target for the truncated Taylor term per step.
    pub local_error: f64,
    pub order: usize,
}

impl Default for OracleTolerances {
    fn default() -> Self {
        Self {
            local_error: 1e-16,
            order: ORDER,
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    t0: f64,
    h: f64,
    coeffs: [[f64; ORDER + 1]; DIM],
}

impl Step {
    fn eval(&self, t: f64) -> [f64; DIM] {
        let s = t - self.t0;
        let mut out = [0.0; DIM];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            let mut acc = 0.0;
            for a in c.iter().rev() {
                acc = acc * s + a;
            }
            *o = acc;
        }
        out
    }
}

/// Integrated trajectory with dense output; state order is `(ν, c, x, y, θ)`.
#[derive(Debug, Clone)]
pub struct OracleTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; DIM]>,
    pub tolerances: OracleTolerances,
    steps: Vec<Step>,
}

impl OracleTrajectory {
    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    /// State at `t ∈ [0, t_max]`; `θ` is unwrapped.
    pub fn state(&self, t: f64) -> [f64; DIM] {
        let i = self
            .steps
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.steps.len() - 1);
        self.steps[i].eval(t)
    }

    pub fn pose(&self, t: f64) -> Pose {
        let s = self.state(t);
        Pose::new(s[2], s[3], s[4])
    }

    pub fn pendulum(&self, t: f64) -> PendulumState {
        let s = self.state(t);
        PendulumState::new(s[0], s[1])
    }

    /// `max |E(t) − E(0)|` over the step nodes.
    pub fn energy_drift(&self) -> f64 {
        let e = |s: &[f64; DIM]| 0.5 * s[1] * s[1] - s[0].cos();
        let e0 = e(&self.states[0]);
        self.states
            .iter()
            .map(|s| (e(s) - e0).abs())
            .fold(0.0, f64::max)
    }
}

/// Taylor coefficients of one step about `y0`.
fn taylor(y0: &[f64; DIM]) -> [[f64; ORDER + 1]; DIM] {
    let mut y = [[0.0; ORDER + 1]; DIM];
    // half angle, its sine and cosine; sine and cosine of θ; sin ν
    let mut sh = [0.0; ORDER + 1];
    let mut ch = [0.0; ORDER + 1];
    let mut st = [0.0; ORDER + 1];
    let mut ct = [0.0; ORDER + 1];
    for d in 0..DIM {
        y[d][0] = y0[d];
    }
    (sh[0], ch[0]) = (0.5 * y0[0]).sin_cos();
    (st[0], ct[0]) = y0[4].sin_cos();
    for k in 0..ORDER {
        if k > 0 {
            let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
            for j in 1..=k {
                let hj = 0.5 * j as f64 * y[0][j];
                let tj = j as f64 * y[4][j];
                a += hj * ch[k - j];
                b += hj * sh[k - j];
                c += tj * ct[k - j];
                d += tj * st[k - j];
            }
            let kf = k as f64;
            sh[k] = a / kf;
            ch[k] = -b / kf;
            st[k] = c / kf;
            ct[k] = -d / kf;
        }
        let (mut sin_nu, mut xdot, mut ydot) = (0.0, 0.0, 0.0);
        for j in 0..=k {
            sin_nu += sh[j] * ch[k - j];
            xdot += sh[j] * ct[k - j];
            ydot += sh[j] * st[k - j];
        }
        let inv = 1.0 / (k + 1) as f64;
        y[0][k + 1] = y[1][k] * inv;
        y[1][k + 1] = -2.0 * sin_nu * inv;
        y[2][k + 1] = xdot * inv;
        y[3][k + 1] = ydot * inv;
        y[4][k + 1] = -ch[k] * inv;
    }
    y
}

fn step_size(c: &[[f64; ORDER + 1]; DIM], tol: f64) -> f64 {
    let norm = |k: usize| c.iter().map(|r| r[k].abs()).fold(0.0, f64::max);
    let (a, b) = (norm(ORDER), norm(ORDER - 1));
    let ha = if a > 0.0 {
        (tol / a).powf(1.0 / ORDER as f64)
    } else {
        f64::INFINITY
    };
    let hb = if b > 0.0 {
        (tol / b).powf(1.0 / (ORDER - 1) as f64)
    } else {
        f64::INFINITY
    };
    0.9 * ha.min(hb).min(1.0)
}

/// Integrates from the origin over `[0, t_max]`.
pub fn integrate(s0: &PendulumState, t_max: f64) -> Result<OracleTrajectory> {
    integrate_from(&Pose::ORIGIN, s0, t_max)
}

pub fn integrate_from(base: &Pose, s0: &PendulumState, t_max: f64) -> Result<OracleTrajectory> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let tolerances = OracleTolerances::default();
    let mut y = [s0.nu, s0.c, base.x, base.y, base.theta];
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut states = vec![y];
    let mut steps = Vec::new();
    while t < t_max {
        let coeffs = taylor(&y);
        let mut h = step_size(&coeffs, tolerances.local_error);
        if !(h >= MIN_STEP) {
            return Err(Error::Integration {
                time: t,
                reason: format!("step size {h:e} below {MIN_STEP:e}"),
            });
        }
        if t + h >= t_max {
            h = t_max - t;
        }
        let step = Step { t0: t, h, coeffs };
        t = if t + h >= t_max { t_max } else { t + h };
        y = step.eval(t);
        steps.push(step);
        times.push(t);
        states.push(y);
    }
    Ok(OracleTrajectory {
        times,
        states,
        tolerances,
        steps,
    })
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let neg = f(a) < 0.0;
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) < 0.0) == neg {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First return time of `(ν, c)` on the double cover, found by integration.
///
/// Oscillations (`R`) close when the phase angle about the centre has made a
/// full turn; rotations (`O`) close when `ν` has advanced by `4π`.
pub fn pendulum_return_time(s0: &PendulumState) -> Result<f64> {
    let class = classify(s0);
    if !matches!(class, GeodesicClass::R | GeodesicClass::O) {
        return Err(Error::UnsupportedClass(class));
    }
    let mut horizon = 16.0;
    while horizon <= MAX_HORIZON {
        let tr = integrate(s0, horizon)?;
        let found = match class {
            GeodesicClass::O => {
                let dir = s0.c.signum();
                let target = s0.nu + dir * 4.0 * PI;
                let g = |t: f64| dir * (tr.state(t)[0] - target);
                first_crossing(&tr, g)
            }
            _ => {
                let center = (s0.nu / TAU).round() * TAU;
                let phase = |t: f64| {
                    let s = tr.state(t);
                    s[1].atan2(s[0] - center)
                };
                // unwrap the phase along fine samples, then bisect the crossing
                let n = (horizon * 64.0) as usize;
                let h = horizon / n as f64;
                let a0 = phase(0.0);
                let mut prev = a0;
                let mut acc = 0.0;
                let mut hit = None;
                for i in 1..=n {
                    let t = i as f64 * h;
                    let a = phase(t);
                    let mut d = a - prev;
                    if d > PI {
                        d -= TAU;
                    } else if d < -PI {
                        d += TAU;
                    }
                    if acc + d <= -TAU {
                        let base_acc = acc;
                        let t_lo = t - h;
                        let p_lo = prev;
                        let g = |s: f64| {
                            let mut e = phase(s) - p_lo;
                            if e > PI {
                                e -= TAU;
                            } else if e < -PI {
                                e += TAU;
                            }
                            base_acc + e + TAU
                        };
                        hit = Some(bisect(g, t_lo, t));
                        break;
                    }
                    acc += d;
                    prev = a;
                }
                hit
            }
        };
        if let Some(t) = found {
            return Ok(t);
        }
        horizon *= 2.0;
    }
    Err(Error::Integration {
        time: MAX_HORIZON,
        reason: "no return within horizon".into(),
    })
}

fn first_crossing(tr: &OracleTrajectory, g: impl Fn(f64) -> f64) -> Option<f64> {
    let w = tr.times.windows(2).find(|w| g(w[0]) < 0.0 && g(w[1]) >= 0.0)?;
    Some(bisect(&g, w[0], w[1]))
}
