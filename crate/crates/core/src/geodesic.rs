//! Closed-form geodesics of the mechanical problem on `SE(2)`.
//!
//! Every geodesic is evaluated starting from the origin and then carried to
//! its base pose by the left action. Time is sub-Riemannian arclength.

use serde::{Deserialize, Serialize};

use crate::elliptic::{Jacobi, JacobiValues};
use crate::error::{Error, Result};
use crate::pendulum::{
    classify, covector_to_pendulum, fit_elliptic_params, pendulum_period, Covector,
    EllipticParams, GeodesicClass, PendulumState,
};
use crate::pose::Pose;

/// Grid step used to bracket roots when the period is infinite.
const APERIODIC_STEP: f64 = 0.25;
const ROOT_TOL: f64 = 1e-13;

/// A geodesic determined by its base pose and initial pendulum state.
#[derive(Debug, Clone)]
pub struct Geodesic {
    pub base: Pose,
    pub state0: PendulumState,
    pub class: GeodesicClass,
    pub params: Option<EllipticParams>,
    jacobi: Option<Jacobi>,
    period: f64,
}

/// One sample of [`Geodesic::sample_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub pose: Pose,
    /// Planar curvature `−cot(ν/2)`; signed infinity at cusps.
    pub curvature: f64,
}

/// Origin-based pose with `θ` unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Geodesic {
    pub fn new(base: Pose, state0: PendulumState) -> Self {
        let class = classify(&state0);
        let params = fit_elliptic_params(&state0).ok();
        let jacobi = match class {
            GeodesicClass::R | GeodesicClass::O => params.map(|p| Jacobi::new(p.k)),
            _ => None,
        };
        Self {
            base,
            state0,
            class,
            params,
            jacobi,
            period: pendulum_period(&state0),
        }
    }

    pub fn from_covector(base: Pose, p: &Covector) -> Result<Self> {
        Ok(Self::new(base, covector_to_pendulum(base.theta, p)?))
    }

    /// Pendulum period `T_pend`; `+∞` for `S`, `U`, `Sep`.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn eval(&self, t: f64) -> Pose {
        if t == 0.0 {
            return self.base;
        }
        let r = self.eval_origin(t);
        self.base.as_frame().apply(&Pose::new(r.x, r.y, r.theta))
    }

    /// Pose at `t` in the frame of the base, with `θ(0) = 0` and `θ` unwrapped.
    pub fn eval_origin(&self, t: f64) -> RawPose {
        let s0 = &self.state0;
        match self.class {
            GeodesicClass::S => RawPose {
                x: 0.0,
                y: 0.0,
                theta: -(0.5 * s0.nu).cos().signum() * t,
            },
            GeodesicClass::U => RawPose {
                x: (0.5 * s0.nu).sin().signum() * t,
                y: 0.0,
                theta: 0.0,
            },
            GeodesicClass::R => self.eval_r(t),
            GeodesicClass::O => self.eval_o(t),
            GeodesicClass::Sep => self.eval_sep(t),
        }
    }

    /// Pose at `t` in the world frame, with `θ` unwrapped from `base.theta`.
    pub fn eval_raw(&self, t: f64) -> RawPose {
        let r = self.eval_origin(t);
        let (x, y, theta) = self.base.as_frame().apply_raw(r.x, r.y, r.theta);
        RawPose { x, y, theta }
    }

    fn eval_r(&self, t: f64) -> RawPose {
        let p = self.params.as_ref().expect("R params");
        let j = self.jacobi.as_ref().expect("R ladder");
        let k = p.k.k();
        let s1 = p.sigma_nu;
        let a: JacobiValues = j.eval(p.phi);
        let b = j.eval(p.phi + t);
        let w = t + a.eps - b.eps;
        RawPose {
            x: s1 / k * (a.cn * (a.dn - b.dn) + a.sn * w),
            y: (a.sn * (a.dn - b.dn) - a.cn * w) / k,
            theta: -s1 * (b.am - a.am),
        }
    }

    fn eval_o(&self, t: f64) -> RawPose {
        let p = self.params.as_ref().expect("O params");
        let j = self.jacobi.as_ref().expect("O ladder");
        let k = p.k.k();
        let sg = p.sigma_c;
        let u0 = p.phi / k;
        let a = j.eval(u0);
        let b = j.eval(u0 + t / k);
        let w = t / k + a.eps - b.eps;
        RawPose {
            x: sg * k * (a.dn * (a.cn - b.cn) + a.sn * w),
            y: sg * (k * k * a.sn * (a.cn - b.cn) - a.dn * w),
            theta: (k * a.sn).asin() - (k * b.sn).asin(),
        }
    }

    fn eval_sep(&self, t: f64) -> RawPose {
        let p = self.params.as_ref().expect("Sep params");
        let s1 = p.sigma_nu;
        let sg = p.sigma_c;
        let (ta, sa) = (p.phi.tanh(), 1.0 / p.phi.cosh());
        let psi = p.phi + t;
        let (tb, sb) = (psi.tanh(), 1.0 / psi.cosh());
        let w = t + ta - tb;
        RawPose {
            x: s1 * sg * (sa * (sa - sb) + ta * w),
            y: sg * (ta * (sa - sb) - sa * w),
            theta: -s1 * (gd(psi) - gd(p.phi)),
        }
    }

    /// Pendulum state `(ν(t), c(t))` with `ν` wrapped into `[0, 4π)`.
    pub fn state_at(&self, t: f64) -> PendulumState {
        let (sh, ch, c) = self.pendulum_at(t);
        PendulumState::new(2.0 * sh.atan2(ch), c)
    }

    /// `(sin(ν/2), cos(ν/2), c)` at time `t`.
    pub fn pendulum_at(&self, t: f64) -> (f64, f64, f64) {
        let s0 = &self.state0;
        if t == 0.0 {
            let (sh, ch) = (0.5 * s0.nu).sin_cos();
            return (sh, ch, s0.c);
        }
        match self.class {
            GeodesicClass::S | GeodesicClass::U => {
                let (sh, ch) = (0.5 * s0.nu).sin_cos();
                (sh, ch, s0.c)
            }
            GeodesicClass::R => {
                let p = self.params.as_ref().expect("R params");
                let k = p.k.k();
                let b = self.jacobi.as_ref().expect("R ladder").eval(p.phi + t);
                (p.sigma_nu * k * b.sn, p.sigma_nu * b.dn, 2.0 * k * b.cn)
            }
            GeodesicClass::O => {
                let p = self.params.as_ref().expect("O params");
                let k = p.k.k();
                let b = self.jacobi.as_ref().expect("O ladder").eval((p.phi + t) / k);
                (p.sigma_c * b.sn, b.cn, 2.0 * p.sigma_c * b.dn / k)
            }
            GeodesicClass::Sep => {
                let p = self.params.as_ref().expect("Sep params");
                let psi = p.phi + t;
                let sech = 1.0 / psi.cosh();
                (
                    p.sigma_nu * p.sigma_c * psi.tanh(),
                    p.sigma_nu * sech,
                    2.0 * p.sigma_c * sech,
                )
            }
        }
    }

    /// Planar control `u(t) = sin(ν(t)/2)`.
    pub fn control_u(&self, t: f64) -> f64 {
        self.pendulum_at(t).0
    }

    pub fn curvature_at(&self, t: f64) -> f64 {
        let (sh, ch, _) = self.pendulum_at(t);
        curvature_from_half_angle(sh, ch)
    }

    /// Times in `(0, t_max)` where `sin(ν/2)` changes sign.
    pub fn cusp_times(&self, t_max: f64) -> Result<Vec<f64>> {
        self.require_planar()?;
        if self.class == GeodesicClass::U {
            return Ok(Vec::new());
        }
        Ok(self.sign_changes(t_max, |g, t| g.pendulum_at(t).0))
    }

    /// Times in `(0, t_max)` where `cos(ν/2)` changes sign.
    pub fn inflection_times(&self, t_max: f64) -> Result<Vec<f64>> {
        self.require_planar()?;
        match self.class {
            GeodesicClass::U | GeodesicClass::R | GeodesicClass::Sep => Ok(Vec::new()),
            _ => Ok(self.sign_changes(t_max, |g, t| g.pendulum_at(t).1)),
        }
    }

    pub fn sample_curve(&self, t_max: f64, n: usize) -> Result<Vec<CurveSample>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        let h = t_max / (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                let t = if i == n - 1 { t_max } else { i as f64 * h };
                CurveSample {
                    t,
                    pose: self.eval(t),
                    curvature: self.curvature_at(t),
                }
            })
            .collect())
    }

    fn require_planar(&self) -> Result<()> {
        if self.class == GeodesicClass::S {
            Err(Error::UnsupportedClass(GeodesicClass::S))
        } else {
            Ok(())
        }
    }

    fn sign_changes(&self, t_max: f64, f: impl Fn(&Self, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !(t_max > 0.0) {
            return out;
        }
        let step = if self.period.is_finite() {
            self.period / 64.0
        } else {
            APERIODIC_STEP
        };
        let n = (t_max / step).ceil().max(1.0) as usize;
        let h = t_max / n as f64;
        let mut a = 0.0;
        let mut fa = f(self, a);
        if fa == 0.0 {
            fa = f(self, 0.5 * ROOT_TOL);
        }
        for i in 1..=n {
            let b = if i == n { t_max } else { i as f64 * h };
            let fb = f(self, b);
            if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                let r = bisect(|t| f(self, t), a, b, fa);
                if r > 0.0 && r < t_max {
                    out.push(r);
                }
            } else if fb == 0.0 && i < n && b > 0.0 {
                out.push(b);
            }
            a = b;
            fa = fb;
            if fa == 0.0 {
                // step past an exact zero so it is not counted twice
                fa = f(self, a + 0.5 * ROOT_TOL);
            }
        }
        out
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg = fa < 0.0;
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Gudermannian `gd(x) = 2 atan(tanh(x/2))`.
fn gd(x: f64) -> f64 {
    2.0 * (0.5 * x).tanh().atan()
}

fn curvature_from_half_angle(sh: f64, ch: f64) -> f64 {
    if sh.abs() < 1e-300 {
        if ch >= 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        -ch / sh
    }
}

/// Planar curvature `K = −cot(ν/2)`; signed infinity when `sin(ν/2) = 0`.
pub fn curvature(s: &PendulumState) -> f64 {
    let (sh, ch) = (0.5 * s.nu).sin_cos();
    if s.nu == 0.0 {
        return f64::NEG_INFINITY;
    }
    curvature_from_half_angle(sh, ch)
}

/// Endpoint at time `t` of the geodesic leaving `base` with covector `p`.
pub fn exponential_map(base: Pose, p: &Covector, t: f64) -> Result<Pose> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative time {t}")));
    }
    Ok(Geodesic::from_covector(base, p)?.eval(t))
}
