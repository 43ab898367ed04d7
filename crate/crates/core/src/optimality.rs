//! Cut times, optimality and the first cusp.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::Geodesic;
use crate::pendulum::GeodesicClass;
use crate::symmetry::{maxwell_check, maxwell_function, Reflection, MAXWELL_TOL};

const SCAN_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMethod {
    HalfPeriod,
    MaxwellSearch,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutInfo {
    pub t_cut: f64,
    pub method: CutMethod,
    pub t_cusp_first: f64,
    /// Reflection realizing the cut as a Maxwell point, when it is one.
    pub reflection: Option<Reflection>,
}

pub fn cut_time(g: &Geodesic) -> Result<CutInfo> {
    let (t_cut, method, reflection) = match g.class {
        GeodesicClass::R => (0.5 * g.period(), CutMethod::HalfPeriod, Some(Reflection::T)),
        GeodesicClass::O => {
            let (t, r) = oscillating_cut(g)?;
            (t, CutMethod::MaxwellSearch, Some(r))
        }
        _ => (f64::INFINITY, CutMethod::Infinite, None),
    };
    Ok(CutInfo {
        t_cut,
        method,
        t_cusp_first: first_cusp_before(g, t_cut),
        reflection,
    })
}

/// First nontrivial Maxwell time in `(T/2, T)`.
///
/// Both reflections are scanned; sign changes of the Maxwell functions are
/// refined and kept only when the endpoint images agree and the reflected
/// segment differs from the original.
fn oscillating_cut(g: &Geodesic) -> Result<(f64, Reflection)> {
    let period = g.period();
    let (lo, hi) = (0.5 * period, period);
    let h = (hi - lo) / SCAN_POINTS as f64;
    let nu0 = g.state0.nu;
    // ν(t) continued from a nearby reference value
    let unwrap = |t: f64, near: f64| {
        let d = (g.state_at(t).nu - near).rem_euclid(2.0 * TAU);
        near + if d > TAU { d - 2.0 * TAU } else { d }
    };
    let mut best: Option<(f64, Reflection)> = None;
    for r in [Reflection::S, Reflection::T] {
        // the S function also vanishes where the arc is its own image,
        // that is where ν(t) + ν₀ is a multiple of 4π; divide that out
        let f = |t: f64, nu: f64| match r {
            Reflection::S => maxwell_function(g, t, r) / (0.25 * (nu + nu0)).sin(),
            Reflection::T => maxwell_function(g, t, r),
        };
        let mut a = lo;
        let mut nu_a = unwrap(lo, nu0);
        let mut fa = f(a, nu_a);
        for i in 1..=SCAN_POINTS {
            let b = if i == SCAN_POINTS { hi } else { lo + i as f64 * h };
            if best.is_some_and(|(t, _)| a >= t) {
                break;
            }
            let nu_b = unwrap(b, nu_a);
            let fb = f(b, nu_b);
            if (fa < 0.0) != (fb < 0.0) || fb == 0.0 {
                let t = refine(&|t| f(t, unwrap(t, nu_a)), a, b, fa);
                if t > lo && t < hi {
                    let check = maxwell_check(g, t, r);
                    if check.is_maxwell(MAXWELL_TOL) && best.is_none_or(|(bt, _)| t < bt) {
                        best = Some((t, r));
                        break;
                    }
                }
            }
            a = b;
            nu_a = nu_b;
            fa = fb;
        }
    }
    best.ok_or(Error::MaxwellSearch { lo, hi })
}

fn refine(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg = fa < 0.0;
    for _ in 0..200 {
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

fn first_cusp_before(g: &Geodesic, t_cut: f64) -> f64 {
    let horizon = match g.class {
        GeodesicClass::S | GeodesicClass::U => return f64::INFINITY,
        GeodesicClass::Sep => {
            // tanh(φ + t) vanishes once, at t = −φ
            let phi = g.params.map_or(0.0, |p| p.phi);
            2.0 * phi.abs() + 1.0
        }
        _ => t_cut * (1.0 + 1e-12) + 1e-12,
    };
    g.cusp_times(horizon)
        .ok()
        .and_then(|v| v.first().copied())
        .unwrap_or(f64::INFINITY)
}

pub fn first_cusp_time(g: &Geodesic) -> Result<f64> {
    Ok(cut_time(g)?.t_cusp_first)
}

/// Whether the geodesic minimizes length on `[0, T]`; the cut time itself is included.
pub fn is_optimal(g: &Geodesic, t: f64) -> Result<bool> {
    Ok(t <= cut_time(g)?.t_cut)
}
