//! Pendulum coordinates on the covector cylinder and the five geodesic classes.
//!
//! On the level `H = ½` the initial covector is encoded by `(ν, c)` with
//!
//! ```text
//! sin(ν/2) = p₁ cos θ + p₂ sin θ,   cos(ν/2) = −p₃,   c = 2 (p₂ cos θ − p₁ sin θ),
//! ```
//!
//! `ν` living on the double cover `R/4πZ`. The vertical flow is the
//! pendulum `ν̈ = −sin ν` with energy `E = c²/2 − cos ν`.
//!
//! Class labels follow the closed forms they select:
//!
//! | class | pendulum motion                      | modulus            | `T_pend`   |
//! |-------|--------------------------------------|--------------------|------------|
//! | `S`   | stable equilibrium `ν ≡ 0 (mod 2π)`   | none               | `∞`        |
//! | `U`   | unstable equilibrium `ν ≡ π (mod 2π)` | none               | `∞`        |
//! | `R`   | `−1 < E < 1`, θ monotone, cusps only  | `k² = (1 + E)/2`   | `4K(k)`    |
//! | `O`   | `E > 1`, cusps and inflections        | `k² = 2/(1 + E)`   | `4kK(k)`   |
//! | `Sep` | `E = 1`, not an equilibrium           | `k = 1`            | `∞`        |
//!
//! For `O` the period is the time for `ν` to advance by `4π`, i.e. to return
//! to the same point of the double cover.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::elliptic::{EllipticModulus, Jacobi};
use crate::error::{Error, Result};

/// Tolerance band for the measure-zero classes (equilibria, separatrix).
pub const DELTA_CLASS: f64 = 1e-10;

/// Allowed deviation `|2H − 1|` of an input covector from the unit level.
pub const LEVEL_TOLERANCE: f64 = 1e-9;

const FOUR_PI: f64 = 4.0 * PI;

/// Momenta `(p₁, p₂, p₃)` dual to `(x, y, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Covector {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }

    /// `H = ½((p₁ cos θ + p₂ sin θ)² + p₃²)` at base angle `θ`.
    pub fn hamiltonian(&self, theta: f64) -> f64 {
        let h = self.p1 * theta.cos() + self.p2 * theta.sin();
        0.5 * (h * h + self.p3 * self.p3)
    }
}

/// Point `(ν, c)` of the pendulum phase cylinder, `ν ∈ [0, 4π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumState {
    pub nu: f64,
    pub c: f64,
}

impl PendulumState {
    pub fn new(nu: f64, c: f64) -> Self {
        let mut w = nu.rem_euclid(FOUR_PI);
        if w >= FOUR_PI {
            w = 0.0;
        }
        Self { nu: w, c }
    }

    /// Planar control `u = sin(ν/2)`.
    pub fn u(&self) -> f64 {
        (0.5 * self.nu).sin()
    }

    /// Angular control `v = −cos(ν/2)`.
    pub fn v(&self) -> f64 {
        -(0.5 * self.nu).cos()
    }
}

/// The five pendulum trajectory types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeodesicClass {
    S,
    U,
    R,
    O,
    Sep,
}

impl fmt::Display for GeodesicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeodesicClass::S => "S",
            GeodesicClass::U => "U",
            GeodesicClass::R => "R",
            GeodesicClass::O => "O",
            GeodesicClass::Sep => "Sep",
        };
        f.write_str(s)
    }
}

/// Action-angle data for the elliptic closed forms.
///
/// `phi` is the phase at `t = 0`: the argument of the Jacobi functions is
/// `phi + t` for `R`, `(phi + t)/k` for `O`, and `phi + t` in the hyperbolic
/// functions for `Sep`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams {
    pub k: EllipticModulus,
    pub phi: f64,
    /// `sgn(c)` at `t = 0` (`+1` when `c = 0`).
    pub sigma_c: f64,
    /// `sgn(cos(ν/2))` at `t = 0`.
    pub sigma_nu: f64,
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn covector_to_pendulum(theta: f64, p: &Covector) -> Result<PendulumState> {
    let defect = (2.0 * p.hamiltonian(theta) - 1.0).abs();
    if !(defect <= LEVEL_TOLERANCE) {
        return Err(Error::OffLevel(defect));
    }
    let (s, c) = theta.sin_cos();
    let h = p.p1 * c + p.p2 * s;
    let nu = 2.0 * h.atan2(-p.p3);
    Ok(PendulumState::new(nu, 2.0 * (p.p2 * c - p.p1 * s)))
}

pub fn pendulum_to_covector(theta: f64, s: &PendulumState) -> Covector {
    let (sh, ch) = (0.5 * s.nu).sin_cos();
    let w = 0.5 * s.c;
    let (st, ct) = theta.sin_cos();
    Covector {
        p1: sh * ct - w * st,
        p2: sh * st + w * ct,
        p3: -ch,
    }
}

/// Pendulum energy `E = c²/2 − cos ν`.
pub fn energy(s: &PendulumState) -> f64 {
    0.5 * s.c * s.c - s.nu.cos()
}

pub fn classify(s: &PendulumState) -> GeodesicClass {
    let nu = s.nu.rem_euclid(FOUR_PI);
    let to_bottom = nu.min((nu - TAU).abs()).min(FOUR_PI - nu);
    let still = s.c.abs() <= DELTA_CLASS;
    if still && to_bottom <= DELTA_CLASS {
        return GeodesicClass::S;
    }
    if still && (0.5 * nu).cos().abs() <= DELTA_CLASS {
        return GeodesicClass::U;
    }
    let e = energy(s);
    if (e - 1.0).abs() <= DELTA_CLASS {
        GeodesicClass::Sep
    } else if e < 1.0 {
        GeodesicClass::R
    } else {
        GeodesicClass::O
    }
}

/// Modulus for the periodic classes, with `k'` computed without cancellation.
pub fn modulus_for(s: &PendulumState, class: GeodesicClass) -> Option<EllipticModulus> {
    let ch = (0.5 * s.nu).cos();
    let e = energy(s);
    match class {
        GeodesicClass::R => {
            // k² = (1+E)/2 = sin²(ν/2) + c²/4,  k'² = cos²(ν/2) − c²/4
            let sh = (0.5 * s.nu).sin();
            let m = sh * sh + 0.25 * s.c * s.c;
            let mc = (ch * ch - 0.25 * s.c * s.c).max(0.0);
            EllipticModulus::from_squares(m.min(1.0), mc.min(1.0)).ok()
        }
        GeodesicClass::O => {
            let m = 2.0 / (1.0 + e);
            let mc = (e - 1.0) / (e + 1.0);
            EllipticModulus::from_squares(m.min(1.0), mc.clamp(0.0, 1.0)).ok()
        }
        GeodesicClass::Sep => EllipticModulus::new(1.0).ok(),
        _ => None,
    }
}

/// Period of the pendulum motion on the double cover; `+∞` for `S`, `U`, `Sep`.
pub fn pendulum_period(s: &PendulumState) -> f64 {
    let class = classify(s);
    match (class, modulus_for(s, class)) {
        (GeodesicClass::R, Some(k)) => 4.0 * Jacobi::new(k).big_k(),
        (GeodesicClass::O, Some(k)) => 4.0 * k.k() * Jacobi::new(k).big_k(),
        _ => f64::INFINITY,
    }
}

pub fn fit_elliptic_params(s: &PendulumState) -> Result<EllipticParams> {
    let class = classify(s);
    let (sh, ch) = (0.5 * s.nu).sin_cos();
    let sigma_c = sign(s.c);
    let sigma_nu = sign(ch);
    match class {
        GeodesicClass::R => {
            // sin(ν/2) = σν k sn φ,  cos(ν/2) = σν dn φ,  c = 2k cn φ
            let k = modulus_for(s, class).expect("R modulus");
            let amp = (sigma_nu * sh).atan2(0.5 * s.c);
            let phi = Jacobi::new(k).inverse_amplitude(amp);
            Ok(EllipticParams {
                k,
                phi,
                sigma_c,
                sigma_nu,
            })
        }
        GeodesicClass::O => {
            // ν/2 = σc am(u),  u = (φ + t)/k
            let k = modulus_for(s, class).expect("O modulus");
            let amp = (sigma_c * sh).atan2(ch);
            let u0 = Jacobi::new(k).inverse_amplitude(amp);
            Ok(EllipticParams {
                k,
                phi: k.k() * u0,
                sigma_c,
                sigma_nu,
            })
        }
        GeodesicClass::Sep => {
            // sin(ν/2) = σν σc tanh φ,  cos(ν/2) = σν sech φ
            let phi = (sigma_nu * sigma_c * sh / ch.abs()).asinh();
            Ok(EllipticParams {
                k: EllipticModulus::new(1.0)?,
                phi,
                sigma_c,
                sigma_nu,
            })
        }
        GeodesicClass::S | GeodesicClass::U => Err(Error::UnsupportedClass(class)),
    }
}
