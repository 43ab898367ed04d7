//! Jacobi elliptic functions and complete elliptic integrals.
//!
//! Every routine takes the *modulus* `k` (not the parameter `m = k²`).
//! All evaluations go through the arithmetic-geometric mean ladder
//! `a₀ = 1, b₀ = k', c₀ = k`, which also yields `K`, `E` and, through the
//! descending Landen amplitudes, the Jacobi epsilon function
//!
//! ```text
//! ε(u, k) = ∫₀ᵘ dn²(s, k) ds = (E/K)·u + Σₙ cₙ sin φₙ .
//! ```
//!
//! At `k' = 0` the ladder degenerates and the hyperbolic closed forms
//! (`sn = tanh`, `cn = dn = sech`, `ε = tanh`) are used instead.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_LADDER: usize = 24;

/// Elliptic modulus `k ∈ [0, 1]` together with its complement `k' = √(1 − k²)`.
///
/// Keeping `k'` explicitly avoids the loss of digits of `√(1 − k²)` when
/// the modulus is within a few ulps of one (near-separatrix motion).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticModulus {
    k: f64,
    kc: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::ModulusDomain(k));
        }
        Ok(Self {
            k,
            kc: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    /// Builds the modulus from `k²` and `1 − k²` computed independently by the caller.
    pub fn from_squares(m: f64, mc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) || !(0.0..=1.0).contains(&mc) {
            return Err(Error::ModulusDomain(m.sqrt()));
        }
        Ok(Self {
            k: m.sqrt(),
            kc: mc.sqrt(),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Complementary modulus `k'`.
    pub fn kc(&self) -> f64 {
        self.kc
    }

    /// Parameter `m = k²`.
    pub fn m(&self) -> f64 {
        self.k * self.k
    }
}

/// Values of the Jacobi functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    /// Jacobi amplitude `am(u)`, continuous in `u`.
    pub am: f64,
    /// Jacobi epsilon `ε(u) = ∫₀ᵘ dn²`.
    pub eps: f64,
}

/// AGM ladder for a fixed modulus; evaluating many arguments at the same
/// modulus reuses it.
#[derive(Debug, Clone)]
pub struct Jacobi {
    modulus: EllipticModulus,
    a: [f64; MAX_LADDER],
    c: [f64; MAX_LADDER],
    levels: usize,
    big_k: f64,
    big_e: f64,
}

impl Jacobi {
    pub fn new(modulus: EllipticModulus) -> Self {
        let mut a = [0.0; MAX_LADDER];
        let mut c = [0.0; MAX_LADDER];
        a[0] = 1.0;
        c[0] = modulus.k;
        let mut b = modulus.kc;
        let mut n = 0;
        if modulus.kc == 0.0 {
            return Self {
                modulus,
                a,
                c,
                levels: 0,
                big_k: f64::INFINITY,
                big_e: 1.0,
            };
        }
        while c[n].abs() > 1e-17 * a[n] && n + 1 < MAX_LADDER {
            let an = 0.5 * (a[n] + b);
            // c_{n+1} = (a_n - b_n)/2 without the cancellation
            c[n + 1] = c[n] * c[n] / (4.0 * an);
            b = (a[n] * b).sqrt();
            a[n + 1] = an;
            n += 1;
        }
        let big_k = FRAC_PI_2 / a[n];
        let mut s = 0.0;
        let mut pow = 0.5;
        for cj in &c[..=n] {
            s += pow * cj * cj;
            pow *= 2.0;
        }
        Self {
            modulus,
            a,
            c,
            levels: n,
            big_k,
            big_e: big_k * (1.0 - s),
        }
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }

    /// Complete integral of the first kind `K(k)`; `+∞` at `k = 1`.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// Complete integral of the second kind `E(k)`.
    pub fn big_e(&self) -> f64 {
        self.big_e
    }

    pub fn eval(&self, u: f64) -> JacobiValues {
        if self.modulus.kc == 0.0 {
            let t = u.tanh();
            let s = 1.0 / u.cosh();
            return JacobiValues {
                sn: t,
                cn: s,
                dn: s,
                am: 2.0 * (0.5 * u).tanh().atan(),
                eps: t,
            };
        }
        let n = self.levels;
        let mut phi = [0.0; MAX_LADDER];
        phi[n] = (1u64 << n) as f64 * self.a[n] * u;
        for j in (1..=n).rev() {
            phi[j - 1] = 0.5 * (phi[j] + (self.c[j] / self.a[j] * phi[j].sin()).asin());
        }
        let am = phi[0];
        let (sn, cn) = am.sin_cos();
        let (k, kc) = (self.modulus.k, self.modulus.kc);
        let dn = (kc * kc + k * k * cn * cn).sqrt();
        let eps = self.big_e / self.big_k * u
            + (1..=n).map(|j| self.c[j] * phi[j].sin()).sum::<f64>();
        JacobiValues {
            sn,
            cn,
            dn,
            am,
            eps,
        }
    }

    /// Solves `am(u) = amp` for `u`; `am` is strictly increasing.
    pub fn inverse_amplitude(&self, amp: f64) -> f64 {
        if self.modulus.kc == 0.0 {
            // only |amp| < π/2 is reachable at k = 1
            let a = amp.clamp(-FRAC_PI_2, FRAC_PI_2);
            return a.tan().asinh();
        }
        let scale = 2.0 * self.big_k / PI;
        // am(u) − πu/2K is 2K-periodic and bounded by π/2
        let mut lo = (amp - FRAC_PI_2) * scale;
        let mut hi = (amp + FRAC_PI_2) * scale;
        let mut u = amp * scale;
        for _ in 0..200 {
            let v = self.eval(u);
            let f = v.am - amp;
            if f.abs() <= 1e-15 * (1.0 + amp.abs()) {
                return u;
            }
            if f > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let newton = u - f / v.dn;
            u = if v.dn > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 4.0 * f64::EPSILON * (1.0 + u.abs()) {
                break;
            }
        }
        u
    }
}

/// Complete elliptic integrals `(K(k), E(k))`; `K(1) = +∞`.
pub fn complete_integrals(k: EllipticModulus) -> (f64, f64) {
    let j = Jacobi::new(k);
    (j.big_k(), j.big_e())
}

/// `(sn, cn, dn)` of `u` at modulus `k`.
pub fn jacobi_sn_cn_dn(u: f64, k: EllipticModulus) -> (f64, f64, f64) {
    let v = Jacobi::new(k).eval(u);
    (v.sn, v.cn, v.dn)
}

/// Jacobi epsilon function `∫₀ᵘ dn²(s, k) ds`.
pub fn jacobi_epsilon(u: f64, k: EllipticModulus) -> f64 {
    Jacobi::new(k).eval(u).eps
}
