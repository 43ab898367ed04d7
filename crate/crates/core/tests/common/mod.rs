#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use se2_core::pendulum::PendulumState;
use se2_core::pose::{angdist, Pose};

pub fn pose_error(a: &Pose, b: &Pose) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs()).max(angdist(a.theta, b.theta))
}

/// States spread over every class, including the measure-zero ones.
pub fn sample_states(n: usize, seed: u64) -> Vec<PendulumState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        PendulumState::new(0.0, 0.0),
        PendulumState::new(2.0 * PI, 0.0),
        PendulumState::new(PI, 0.0),
        PendulumState::new(3.0 * PI, 0.0),
        PendulumState::new(0.0, 2.0),
        PendulumState::new(0.0, -2.0),
        PendulumState::new(2.0 * PI, 2.0),
        PendulumState::new(0.0, 3.0),
        PendulumState::new(0.0, 1.0),
    ];
    while out.len() < n {
        let nu = rng.gen_range(0.0..4.0 * PI);
        let s = match out.len() % 4 {
            // on the separatrix
            0 => PendulumState::new(nu, (2.0 * (1.0 + nu.cos())).sqrt() * if rng.gen() { 1.0 } else { -1.0 }),
            _ => PendulumState::new(nu, rng.gen_range(-4.0..4.0)),
        };
        out.push(s);
    }
    out
}

/// Number of 26-connected components of a set of grid cells, with the last
/// coordinate periodic of length `n`.
pub fn components(cells: &std::collections::HashSet<[usize; 3]>, n: usize) -> usize {
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for &start in cells {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut queue = vec![start];
        while let Some(c) = queue.pop() {
            for d in 0..27i64 {
                let (di, dj, dk) = (d % 3 - 1, d / 3 % 3 - 1, d / 9 - 1);
                let (i, j) = (c[0] as i64 + di, c[1] as i64 + dj);
                if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
                    continue;
                }
                let k = (c[2] as i64 + dk).rem_euclid(n as i64) as usize;
                let nb = [i as usize, j as usize, k];
                if cells.contains(&nb) && seen.insert(nb) {
                    queue.push(nb);
                }
            }
        }
    }
    count
}

/// Central difference of the pose at `t`, as `(ẋ, ẏ, θ̇)`.
pub fn pose_rate(f: impl Fn(f64) -> Pose, t: f64, h: f64) -> (f64, f64, f64) {
    let (a, b) = (f(t - h), f(t + h));
    (
        (b.x - a.x) / (2.0 * h),
        (b.y - a.y) / (2.0 * h),
        se2_core::pose::angle_diff(b.theta, a.theta) / (2.0 * h),
    )
}
