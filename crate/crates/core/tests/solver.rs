mod common;

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use common::components;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use se2_core::geodesic::Geodesic;
use se2_core::pendulum::{GeodesicClass, PendulumState};
use se2_core::pose::Pose;
use se2_core::solver::{
    atlas, pcurve_existence, solve_pmec, AtlasSpec, BoundaryPair, Execution, ExistenceTag, Lift,
    Solver,
};
use se2_core::symmetry::Reflection;

fn length(q_in: Pose, q_fin: Pose) -> f64 {
    solve_pmec(&BoundaryPair::new(q_in, q_fin, 1.0).unwrap()).unwrap()[0].length
}

fn random_pose(rng: &mut ChaCha8Rng, r: f64) -> Pose {
    Pose::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(0.0..TAU))
}

#[test]
fn half_period_target_has_reflected_twin() {
    let s = PendulumState::new(0.4, 0.9);
    let g = Geodesic::new(Pose::ORIGIN, s);
    assert_eq!(g.class, GeodesicClass::R);
    let t = 0.5 * g.period();
    let m = solve_pmec(&BoundaryPair::from_origin(g.eval(t))).unwrap();
    assert_eq!(m.len(), 2);
    assert!((m[0].length - t).abs() <= 1e-8);
    assert!((m[0].length - m[1].length).abs() <= 1e-8);
    assert_eq!(m[0].twin_reflection, Some(Reflection::T));
    let a = m[0].pose_at(t);
    let b = m[1].pose_at(t);
    assert!(a.residual(&b) <= 1e-8);
    assert!((m[0].state0().nu - m[1].state0().nu).abs() > 1e-3);
}

#[test]
fn half_turn_in_place_has_two_rotations() {
    let m = solve_pmec(&BoundaryPair::from_origin(Pose::new(0.0, 0.0, PI))).unwrap();
    assert_eq!(m.len(), 2);
    assert!((m[0].length - PI).abs() < 1e-12);
    assert_eq!(m[0].class(), GeodesicClass::S);
}

#[test]
fn no_shorter_geodesic_is_found_by_random_shooting() {
    let solver = Solver::shared();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let target = random_pose(&mut rng, 1.5);
        let best = solve_pmec(&BoundaryPair::from_origin(target)).unwrap()[0].length;
        for _ in 0..150 {
            let z0 = [rng.gen_range(0.0..2.0 * TAU), rng.gen_range(-6.0..6.0), rng.gen_range(0.05..1.5) * best];
            let z = solver.shoot(z0, &target);
            let end = Geodesic::new(Pose::ORIGIN, PendulumState::new(z[0], z[1])).eval(z[2]);
            if end.residual(&target) < 1e-9 && z[2] > 0.0 {
                assert!(z[2] >= best - 1e-8, "{target:?}: {} < {best}", z[2]);
            }
        }
    }
}

#[test]
fn distance_is_left_invariant_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let (a, b, g) = (random_pose(&mut rng, 1.0), random_pose(&mut rng, 1.0), random_pose(&mut rng, 2.0));
        let f = g.as_frame();
        let d = length(a, b);
        assert!((d - length(f.apply(&a), f.apply(&b))).abs() <= 1e-8);
        assert!((d - length(b, a)).abs() <= 1e-8);
    }
}

#[test]
fn triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (a, b, c) = (random_pose(&mut rng, 1.0), random_pose(&mut rng, 1.0), random_pose(&mut rng, 1.0));
        assert!(length(a, c) <= length(a, b) + length(b, c) + 1e-8);
    }
}

#[test]
fn existence_examples() {
    let tag = |x, y, th| pcurve_existence(&BoundaryPair::from_origin(Pose::new(x, y, th))).unwrap();
    let v = tag(2.0, 0.0, 0.0);
    assert_eq!(v.tag, ExistenceTag::Exists);
    assert_eq!(v.witness.length, 2.0);
    assert_eq!(tag(0.0, 0.0, 1.0).tag, ExistenceTag::NoSolutionAngularCusp);
    assert_eq!(tag(-1.0, 0.0, 0.0).tag, ExistenceTag::NoSolutionReversed);
    // reaching x = 0 with heading π ends on a cusp, which is allowed
    let v = tag(0.0, 1.0, PI);
    assert_eq!(v.tag, ExistenceTag::Exists);
    assert!(v.internal_cusps.is_empty());
    let v = tag(-0.5, 0.5, 1.0);
    assert_eq!(v.tag, ExistenceTag::NoSolutionInternalCusp);
    assert!(v.twin_consistent);
}

#[test]
fn reversed_minimizers_mirror_forward_ones() {
    // (x, y, θ) ↦ (−x, y, −θ) runs the same planar curve backwards
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let p = Pose::new(rng.gen_range(0.1..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(0.0..TAU));
        let a = pcurve_existence(&BoundaryPair::from_origin(p)).unwrap();
        let b = pcurve_existence(&BoundaryPair::from_origin(Pose::new(-p.x, p.y, -p.theta))).unwrap();
        assert!((a.witness.length - b.witness.length).abs() <= 1e-8);
        if a.tag == ExistenceTag::Exists {
            assert_eq!(b.tag, ExistenceTag::NoSolutionReversed);
        }
    }
}

#[test]
fn small_atlas_is_symmetric_connected_and_schedule_independent() {
    let spec = AtlasSpec { radius: 1.5, grid: 10 };
    let solver = Solver::shared();
    let par = atlas(&spec, solver, Execution::Parallel);
    let seq = atlas(&spec, solver, Execution::Sequential);
    assert_eq!(par, seq);
    let tags: std::collections::HashMap<_, _> = par.iter().map(|e| (e.index, e.tag)).collect();
    for e in &par {
        assert!(e.error.is_none(), "{e:?}");
        assert_eq!(tags[&spec.mirror(e.index)], e.tag, "{:?}", e.target);
        if e.tag == Some(ExistenceTag::Exists) {
            assert!(e.target.x >= 0.0);
        }
    }
    let exists: HashSet<_> = par.iter().filter(|e| e.tag == Some(ExistenceTag::Exists)).map(|e| e.index).collect();
    assert!(!exists.is_empty());
    assert_eq!(components(&exists, spec.grid), 1);
}

#[test]
fn projective_lifts_pair_up() {
    let solver = Solver::shared();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let bp = BoundaryPair::new(random_pose(&mut rng, 1.0), random_pose(&mut rng, 1.0), 1.0).unwrap();
        let l: Vec<f64> = Lift::ALL.iter().map(|&q| solver.solve_lift(&bp, q).unwrap()[0].length).collect();
        assert!((l[0] - l[3]).abs() <= 1e-8);
        assert!((l[1] - l[2]).abs() <= 1e-8);
        let p = solver.solve_pprojective(&bp).unwrap();
        assert!((p.minimizer.length - l[0].min(l[1])).abs() <= 1e-8);
        assert!(p.partner_residual <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dilation_preserves_cost(
        xi in 0.2..5.0f64,
        x in -1.0..1.0f64, y in -1.0..1.0f64, th in 0.0..TAU,
    ) {
        let q = Pose::new(x, y, th);
        let a = solve_pmec(&BoundaryPair::new(Pose::ORIGIN, q, xi).unwrap()).unwrap();
        let b = solve_pmec(&BoundaryPair::from_origin(Pose::new(xi * x, xi * y, th))).unwrap();
        prop_assert!((a[0].length - b[0].length).abs() <= 1e-8);
        prop_assert!(a[0].pose_at(a[0].duration).residual(&q) <= 1e-8);
    }
}
