//! CSV and JSON renderings, plus the error document written to stderr.
//!
//! CSV columns are stable:
//! - geodesic: `t,x,y,theta,curvature`
//! - solve: `index,nu0,c0,class,duration,length,residual,t_cut,cusp_times,twin,twin_reflection`
//! - exists: `tag,length,internal_cusps,boundary_marginal,twin_consistent`
//! - atlas: `i,j,k,x,y,theta,tag,length,boundary_marginal`
//!
//! Lists inside a CSV cell are separated by `;`. Infinite values print as `inf`.

use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};
use se2_core::geodesic::{CurveSample, Geodesic};
use se2_core::pose::Pose;
use se2_core::solver::{AtlasEntry, AtlasSpec, BoundaryPair, ExistenceVerdict, Lift, Minimizer};

/// Version of the JSON documents; see `schema/se2geo.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug)]
pub struct Failure {
    usage: bool,
    message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Self { usage: true, message }
    }

    pub fn usage_from(e: se2_core::Error) -> Self {
        Self::usage(e.to_string())
    }

    pub fn numerical(e: se2_core::Error) -> Self {
        Self { usage: false, message: e.to_string() }
    }

    pub fn emit(self) -> ExitCode {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "error",
            "error": {
                "kind": if self.usage { "usage" } else { "numerical" },
                "message": self.message,
            },
        });
        eprintln!("{doc}");
        ExitCode::from(if self.usage { 2 } else { 1 })
    }
}

fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|&t| num(t)).collect::<Vec<_>>().join(";")
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() { json!(v) } else { Value::Null }
}

fn csv_text<R: Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json value");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    x: f64,
    y: f64,
    theta: f64,
    curvature: String,
}

pub fn geodesic_csv(samples: &[CurveSample]) -> String {
    csv_text(samples.iter().map(|s| CurveRow {
        t: s.t,
        x: s.pose.x,
        y: s.pose.y,
        theta: s.pose.theta,
        curvature: num(s.curvature),
    }))
}

pub fn geodesic_json(g: &Geodesic, samples: &[CurveSample], cusps: &[f64]) -> String {
    pretty(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "geodesic",
        "state": { "nu": g.state0.nu, "c": g.state0.c },
        "base": pose_json(&g.base),
        "class": g.class.to_string(),
        "period": finite_or_null(g.period()),
        "cusp_times": cusps,
        "samples": samples.iter().map(|s| json!({
            "t": s.t,
            "x": s.pose.x,
            "y": s.pose.y,
            "theta": s.pose.theta,
            "curvature": finite_or_null(s.curvature),
        })).collect::<Vec<_>>(),
    }))
}

fn pose_json(p: &Pose) -> Value {
    json!({ "x": p.x, "y": p.y, "theta": p.theta })
}

fn minimizer_json(m: &Minimizer) -> Value {
    json!({
        "nu0": m.state0().nu,
        "c0": m.state0().c,
        "class": m.class().to_string(),
        "duration": m.duration,
        "length": m.length,
        "residual": m.residual,
        "t_cut": finite_or_null(m.cut.t_cut),
        "cusp_times": m.cusp_times,
        "twin": m.twin.is_some(),
        "twin_reflection": m.twin_reflection.map(|r| format!("{r:?}")),
    })
}

#[derive(Serialize)]
struct SolveRow {
    index: usize,
    nu0: f64,
    c0: f64,
    class: String,
    duration: f64,
    length: f64,
    residual: f64,
    t_cut: String,
    cusp_times: String,
    twin: bool,
    twin_reflection: String,
}

pub fn solve_csv(ms: &[Minimizer]) -> String {
    csv_text(ms.iter().enumerate().map(|(index, m)| SolveRow {
        index,
        nu0: m.state0().nu,
        c0: m.state0().c,
        class: m.class().to_string(),
        duration: m.duration,
        length: m.length,
        residual: m.residual,
        t_cut: num(m.cut.t_cut),
        cusp_times: list(&m.cusp_times),
        twin: m.twin.is_some(),
        twin_reflection: m.twin_reflection.map(|r| format!("{r:?}")).unwrap_or_default(),
    }))
}

pub fn solve_json(bp: &BoundaryPair, projective: bool, lift: Option<Lift>, ms: &[Minimizer]) -> String {
    pretty(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "from": pose_json(&bp.q_in),
        "target": pose_json(&bp.q_fin),
        "xi": bp.xi,
        "projective": projective,
        "lift": lift.map(|l| format!("{l:?}")),
        "minimizers": ms.iter().map(minimizer_json).collect::<Vec<_>>(),
    }))
}

#[derive(Serialize)]
struct ExistsRow {
    tag: String,
    length: f64,
    internal_cusps: String,
    boundary_marginal: bool,
    twin_consistent: bool,
}

pub fn exists_csv(v: &ExistenceVerdict) -> String {
    csv_text([ExistsRow {
        tag: v.tag.to_string(),
        length: v.witness.length,
        internal_cusps: list(&v.internal_cusps),
        boundary_marginal: v.boundary_marginal,
        twin_consistent: v.twin_consistent,
    }])
}

pub fn exists_json(q: &Pose, v: &ExistenceVerdict) -> String {
    pretty(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "exists",
        "target": pose_json(q),
        "tag": v.tag.to_string(),
        "length": v.witness.length,
        "internal_cusps": v.internal_cusps,
        "boundary_marginal": v.boundary_marginal,
        "twin_consistent": v.twin_consistent,
        "witness": minimizer_json(&v.witness),
    }))
}

#[derive(Serialize)]
struct AtlasRow {
    i: usize,
    j: usize,
    k: usize,
    x: f64,
    y: f64,
    theta: f64,
    tag: String,
    length: String,
    boundary_marginal: bool,
}

pub fn atlas_csv(entries: &[AtlasEntry]) -> String {
    csv_text(entries.iter().map(|e| AtlasRow {
        i: e.index[0],
        j: e.index[1],
        k: e.index[2],
        x: e.target.x,
        y: e.target.y,
        theta: e.target.theta,
        tag: e.tag.map_or_else(|| "Unsolved".to_string(), |t| t.to_string()),
        length: e.length.map(num).unwrap_or_default(),
        boundary_marginal: e.boundary_marginal,
    }))
}

pub fn atlas_json(spec: &AtlasSpec, entries: &[AtlasEntry]) -> String {
    pretty(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "atlas",
        "radius": spec.radius,
        "grid": spec.grid,
        "entries": entries.iter().map(|e| json!({
            "index": e.index,
            "x": e.target.x,
            "y": e.target.y,
            "theta": e.target.theta,
            "tag": e.tag.map(|t| t.to_string()),
            "length": e.length,
            "boundary_marginal": e.boundary_marginal,
            "error": e.error,
        })).collect::<Vec<_>>(),
    }))
}
