//! Static SVG 1.1 figures. Screen `y` grows downwards, so plane `y` is flipped.

use std::fmt::Write;

use se2_core::geodesic::{CurveSample, Geodesic};
use se2_core::solver::{AtlasEntry, AtlasSpec, ExistenceTag};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 24.0;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<rect width="{w}" height="{h}" fill="white"/>"#
    );
}

pub fn geodesic(g: &Geodesic, samples: &[CurveSample], cusps: &[f64]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        x0 = x0.min(s.pose.x);
        x1 = x1.max(s.pose.x);
        y0 = y0.min(s.pose.y);
        y1 = y1.max(s.pose.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let px = |x: f64| MARGIN + (x - x0) * scale;
    let py = |y: f64| SIZE - MARGIN - (y - y0) * scale;

    let mut out = String::new();
    header(&mut out, SIZE, SIZE);
    let _ = writeln!(
        out,
        "<title>geodesic nu0={} c0={} class {}</title>",
        g.state0.nu, g.state0.c, g.class
    );
    let points: Vec<String> = samples
        .iter()
        .map(|s| format!("{:.3},{:.3}", px(s.pose.x), py(s.pose.y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="curve" fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
    if let (Some(a), Some(b)) = (samples.first(), samples.last()) {
        let _ = writeln!(
            out,
            r#"<circle class="start" cx="{:.3}" cy="{:.3}" r="4" fill="green"/>"#,
            px(a.pose.x),
            py(a.pose.y)
        );
        let _ = writeln!(
            out,
            r#"<rect class="end" x="{:.3}" y="{:.3}" width="7" height="7" fill="blue"/>"#,
            px(b.pose.x) - 3.5,
            py(b.pose.y) - 3.5
        );
    }
    for &t in cusps {
        let p = g.eval(t);
        let (cx, cy) = (px(p.x), py(p.y));
        let _ = writeln!(
            out,
            r#"<path class="cusp" d="M{:.3},{:.3} l10,10 m0,-10 l-10,10" stroke="red" stroke-width="2"/>"#,
            cx - 5.0,
            cy - 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn colour(tag: Option<ExistenceTag>) -> &'static str {
    match tag {
        Some(ExistenceTag::Exists) => "#1f4e9c",
        Some(ExistenceTag::NoSolutionInternalCusp) => "#e6e6e6",
        Some(ExistenceTag::NoSolutionReversed) => "#b9d3ee",
        Some(ExistenceTag::NoSolutionAngularCusp) => "#f0a030",
        None => "#d03030",
    }
}

/// One panel per heading slice; each panel is the disk of targets coloured by verdict.
pub fn atlas(spec: &AtlasSpec, entries: &[AtlasEntry]) -> String {
    let n = spec.grid;
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let panel = 120.0;
    let gap = 18.0;
    let cell = panel / n as f64;
    let w = cols as f64 * (panel + gap) + gap;
    let h = rows as f64 * (panel + gap) + gap + 30.0;

    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(out, "<title>existence atlas radius {} grid {}</title>", spec.radius, n);
    for k in 0..n {
        let (ox, oy) = (gap + (k % cols) as f64 * (panel + gap), gap + (k / cols) as f64 * (panel + gap));
        let _ = writeln!(
            out,
            r##"<g class="slice" data-theta="{}"><rect x="{ox:.2}" y="{oy:.2}" width="{panel}" height="{panel}" fill="none" stroke="#999"/>"##,
            spec.angle(k)
        );
        for e in entries.iter().filter(|e| e.index[2] == k) {
            let (i, j) = (e.index[0], e.index[1]);
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                ox + i as f64 * cell,
                oy + (n - 1 - j) as f64 * cell,
                cell,
                cell,
                colour(e.tag)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">θ = {:.3}</text></g>"#,
            ox,
            oy + panel + 11.0,
            spec.angle(k)
        );
    }
    let legend = [
        (Some(ExistenceTag::Exists), "Exists"),
        (Some(ExistenceTag::NoSolutionInternalCusp), "internal cusp"),
        (Some(ExistenceTag::NoSolutionReversed), "reversed"),
        (Some(ExistenceTag::NoSolutionAngularCusp), "angular cusp"),
        (None, "unsolved"),
    ];
    for (m, (tag, label)) in legend.iter().enumerate() {
        let x = gap + m as f64 * 110.0;
        let y = h - 22.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="10" height="10" fill="{}"/><text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{label}</text>"#,
            colour(*tag),
            x + 14.0,
            y + 9.0
        );
    }
    out.push_str("</svg>\n");
    out
}
