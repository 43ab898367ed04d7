use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn se2geo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_se2geo"))
        .args(args)
        .output()
        .expect("run se2geo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = se2geo(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn error_of(args: &[&str], code: i32) -> Value {
    let o = se2geo(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}");
    assert!(o.stdout.is_empty());
    serde_json::from_slice(&o.stderr).unwrap()
}

fn schema() -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/se2geo.schema.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&doc).unwrap()
}

fn assert_valid(s: &JSONSchema, doc: &Value) {
    if let Err(errors) = s.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{}: {msgs:?}", doc["command"]);
    }
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("SE2_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert!(expected == actual, "{name} differs from the golden file");
}

#[test]
fn geodesic_csv_rows() {
    let o = se2geo(&["geodesic", "--nu0", "3.141592653589793", "--c0", "0", "--tmax", "2", "--samples", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,theta,curvature"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for (i, r) in rows.iter().enumerate() {
        assert!((r[0] - i as f64).abs() < 1e-12);
        assert!((r[1] - i as f64).abs() < 1e-12);
        assert!(r[2].abs() < 1e-12);
    }
}

#[test]
fn geodesic_json_marks_cusps() {
    let doc = json_of(&["geodesic", "--nu0", "0", "--c0", "3", "--tmax", "14", "--format", "json"]);
    assert_eq!(doc["class"], "O");
    let cusps: Vec<f64> = doc["cusp_times"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(cusps[0], 0.0);
    assert!(cusps.len() >= 5);
    // cusps are evenly spaced for this state
    let step = cusps[1] - cusps[0];
    for w in cusps.windows(2) {
        assert!((w[1] - w[0] - step).abs() < 1e-8);
    }
    assert!(doc["samples"][0]["curvature"].is_null());
}

#[test]
fn geodesic_svg_golden() {
    let o = se2geo(&["geodesic", "--nu0", "0", "--c0", "3", "--tmax", "14", "--samples", "400", "--format", "svg"]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.matches(r#"class="cusp""#).count() >= 5);
    check_golden("geodesic_nu0_0_c0_3.svg", &svg);
}

#[test]
fn solve_examples() {
    let doc = json_of(&["solve", "1", "0", "0"]);
    let m = &doc["minimizers"][0];
    assert_eq!(m["class"], "U");
    assert!((m["length"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(m["t_cut"].is_null());

    let doc = json_of(&["solve", "0", "0", "1.5707963267948966"]);
    let m = &doc["minimizers"][0];
    assert_eq!(m["class"], "S");
    assert!((m["length"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let doc = json_of(&["solve", "--projective", "0", "0", "3.141592653589793"]);
    assert!(doc["minimizers"][0]["length"].as_f64().unwrap() < 1e-9);
    assert_eq!(doc["lift"], "Q2");

    let doc = json_of(&["solve", "--from", "1", "1", "0", "2", "1", "0"]);
    assert!((doc["minimizers"][0]["length"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn solve_csv_has_documented_columns() {
    let o = se2geo(&["solve", "--format", "csv", "0", "0", "3.141592653589793"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,nu0,c0,class,duration,length,residual,t_cut,cusp_times,twin,twin_reflection");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains(",inf,"));
}

#[test]
fn exists_examples() {
    let tag = |x: &str, y: &str, th: &str| json_of(&["exists", x, y, th])["tag"].as_str().unwrap().to_string();
    assert_eq!(tag("1", "0", "0"), "Exists");
    assert_eq!(tag("-1", "0", "0"), "NoSolutionReversed");
    assert_eq!(tag("0", "0", "1"), "NoSolutionAngularCusp");
    assert_eq!(tag("0", "1", "3.141592653589793"), "Exists");
    let o = se2geo(&["exists", "--format", "csv", "1", "0", "0"]);
    assert!(stdout(&o).starts_with("tag,length,internal_cusps,boundary_marginal,twin_consistent\nExists,1.0,"));
}

#[test]
fn usage_errors_exit_2() {
    let s = schema();
    for args in [
        vec!["exists", "1", "2"],
        vec!["solve", "--xi", "-1", "1", "0", "0"],
        vec!["solve", "--xi", "0", "1", "0", "0"],
        vec!["solve", "--format", "svg", "1", "0", "0"],
        vec!["exists", "--format", "svg", "1", "0", "0"],
        vec!["geodesic", "--nu0", "0", "--c0", "nan"],
        vec!["geodesic", "--nu0", "0", "--c0", "1", "--samples", "1"],
        vec!["geodesic", "--nu0", "0", "--c0", "1", "--tmax", "-1"],
        vec!["atlas", "--radius", "0"],
        vec!["atlas", "--grid", "0"],
        vec!["frobnicate"],
        vec!["solve", "1", "0", "zero"],
    ] {
        let doc = error_of(&args, 2);
        assert_valid(&s, &doc);
        assert_eq!(doc["error"]["kind"], "usage", "{args:?}");
        assert!(!doc["error"]["message"].as_str().unwrap().is_empty());
    }
    let doc = error_of(&["exists", "1", "2"], 2);
    assert!(doc["error"]["message"].as_str().unwrap().contains("THETA"));
}

#[test]
fn help_exits_0() {
    let o = se2geo(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("atlas"));
}

#[test]
fn json_documents_validate() {
    let s = schema();
    for args in [
        vec!["geodesic", "--nu0", "0", "--c0", "3", "--format", "json"],
        vec!["geodesic", "--nu0", "3.141592653589793", "--c0", "0", "--format", "json", "--base", "1", "2", "3"],
        vec!["geodesic", "--nu0", "0", "--c0", "2", "--format", "json"],
        vec!["geodesic", "--nu0", "1", "--c0", "0.5", "--format", "json"],
        vec!["solve", "1", "0", "0"],
        vec!["solve", "0.3", "-0.4", "2"],
        vec!["solve", "--xi", "2", "0.3", "0.4", "1"],
        vec!["solve", "--projective", "-0.3", "0.4", "2.5"],
        vec!["exists", "0.5", "0.5", "1"],
        vec!["exists", "-0.5", "0.5", "1"],
        vec!["exists", "0", "0", "1"],
        vec!["atlas", "--grid", "3", "--radius", "1", "--format", "json"],
    ] {
        assert_valid(&s, &json_of(&args));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["atlas", "--grid", "6", "--radius", "1.5"];
    let a = se2geo(&args);
    let b = se2geo(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = se2geo(&seq);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let threads = Command::new(env!("CARGO_BIN_EXE_se2geo"))
        .args(args)
        .env("SE2GEO_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, threads.stdout);
}

fn tag_char(tag: &str) -> char {
    match tag {
        "Exists" => 'E',
        "NoSolutionInternalCusp" => 'c',
        "NoSolutionReversed" => 'r',
        "NoSolutionAngularCusp" => 'a',
        _ => '?',
    }
}

/// One line per planar cell, `i j` followed by the verdict for every heading slice.
#[test]
fn atlas_radius_2_grid_32_golden() {
    let o = se2geo(&["atlas", "--radius", "2", "--grid", "32"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let mut cells: std::collections::BTreeMap<(usize, usize), Vec<(usize, char)>> = Default::default();
    for r in rdr.records() {
        let r = r.unwrap();
        let idx = |n: usize| r[n].parse::<usize>().unwrap();
        cells.entry((idx(0), idx(1))).or_default().push((idx(2), tag_char(&r[6])));
    }
    let mut text = String::new();
    for ((i, j), mut v) in cells {
        v.sort();
        let row: String = v.into_iter().map(|(_, c)| c).collect();
        text.push_str(&format!("{i:2} {j:2} {row}\n"));
    }
    assert!(!text.contains('?'));
    check_golden("atlas_r2_g32.txt", &text);
}
