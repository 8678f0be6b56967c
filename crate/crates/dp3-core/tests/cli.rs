use std::process::{Command, Output};

use dp3_core::surface::export::parse_obj;
use dp3_core::surface::SurfaceMesh;

fn dp3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp3")).args(args).env("DP3_THREADS", "2").output().unwrap()
}

#[test]
fn solve_prints_fixed_keys() {
    let out = dp3(&["solve", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = ["lambda", "lambda1", "lambda2", "alpha", "a", "b", "xi1", "xi2", "v1x", "v2y", "tol"];
    want.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, want);
    assert!(v["xi1"].as_f64().unwrap().abs() < 1e-10);
    assert!(v["xi2"].as_f64().unwrap().abs() < 1e-10);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("\"lambda\": 5.0000000000000000e-1"));
    assert_eq!(dp3(&["solve", "--lambda", "0.5"]).stdout, out.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["solve", "--lambda", "1.5"][..],
        &["solve"],
        &["frobnicate"],
        &["mesh", "--lambda", "0.4", "--copies", "2by2"],
        &["sweep", "--lambda-min", "0", "--lambda-max", "0.5", "--steps", "3"],
    ] {
        assert_eq!(dp3(args).status.code(), Some(2), "{args:?}");
    }
    let bad_env = Command::new(env!("CARGO_BIN_EXE_dp3"))
        .args(["solve", "--lambda", "0.5"])
        .env("DP3_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn sweep_rows_are_continuous() {
    let out = dp3(&["sweep", "--lambda-min", "0.1", "--lambda-max", "0.9", "--steps", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,lambda1,lambda2,a,b,v1x,v2y"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    for w in rows.windows(2) {
        assert!((w[1][1] - w[0][1]).abs() < 0.1);
        assert!(w[1][2] < w[0][2]);
    }
}

#[test]
fn signfield_csv() {
    let out = dp3(&["signfield", "--lambda", "0.5", "--n-lambda1", "4", "--n-ratio", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda1,lambda2,sign_xi1,sign_xi2");
    assert_eq!(lines.len(), 21);
}

#[test]
fn mesh_outputs_are_deterministic_manifolds() {
    let dir = std::env::temp_dir().join(format!("dp3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let obj = dir.join("s.obj");
    let ply = dir.join("s.ply");
    let run = |path: &std::path::Path, extra: &[&str]| {
        let mut args = vec!["mesh", "--lambda", "0.4", "--resolution", "16", "--copies", "2x2", "--out", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(dp3(&args).status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let first = run(&obj, &[]);
    assert_eq!(run(&obj, &[]), first);
    let (vertices, faces) = parse_obj(std::str::from_utf8(&first).unwrap()).unwrap();
    let n = vertices.len();
    let mesh = SurfaceMesh { vertices, faces, provenance: vec![Default::default(); n], labels: vec![Default::default(); n], is_conjugate: false };
    assert!(mesh.is_manifold());
    assert_eq!(mesh.components(), 1);

    let bytes = run(&ply, &[]);
    let header = String::from_utf8_lossy(&bytes[..200]);
    assert!(header.starts_with("ply\nformat binary_little_endian 1.0\n"));
    assert!(header.contains(&format!("element vertex {n}\n")));

    let conj = run(&obj, &["--conjugate"]);
    let (cv, _) = parse_obj(std::str::from_utf8(&conj).unwrap()).unwrap();
    assert!(cv.len() < n);
    std::fs::remove_dir_all(&dir).unwrap();
}
