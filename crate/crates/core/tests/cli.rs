use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use pptgeom::bipartite::BipartiteSplit;
use pptgeom::io::MatrixJson;
use pptgeom::states::{maximally_entangled, pure_density, werner, WernerParams};

fn pptgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pptgeom")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = pptgeom(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_werner(dir: &Path, d: usize, p: f64) -> String {
    let path = dir.join(format!("werner_{d}_{p}.json"));
    let rho = werner(WernerParams::new(d, p).unwrap());
    MatrixJson::from_matrix(rho.matrix(), Some(BipartiteSplit::symmetric(d).unwrap()))
        .write(&path)
        .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bounds_prints_the_table_with_a_header() {
    let v = json(&["bounds", "--d", "3", "--n", "2"]);
    assert_eq!(v["total_dim"], 9);
    assert!((v["ppt_radius"].as_f64().unwrap() - 0.324_694_469_045_458_6).abs() < 1e-15);
    assert!((v["separable_radius"].as_f64().unwrap() - 0.235_702_260_395_515_84).abs() < 1e-15);
    assert_eq!(v["header"]["tool_version"], "pptgeom 0.1.0");
    assert!(v["header"]["generator_id"].as_str().unwrap().contains("ChaCha20"));
}

#[test]
fn classify_flags_the_werner_probe_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_werner(dir.path(), 3, 0.26);
    let v = json(&["classify", "--input", &input, "--split", "3x3"]);
    assert_eq!(v["zone"], "PPT_BALL_CLAIM");
    assert_eq!(v["numeric_ppt"], false);
    assert_eq!(v["contradiction_flag"], true);
    assert!((v["min_pt_eigenvalue"].as_f64().unwrap() - (0.74 / 9.0 - 0.26 / 3.0)).abs() < 1e-12);

    let input = write_werner(dir.path(), 2, 0.5);
    let v = json(&["classify", "--input", &input, "--split", "2x2"]);
    assert_eq!(v["zone"], "OUTSIDE_BALLS");
    assert_eq!(v["contradiction_flag"], false);
}

#[test]
fn pt_spectrum_accepts_vectors_and_pure_density_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let split = BipartiteSplit::symmetric(2).unwrap();
    let bell = maximally_entangled(2);
    let vec_path = dir.path().join("bell_vec.json");
    MatrixJson::from_vector(bell.amplitudes(), Some(split)).write(&vec_path).unwrap();
    let mat_path = dir.path().join("bell_mat.json");
    MatrixJson::from_matrix(pure_density(&bell).matrix(), Some(split)).write(&mat_path).unwrap();

    for path in [&vec_path, &mat_path] {
        let v = json(&["pt-spectrum", "--input", path.to_str().unwrap(), "--split", "2x2"]);
        let analytic: Vec<f64> = serde_json::from_value(v["analytic"].clone()).unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        assert!(analytic.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-12), "{analytic:?}");
        assert!(v["max_deviation"].as_f64().unwrap() <= 1e-12);
        assert_eq!(v["schmidt_rank"], 2);
    }
}

#[test]
fn werner_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = pptgeom(&["werner-sweep", "--d", "3", "--grid", "5", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let p_star: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# p_star="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((p_star - 0.25).abs() <= 1e-9);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "p,distance,min_pt_eig,ppt");
    assert_eq!(body.len(), 6);
}

#[test]
fn shell_scan_and_claim_check_run() {
    let out = pptgeom(&[
        "shell-scan", "--N", "4", "--split", "2x2", "--radii", "0.1,0.2,0.28", "--samples", "50", "--seed", "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# seed=3"));
    let all_ppt = text.lines().filter(|l| l.contains(",50,50,50,1.0000000000000000e0,")).count();
    assert_eq!(all_ppt, 3, "{text}");

    let v = json(&["claim-check", "--d", "2", "--samples", "50", "--seed", "1"]);
    assert_eq!(v["verdict"], "CONSISTENT");
    assert!(v["counterexample"].is_null());
}

#[test]
fn distill_witness_finds_the_bell_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_werner(dir.path(), 2, 1.0);
    let v = json(&["distill-witness", "--input", &input, "--split", "2x2", "--seed", "5"]);
    assert_eq!(v["found"], true);
    assert!((v["value"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert_eq!(v["witness"]["dim"], 4);
}

#[test]
fn bad_input_fails_with_a_message() {
    let out = pptgeom(&["bounds", "--d", "1", "--n", "2"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
    let out = pptgeom(&["classify", "--input", "/nonexistent.json", "--split", "3x3"]);
    assert!(!out.status.success());
    let out = pptgeom(&["classify", "--input", "x.json", "--split", "3by3"]);
    assert!(!out.status.success());
}
