use std::path::PathBuf;

use crbirat::cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crbirat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cli(args: &[&str]) -> (i32, Value) {
    run(std::iter::once("crbirat").chain(args.iter().copied()))
}

/// Solves the Heisenberg algebra once and stores the real basis as a file.
fn heisenberg_basis() -> String {
    let path = scratch("heisenberg_basis.json");
    if !path.exists() {
        let (code, rep) = cli(&["hol", "solve", "--manifold", &fixture("heisenberg.json")]);
        assert_eq!(code, 0);
        let tmp = path.with_extension("partial");
        std::fs::write(&tmp, rep["results"]["basis"].to_string()).unwrap();
        std::fs::rename(&tmp, &path).unwrap();
    }
    path.to_string_lossy().into_owned()
}

#[test]
fn hol_solve_heisenberg() {
    let (code, rep) = cli(&["hol", "solve", "--manifold", &fixture("heisenberg.json"), "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["results"]["dim_real"], 8);
    assert_eq!(rep["results"]["dim_complex"], 8);
    assert_eq!(rep["results"]["totally_real"], true);
    assert_eq!(rep["results"]["closed"], true);
    assert_eq!(rep["results"]["killing_inertia"], serde_json::json!({ "positive": 4, "negative": 4, "zero": 0 }));
    let inputs = rep["inputs"].as_object().unwrap();
    assert_eq!(inputs.len(), 1);
    assert_eq!(inputs.values().next().unwrap().as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_reproducible() {
    let args = ["--seed", "7", "reg", "verify", "--basis", &heisenberg_basis(), "--map", &fixture("inversion.json"), "--samples", "4"];
    let (c1, mut r1) = cli(&args);
    let (c2, mut r2) = cli(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    r1.as_object_mut().unwrap().remove("timing");
    r2.as_object_mut().unwrap().remove("timing");
    assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
}

#[test]
fn out_file_matches_stdout_report() {
    let out = scratch("form_report.json");
    let (code, rep) = cli(&["--out", out.to_str().unwrap(), "check", "form", "--manifold", &fixture("heisenberg.json")]);
    assert_eq!(code, 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, rep);
}

#[test]
fn duplicated_forms_fail_nondegeneracy() {
    let (code, rep) = cli(&["check", "form", "--manifold", &fixture("duplicated_forms.json")]);
    assert_eq!(code, 1);
    assert_eq!(rep["status"], "fail");
    assert_eq!(rep["results"]["independent"], false);
}

#[test]
fn light_cone_tube_conditions() {
    let (code, rep) = cli(&["check", "tube", "--manifold", &fixture("light_cone.json")]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["not_in_hyperplane"], true);
    assert_eq!(rep["results"]["no_tangent_constant"], true);
}

#[test]
fn grading_and_constants() {
    let basis = heisenberg_basis();
    let (code, rep) = cli(&["lie", "grade", "--basis", &basis]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["dims"], serde_json::json!({ "-1": 2, "0": 4, "1": 2 }));
    let (code, rep) = cli(&["lie", "constants", "--basis", &basis]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["jacobi"], true);
    let (code, _) = cli(&["check", "property-p", "--basis", &basis]);
    assert_eq!(code, 0);
}

#[test]
fn plucker_point_of_heisenberg() {
    let (code, rep) = cli(&["reg", "phi", "--basis", &heisenberg_basis(), "--point", &fixture("point_1_i.json")]);
    assert_eq!(code, 0);
    // C(8, 6) − 1
    assert_eq!(rep["results"]["projective_dim"], 27);
}

#[test]
fn perturbed_pushforward_is_rejected() {
    let basis = heisenberg_basis();
    let mut nu = vec![vec![serde_json::json!({ "re": "0", "im": "0" }); 8]; 8];
    for (i, row) in nu.iter_mut().enumerate() {
        row[i] = serde_json::json!({ "re": "1", "im": "0" });
    }
    // the identity is the correct matrix for the identity map only
    let path = scratch("perturbed_nu.json");
    std::fs::write(&path, serde_json::to_string(&nu).unwrap()).unwrap();
    let (code, rep) = cli(&[
        "reg", "verify", "--basis", &basis, "--map", &fixture("heisenberg_translation.json"), "--samples", "5", "--nu",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{rep}");
    assert_eq!(rep["results"]["all_equal"], false);
    assert!(!rep["results"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn extract_and_reconstruct() {
    let (code, rep) = cli(&["bir", "extract", "--map", &fixture("inversion.json")]);
    assert_eq!(code, 0);
    let ext = &rep["results"]["extension"];
    assert_eq!(ext["pushforward_polynomial"], serde_json::json!([true, true, true]));
    assert_eq!(ext["pullback_polynomial"], serde_json::json!([true, true, true]));
    let pq = scratch("inversion_pq.json");
    std::fs::write(&pq, rep["results"]["map"].to_string()).unwrap();
    let (code, rep) = cli(&["bir", "reconstruct", "--pq", pq.to_str().unwrap()]);
    assert_eq!(code, 0, "{rep}");
    assert_eq!(rep["results"]["derivative_identity_points"], 10);
}

#[test]
fn orbit_consistency_exit_codes() {
    let m = fixture("heisenberg.json");
    for (map, expected) in [("inversion.json", 0), ("heisenberg_translation.json", 0), ("stretch.json", 1)] {
        let (code, rep) = cli(&["bir", "orbit", "--manifold", &m, "--map", &fixture(map), "--samples", "6"]);
        assert_eq!(code, expected, "{map}: {rep}");
    }
    let (_, rep) = cli(&["bir", "orbit", "--manifold", &m, "--map", &fixture("stretch.json"), "--samples", "6"]);
    assert!(!rep["results"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_two() {
    let (code, rep) = cli(&["hol", "solve", "--manifold", "/nonexistent/manifold.json"]);
    assert_eq!(code, 2);
    assert_eq!(rep["status"], "error");
    let (code, _) = cli(&["hol", "solve", "--manifold", &fixture("heisenberg.json"), "--degree", "0"]);
    assert_eq!(code, 2);
    let (code, _) = cli(&["check", "tube", "--manifold", &fixture("heisenberg.json")]);
    assert_eq!(code, 2);
    let (code, _) = cli(&["bogus"]);
    assert_eq!(code, 2);
}
