//! Golden tests for the command-line examples and the exit-code contract.

use std::path::Path;

use quintic_tools::cli::{exit, run};
use serde_json::Value;

fn quintic(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quintic").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_of(args: &str) -> (i32, Value) {
    let (code, out, err) = quintic(args);
    assert!(!out.is_empty(), "no output for {args}: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn pairs(v: &Value) -> Vec<(i64, i64)> {
    v.as_array().unwrap().iter().map(|p| (p["s"].as_i64().unwrap(), p["t"].as_i64().unwrap())).collect()
}

#[test]
fn resonances_three_torus() {
    let (code, v) = json_of("resonances -p -3 -q 10 -m -6");
    assert_eq!(code, exit::OK);
    let cat = &v["catalog"];
    assert_eq!(pairs(&cat["B"]), vec![(1, 9)]);
    assert!(pairs(&cat["C"]).is_empty());
    assert!(pairs(&cat["E"]).is_empty());
    assert_eq!(pairs(&cat["A"]), vec![(-14, 18)]);
    let notes = v["discrepancies"].as_array().unwrap();
    assert_eq!(notes.len(), 1);
    assert_eq!(notes[0]["code"], "set-membership");
    assert_eq!(notes[0]["set"], "A");
}

#[test]
fn resonances_two_tori() {
    let (code, v) = json_of("resonances -p 0 -q 1");
    assert_eq!(code, exit::OK);
    assert!(pairs(&v["catalog"]["two_mode"]).is_empty());
    let (code, v) = json_of("resonances -p 0 -q 2");
    assert_eq!(code, exit::OK);
    assert_eq!(pairs(&v["catalog"]["two_mode"]), vec![(-1, 3)]);
}

#[test]
fn bound_too_small_exits_two() {
    let (code, out, err) = quintic("resonances -p -3 -q 10 -m -6 --set bound=12");
    assert_eq!(code, exit::BOUND_TOO_SMALL);
    assert!(out.is_empty());
    assert!(err.contains("-14"), "{err}");
}

#[test]
fn classify_exit_codes() {
    let (code, v) = json_of("classify -p -3 -q 10 -m -6 --rho 2,1,9 --nu 0.05");
    assert_eq!(code, exit::UNSTABLE);
    assert_eq!(v["verdict"], "unstable");
    assert!((v["max_im"].as_f64().unwrap() - 0.27).abs() < 1e-9);

    let (code, v) = json_of("classify -p 0 -q 1");
    assert_eq!(code, exit::OK);
    assert_eq!(v["verdict"], "stable");

    // (-1,-1,-4) resonates with (-3,-3,0): a one-mode solution, so refused
    let (code, _, err) = quintic("classify -p -4 -q -3 -m -1");
    assert_eq!(code, exit::REFUSED);
    assert!(err.contains("one-mode"), "{err}");
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(quintic("classify -p 0 -q 0").0, exit::FAILURE);
    assert_eq!(quintic("classify --preset nosuch").0, exit::FAILURE);
    assert_eq!(quintic("classify -p 0 -q 1 --set colour=red").0, exit::FAILURE);
    assert_eq!(quintic("frobnicate").0, exit::FAILURE);
    assert_eq!(quintic("").0, exit::FAILURE);
    assert_eq!(quintic("classify -p 0 -q 1 --config /nonexistent/file.conf").0, exit::FAILURE);
}

#[test]
fn print_config_round_trips_through_a_file() {
    let (code, text, _) = quintic("--preset thm3-unstable --nu 0.02 --print-config");
    assert_eq!(code, exit::OK);
    assert!(text.contains("nu = 0.02"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, &text).unwrap();
    let (code, again, _) = quintic(&format!("--config {} --print-config", path.display()));
    assert_eq!(code, exit::OK);
    assert_eq!(again, text);
}

#[test]
fn hypotheses_two_torus_has_no_violation() {
    let (code, v) = json_of("hypotheses -p 0 -q 1 --rho 1.5,1.5 --nu 0.01 --kmax 10");
    assert_eq!(code, exit::OK);
    assert_eq!(v["A2"]["counts"]["Violated"], 0);
    assert!((v["A2"]["delta"].as_f64().unwrap() - 4e-4).abs() < 1e-15);
    assert_eq!(v["A0"]["pass"], true);
    assert_eq!(v["A1"]["pass"], true);
}

#[test]
fn hypotheses_three_torus_grid_has_no_violation() {
    let (code, v) = json_of("hypotheses -p -3 -q 10 -m -6 --rho 1.5,1.5,1.5 --nu 0.01 --kmax 10");
    assert_eq!(code, exit::OK);
    assert_eq!(v["A2"]["counts"]["Violated"], 0);
    assert!((v["A2"]["delta"].as_f64().unwrap() - 1e-4).abs() < 1e-15);
}

#[test]
fn separation_failure_exits_five() {
    // the normal frequency at j = -1 is about 1, far below δ = 5
    let (code, v) = json_of("hypotheses -p 0 -q 1 --rho 1.5,1.5 --nu 0.01 --delta 5");
    assert_eq!(code, exit::VIOLATED);
    assert_eq!(v["A1"]["pass"], false);
}

#[test]
fn conic_search_preset() {
    let (code, v) = json_of("hypotheses --preset paper-appendixA-setA");
    assert_eq!(code, exit::OK);
    assert_eq!(v["conic"]["minimal"]["k"], serde_json::json!([-975, 195, 780]));
    assert_eq!(v["conic"]["minimal"]["j"], 197);
}

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "run.log")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn identical_configs_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["resonances", "normal-form", "classify", "hypotheses"] {
        for dir in [a.path(), b.path()] {
            let (code, _, err) = quintic(&format!("{cmd} -p -3 -q 10 -m -6 --rho 2,1,9 --nu 0.05 --out {}", dir.display()));
            assert!(code == exit::OK || code == exit::UNSTABLE, "{cmd}: {err}");
        }
    }
    let fa = data_files(a.path());
    assert_eq!(fa.len(), 5);
    assert_eq!(fa, data_files(b.path()));
    let log = std::fs::read_to_string(a.path().join("run.log")).unwrap();
    assert_eq!(log.lines().count(), 4);
    assert!(log.lines().all(|l| l.starts_with("unix_time=")));
}

#[test]
fn simulate_unstable_preset_matches_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&format!("simulate --preset thm3-unstable --out {}", dir.path().display()));
    assert_eq!(code, exit::OK);
    assert_eq!(v["window_found"], true);
    let predicted = v["predicted_rate"].as_f64().unwrap();
    assert!((predicted - 108.0 * 1e-4).abs() < 1e-9);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,mass,momentum,energy,I_p,I_q,I_m,ext_mass,a_1,a_9\n"));
    assert!(dir.path().join("growth.json").exists());
}

#[test]
fn simulate_stable_preset_finds_no_window() {
    let (code, v) = json_of("simulate --preset thm2-stable");
    assert_eq!(code, exit::OK);
    assert_eq!(v["window_found"], false);
    assert_eq!(v["fit"]["outcome"], "window-not-found");
}

#[test]
fn scaling_preset_slope() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&format!("scaling --preset thm3-unstable --out {}", dir.path().display()));
    assert_eq!(code, exit::OK);
    let slope = v["slope"].as_f64().unwrap();
    assert!((1.7..=2.3).contains(&slope), "slope {slope}");
    let file: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("scaling.json")).unwrap()).unwrap();
    assert_eq!(file, v);
}

#[test]
fn report_collects_every_section() {
    let (code, v) = json_of("report -p -3 -q 10 -m -6 --rho 2,1,9 --nu 0.05 --set report_dynamics=false");
    assert_eq!(code, exit::OK);
    for key in ["config", "catalog", "effective_hamiltonian", "classification", "hypotheses", "discrepancies"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("growth").is_none());
    assert_eq!(v["classification"]["verdict"], "unstable");
    assert_eq!(v["config"]["nu"], "0.05");

    let (code, v) = json_of("report -p -4 -q -3 -m -1 --set report_dynamics=false");
    assert_eq!(code, exit::OK);
    assert!(v["refused"].as_str().unwrap().contains("one-mode"));
    assert!(v.get("classification").is_none());
}
