use std::process::{Command, Output};

use serde_json::Value;

fn fourbody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourbody")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn golden_operator_is_byte_identical() {
    let out = fourbody(&["catalog", "show", "delta-radial-rho", "--format", "golden"]);
    assert!(out.status.success());
    let golden = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/../../golden/delta-radial-rho.txt")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn catalog_lists_every_entry() {
    let out = fourbody(&["catalog", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), fourbody_core::catalog::ENTRIES.len());
    let out = fourbody(&["catalog", "show", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_multiplicities() {
    let out = fourbody(&["spectrum", "--N", "3", "--omega", "1", "--gamma", "0", "--A", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    let mult: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mult, [1, 6, 21, 56]);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn malformed_input_exits_with_two() {
    assert_eq!(fourbody(&["spectrum"]).status.code(), Some(2));
    assert_eq!(fourbody(&["spectrum", "--N", "1", "--d", "4"]).status.code(), Some(2));
    assert_eq!(fourbody(&["spectrum", "--N", "1", "--omega", "x"]).status.code(), Some(2));
    assert_eq!(fourbody(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(fourbody(&["trajectory", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(fourbody(&["geometry", "--rho", "1,1,1"]).status.code(), Some(2));
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = fourbody(&["verify", "--suite", "degenerations", "--suite", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["all_pass"], true);
    let numbers: Vec<u64> = v["criteria"].as_array().unwrap().iter().map(|c| c["number"].as_u64().unwrap()).collect();
    assert_eq!(numbers, [2, 10]);
    // the published sl(7) words do not expand to the operators they name
    let out = fourbody(&["verify", "--suite", "lie"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failing: Vec<&Value> = v["criteria"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert_eq!(failing.len(), 2);
    assert!(failing.iter().all(|c| c["witness"].is_string()));
}

#[test]
fn verify_is_deterministic() {
    let run = || {
        let mut v = json(&fourbody(&["verify", "--suite", "oracle", "--oracle-polys", "4", "--seed", "5"]));
        for c in v["criteria"].as_array_mut().unwrap() {
            c["seconds"] = Value::Null;
        }
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn trajectory_from_config_file() {
    let dir = std::env::temp_dir().join(format!("fourbody-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"omega": "1/2", "d": "6", "effective": true, "dt": 0.001, "steps": 200, "record_every": 100,
            "p0": [0.05, -0.03, 0.02, 0.04, -0.01, 0.03]}"#,
    )
    .unwrap();
    let csv_path = dir.join("t.csv");
    let out = fourbody(&["trajectory", "--config", cfg.to_str().unwrap(), "--out", csv_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,rho12,rho13,rho14,rho23,rho24,rho34,p_rho12,p_rho13,p_rho14,p_rho23,p_rho24,p_rho34,H,D")
    );
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    let h0 = rows[0][13];
    assert!(rows.iter().all(|r| ((r[13] - h0) / h0).abs() < 1e-9 && r[14] > 0.0));

    // unknown fields are rejected
    std::fs::write(&cfg, r#"{"omgea": "1"}"#).unwrap();
    let out = fourbody(&["trajectory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn geometry_of_the_unit_tetrahedron() {
    let v = json(&fourbody(&["geometry", "--rho", "1,1,1,1,1,1"]));
    assert_eq!(v["region"], "interior");
    assert_eq!(v["V"], "1/72");
    assert_eq!(v["S"], "3/4");
    assert_eq!(v["P"], "6");
    // collinear points: every face and the volume vanish
    let v = json(&fourbody(&["geometry", "--rho", "1,4,9,1,4,1"]));
    assert_eq!(v["region"], "boundary");
}

#[test]
fn nbody_derive_three_bodies() {
    let out = fourbody(&["nbody-derive", "--n", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["coefficients"]["b_3"], "24");
    assert_eq!(v["certificate"]["all_zero"], true);
}

#[test]
fn potentials_specialize() {
    let v = json(&fourbody(&["potentials", "--gamma", "0", "--omega", "1"]));
    assert_eq!(v["ground_energy"], "36");
    assert_eq!(v["harmonic"], "8*rho12 + 8*rho13 + 8*rho14 + 8*rho23 + 8*rho24 + 8*rho34");
}
