use std::process::{Command, Output};

use serde_json::Value;
use twistcs::exactpoly::BiPoly;
use twistcs::twistgen::apoly_recursive;

fn twistcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcs"))
        .args(args)
        .env_remove("TWISTCS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

#[test]
fn printed_polynomials() {
    assert_eq!(stdout(&twistcs(&["apoly", "-n", "-1"])), "1 + L*M^6");
    assert_eq!(stdout(&twistcs(&["apoly", "-n", "0"])), "-1");
    assert_eq!(stdout(&twistcs(&["pdist", "-n", "-1"])), "(2*B^2-2)*V + 2*B^2-1");
    assert_eq!(stdout(&twistcs(&["pdist", "-n", "0"])), "1");
    assert_eq!(
        stdout(&twistcs(&["apoly", "--raw-crossings", "3"])),
        stdout(&twistcs(&["apoly", "-n", "-2"]))
    );
}

#[test]
fn methods_agree() {
    for n in ["-3", "2"] {
        let rec = stdout(&twistcs(&["pdist", "-n", n]));
        let exp = stdout(&twistcs(&["pdist", "-n", n, "--method", "explicit"]));
        assert_eq!(rec, exp);
        let o = twistcs(&["apoly", "-n", n, "--method", "cross-check"]);
        assert!(o.status.success());
    }
}

#[test]
fn json_round_trip() {
    let o = twistcs(&["--format", "json", "apoly", "-n", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "apoly");
    let p: BiPoly = serde_json::from_value(v["poly"].clone()).unwrap();
    assert_eq!(p, apoly_recursive(3).poly);
}

#[test]
fn cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let plain = twistcs(&["--format", "json", "apoly", "-n", "4"]);
    let cold = twistcs(&["--format", "json", "--cache", cache, "apoly", "-n", "4"]);
    let warm = twistcs(&["--format", "json", "--cache", cache, "apoly", "-n", "4"]);
    assert!(dir.path().join("apoly_4.json").exists());
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);

    let via_env = Command::new(env!("CARGO_BIN_EXE_twistcs"))
        .args(["--format", "json", "pdist", "-n", "2"])
        .env("TWISTCS_CACHE", cache)
        .output()
        .unwrap();
    assert!(via_env.status.success());
    assert!(dir.path().join("pdist_2.json").exists());
}

#[test]
fn newton_reports() {
    let o = twistcs(&["newton", "-n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("nonzero slopes: -4/1, 4/1"), "{text}");
    assert!(text.ends_with("verification: pass"));

    let o = twistcs(&["--format", "json", "newton", "-n", "-2"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verification"]["pass"], true);
    let edges = v["verification"]["edges"].as_array().unwrap();
    let ten: Vec<_> = edges.iter().filter(|e| e["slope"] == "10/1").collect();
    assert!(!ten.is_empty());
    for e in ten {
        assert_eq!(e["edge_polynomial"], "t + 1");
        assert_eq!(e["boundary_components"], 2);
    }
}

#[test]
fn chern_simons_values() {
    let o = twistcs(&["--format", "json", "cs", "-n", "2", "-k", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["cs_orbifold"].as_f64().unwrap() - 0.0875301).abs() < 2e-5);
    assert!((v["cs_cover"].as_f64().unwrap() - 0.262590).abs() < 2e-5);
    assert_eq!(v["modulus_orbifold"], "1/6");
    assert_eq!(v["intervals"], serde_json::json!([10000, 10000]));

    let o = twistcs(&["--format", "json", "cs", "-n", "2", "--cusp"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["cs_knot"].as_f64().unwrap() - 0.344023).abs() < 2e-5);
}

#[test]
fn exit_codes() {
    assert_eq!(twistcs(&["cs", "-n", "-2", "-k", "2"]).status.code(), Some(4));
    assert_eq!(twistcs(&["newton", "-n", "0"]).status.code(), Some(2));
    assert_eq!(twistcs(&["cs", "-n", "-1", "-k", "3"]).status.code(), Some(2));
    assert_eq!(twistcs(&["apoly", "-n", "x"]).status.code(), Some(2));
    assert_eq!(twistcs(&["--intervals", "3,4", "cs", "-n", "2", "-k", "3"]).status.code(), Some(2));
    assert_eq!(twistcs(&["--jobs", "0", "tables"]).status.code(), Some(2));
}

#[test]
fn tables_small_and_empty() {
    let o = twistcs(&["tables", "--n", "3..2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cells: 0"));

    let o = twistcs(&["--format", "csv", "--jobs", "2", "tables", "--n", "-2..2", "--k", "3..4", "--knots"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().filter(|l| l.starts_with("-2,") || l.starts_with("2,")).collect();
    assert_eq!(rows.len(), 6, "{text}");

    // A tolerance of zero cannot be met.
    let o = twistcs(&["--tolerance", "0", "tables", "--n", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn branch_dump() {
    let o = twistcs(&["dump-branches", "-n", "2", "--grid", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,re_v,im_v,re_v1,im_v1,re_v2,im_v2,integrand"
    );
    // 51 samples per segment, sharing the row at α₀.
    assert_eq!(lines.count(), 101);
}
