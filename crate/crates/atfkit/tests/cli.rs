use std::path::{Path, PathBuf};

use atfkit::atf_diagram::{from_json, mutate, validate, Orientation};
use atfkit::cli::{run, CliOutput};
use atfkit::compactification::{khodorovskiy_verdict, nonsqueezing_certificate, NeighborhoodSpec};
use atfkit::constructions::construct_x1;
use atfkit::exact_core::{int, parse_rational, rat};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cli(args: &[&str]) -> CliOutput {
    run(std::iter::once("atfkit").chain(args.iter().copied()))
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut v: Vec<&str> = args.to_vec();
    v.push("--json");
    let out = cli(&v);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).expect("stdout is JSON"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("atfkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn kronheimer_example() {
    let (code, v) = cli_json(&["verify", "--theorem", "kronheimer", "--h", "3", "--mu", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["consistent"], true);
    assert_eq!(v["certificate"]["bounds"][0], "h > 2mu");
    // the class in the certificate is the one the library finds
    let lib = construct_x1(1, &int(3), &int(1)).unwrap();
    assert_eq!(v["certificate"]["pinwheel_class"], lib.pinwheel_class.unwrap().to_string());

    let (code, v) = cli_json(&["verify", "--theorem", "kronheimer", "--h", "3", "--mu", "3/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "obstructed");

    let (_, v) = cli_json(&["verify", "--theorem", "kronheimer", "--h", "3", "--mu", "1", "--c", "1"]);
    assert_eq!(v["certificate"]["rp2_blowup"]["mu2"], "1/4");
}

#[test]
fn nonsqueezing_example() {
    let (code, v) = cli_json(&["verify", "--theorem", "nonsqueezing", "--n", "3", "--alpha", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "obstructed");
    let c = &v["certificate"];
    assert_eq!(c["identity"]["equals_alpha_minus_1_plus_eps"], true);
    assert_eq!(c["witness"]["mu_n"], "-499/1000");
    let eps = parse_rational(c["witness"]["epsilon"].as_str().unwrap()).unwrap();
    assert_eq!(eps, rat(1, 1000));

    let lib = nonsqueezing_certificate(3, &rat(1, 2), None, Some(&eps)).unwrap();
    assert_eq!(c["witness"]["mu_n"], lib.witness.to_json()["mu_n"]);

    let (_, v) = cli_json(&["verify", "--theorem", "nonsqueezing", "--n", "3", "--alpha", "2", "--beta", "5", "--eps", "1/10"]);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["certificate"]["witness"]["mu_n"], "11/10");
}

#[test]
fn eps_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_atfkit"))
        .args(["verify", "--theorem", "nonsqueezing", "--n", "4", "--alpha", "1/2", "--json"])
        .env("ATFKIT_EPS", "1/100")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["witness"]["mu_n"], "-49/100");

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_atfkit"))
        .args(["construct", "--target", "x1", "--k", "1", "--h", "2", "--mu", "1/2"])
        .env("ATFKIT_EPS", "0.01")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn khodorovskiy_certificates() {
    for n in 2..=8usize {
        let ns = n.to_string();
        let (code, v) = cli_json(&["verify", "--theorem", "khodorovskiy", "--n", &ns, "--f", "1", "--s", "1/3"]);
        assert_eq!(code, 0, "n = {n}");
        assert_eq!(v["verdict"], "obstructed");
        let spec = NeighborhoodSpec { self_intersection: -(n as i64 + 1), f: int(1), s: rat(1, 3) };
        let lib = khodorovskiy_verdict(n, &spec).unwrap();
        assert_eq!(v["certificate"]["violated"], serde_json::json!(lib.violated));
    }
    let (code, v) = cli_json(&["verify", "--theorem", "khodorovskiy", "--n", "3", "--m", "4", "--f", "1", "--s", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["compactification"], serde_json::json!({ "surface": "S2xS2", "a": "3", "b": "1" }));
}

#[test]
fn theorems_a_and_b() {
    for (b, verdict) in [("3/2", "pass"), ("1/3", "obstructed"), ("3", "obstructed"), ("2", "obstructed")] {
        let (code, v) = cli_json(&["verify", "--theorem", "A", "--k", "1", "--a", "1", "--b", b]);
        assert_eq!(code, 0, "b = {b}");
        assert_eq!(v["verdict"], verdict, "b = {b}");
    }
    for (mu, verdict) in [("1", "pass"), ("2", "obstructed"), ("5/2", "obstructed")] {
        let (code, v) = cli_json(&["verify", "--theorem", "b", "--k", "2", "--h", "3", "--mu", mu]);
        assert_eq!(code, 0, "mu = {mu}");
        assert_eq!(v["verdict"], verdict, "mu = {mu}");
    }
}

#[test]
fn classify_chain_example() {
    let out = cli(&["classify-chain", "--n", "5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("S0 = -2H+3E1-E2-E3\n"), "{}", out.stdout);
    let (_, v) = cli_json(&["classify-chain", "--n", "5"]);
    assert_eq!(v["S"][0], "-2H+3E1-E2-E3");
    assert_eq!(v["anchor"], "d2");
}

#[test]
fn solve_periods_cross_check() {
    let (code, v) = cli_json(&["solve-periods", "--n", "3", "--d1", "5", "--d2", "7", "--c", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["closed_forms_agree"], true);
    assert_eq!(v["h"], "11/3");
}

#[test]
fn construct_writes_svg() {
    let svg = tmp("x1.svg");
    let out = cli(&["construct", "--target", "x1", "--k", "2", "--h", "3", "--mu", "1", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("class 2H+3E mod 4"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let (_, v) = cli_json(&["construct", "--target", "s2s2", "--k", "2", "--a", "1", "--b", "5/2"]);
    assert_eq!(v["pinwheel_class"], "2A+B mod 5");
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        vec!["verify", "--theorem", "kronheimer", "--h", "0.5", "--mu", "1"],
        vec!["verify", "--theorem", "kronheimer", "--h", "3"],
        vec!["verify", "--theorem", "pythagoras"],
        vec!["construct", "--target", "x1", "--k", "0", "--h", "3", "--mu", "1"],
        vec!["construct", "--target", "s2s2", "--k", "1", "--h", "3", "--mu", "1"],
        vec!["classify-chain", "--n", "1"],
        vec!["frobnicate"],
    ] {
        let out = cli(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let decimal = fixture("decimal.json");
    let out = cli(&["diagram", "validate", decimal.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("decimal input rejected"));
    let missing = fixture("missing.json");
    assert_eq!(cli(&["diagram", "render", missing.to_str().unwrap()]).code, 2);
}

#[test]
fn validate_fixtures() {
    for (f, ok) in [("cp2_traded.json", true), ("s2s2_two_nodes.json", true), ("x1_trapezoid.json", true), ("reflex.json", false)] {
        let (code, v) = cli_json(&["diagram", "validate", fixture(f).to_str().unwrap()]);
        assert_eq!(v["valid"], ok, "{f}");
        assert_eq!(code, if ok { 0 } else { 1 });
    }
}

#[test]
fn mutate_matches_library() {
    let path = fixture("s2s2_two_nodes.json");
    let out_path = tmp("mutated.json");
    let out = cli(&["diagram", "mutate", path.to_str().unwrap(), "--node", "1", "--orientation", "cw", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let written = from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let seed = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, mutate(&seed, 1, Orientation::Cw).unwrap());
    assert!(validate(&written).is_valid());
}

/// Mutates each fixture and renders the result; compares with the stored
/// SVG. Set ATFKIT_BLESS=1 to rewrite the stored files.
#[test]
fn golden_svgs() {
    let bless = std::env::var_os("ATFKIT_BLESS").is_some();
    let cases = [
        ("cp2_traded", 0, "ccw"),
        ("cp2_traded", 0, "cw"),
        ("s2s2_two_nodes", 0, "ccw"),
        ("s2s2_two_nodes", 1, "ccw"),
        ("x1_trapezoid", 0, "ccw"),
        ("x1_trapezoid", 1, "ccw"),
    ];
    for (name, node, o) in cases {
        let src = fixture(&format!("{name}.json"));
        let mutated = tmp(&format!("{name}_{node}_{o}.json"));
        let ns = node.to_string();
        let m = cli(&["diagram", "mutate", src.to_str().unwrap(), "--node", &ns, "--orientation", o, "--out", mutated.to_str().unwrap()]);
        assert_eq!(m.code, 0, "{name}: {}", m.stderr);
        let r = cli(&["diagram", "render", mutated.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{name}: {}", r.stderr);
        let golden = fixture(&format!("golden/{name}_{node}_{o}.svg"));
        if bless {
            std::fs::write(&golden, &r.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&golden).unwrap_or_else(|e| panic!("{}: {e}", golden.display()));
        assert!(r.stdout == want, "{} differs from the rendered output", golden.display());
    }
}

#[test]
fn render_is_deterministic() {
    let p = fixture("x1_trapezoid.json");
    let a = cli(&["diagram", "render", p.to_str().unwrap(), "--size", "300"]);
    let b = cli(&["diagram", "render", p.to_str().unwrap(), "--size", "300"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.contains("width=\"300\""));
}

#[test]
fn help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verify"));
}
