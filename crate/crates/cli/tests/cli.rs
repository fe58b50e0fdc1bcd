use std::process::Command;

use serde_json::Value;
use unicrit_cli::{run, Outcome, EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("unicrit").chain(args.iter().copied()))
}

fn doc(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", out.stdout))
}

fn coeffs(v: &Value) -> Vec<String> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn degree_seven_misiurewicz_polynomial() {
    let out = call(&["poly", "misiurewicz", "--n", "2", "--t", "3", "--h", "1"]);
    assert_eq!(out.code, EXIT_OK);
    let v = doc(&out);
    assert_eq!(coeffs(&v), ["2", "2", "4", "6", "6", "6", "4", "1"]);
    assert_eq!(v["var"], "c");
    assert_eq!(v["provenance"]["kind"], "misiurewicz");
}

#[test]
fn thm14_example_passes_with_seven_dividing_forty_nine() {
    let out = call(&["verify", "thm14", "--n", "2", "--h", "1", "--m", "3"]);
    assert_eq!(out.code, EXIT_OK);
    let v = doc(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["claim"], "thm14");
    let divides: Vec<&Value> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["kind"] == "norm_divides")
        .collect();
    assert!(!divides.is_empty());
    for w in divides {
        assert_eq!(w["norm"], "7");
        assert_eq!(w["base"], "7");
        assert_eq!(w["holds"], true);
    }
}

#[test]
fn one_fifth_ray_lands_on_the_period_four_cubic() {
    let out = call(&[
        "ray",
        "land",
        "--n",
        "2",
        "--angle",
        "1/5",
        "--candidates",
        "parabolic:4,1",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let v = doc(&out);
    // b^3 + 9b^2 + 27b + 135 with b = 4c
    assert_eq!(coeffs(&v["candidate"]), ["135", "108", "144", "64"]);
    assert!(v["distance"].as_f64().unwrap() < 1e-6);
    let back = call(&[
        "poly",
        "transform",
        "--n",
        "2",
        "--poly",
        "64*c^3 + 144*c^2 + 108*c + 135",
        "--from",
        "c",
        "--coord",
        "b",
    ]);
    assert_eq!(coeffs(&doc(&back)), ["135", "27", "9", "1"]);
}

#[test]
fn table_format_is_aligned_text() {
    let out = call(&[
        "--format", "table", "poly", "gleason", "--n", "2", "--h", "3",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("c^3 + 2*c^2 + c + 1"), "{}", out.stdout);
    assert!(serde_json::from_str::<Value>(&out.stdout).is_err());
}

#[test]
fn usage_errors_exit_two_with_an_error_document() {
    for args in [
        &["frobnicate"][..],
        &["poly", "gleason", "--n", "2"],
        &["poly", "gleason", "--n", "1", "--h", "2"],
        &["ray", "land", "--n", "2", "--angle", "2/1"],
        &[
            "ray",
            "land",
            "--n",
            "2",
            "--angle",
            "1/3",
            "--candidates",
            "spiral:1",
        ],
        &["verify", "congruences", "--n", "2", "--h", "2"],
    ] {
        let out = call(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stdout);
        let v = doc(&out);
        assert!(v["error"]["kind"].is_string() && v["error"]["detail"].is_string());
    }
}

#[test]
fn resource_caps_exit_three() {
    let out = call(&[
        "--degree-cap",
        "16",
        "poly",
        "gleason",
        "--n",
        "2",
        "--h",
        "8",
    ]);
    assert_eq!(out.code, EXIT_CAP, "{}", out.stdout);
    assert_eq!(doc(&out)["error"]["kind"], "resource_cap");
    // a capped verification is an incomplete report, not an error
    let out = call(&[
        "--elimination-cap",
        "4",
        "verify",
        "thm14",
        "--n",
        "2",
        "--h",
        "4",
        "--m",
        "1",
    ]);
    assert_eq!(out.code, EXIT_CAP, "{}", out.stdout);
    assert_eq!(doc(&out)["verdict"], "incomplete");
}

#[test]
fn wrong_candidates_fail_with_exit_one() {
    let out = call(&[
        "ray",
        "land",
        "--n",
        "2",
        "--angle",
        "1/3",
        "--candidates",
        "misiurewicz:1,1",
    ]);
    assert_eq!(out.code, EXIT_FAIL, "{}", out.stdout);
    assert_eq!(doc(&out)["error"]["kind"], "no_candidate");
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(call(&["--help"]).code, EXIT_OK);
    assert_eq!(call(&["--version"]).code, EXIT_OK);
}

#[test]
fn emitted_polynomials_round_trip() {
    let out = call(&[
        "poly",
        "parabolic",
        "--n",
        "2",
        "--h",
        "1",
        "--m",
        "3",
        "--coord",
        "b",
    ]);
    let v = doc(&out);
    let p: unicrit_core::poly::IntPoly = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(p.to_string(), "b^2 + b + 7");
    let again: Value = serde_json::to_value(&p).unwrap();
    assert_eq!(again["coeffs"], v["coeffs"]);
}

#[test]
fn cache_hits_are_byte_identical_and_survive_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "--cache-dir",
        d,
        "verify",
        "thm31",
        "--n",
        "2",
        "--t",
        "1",
        "--h",
        "4",
    ];
    let miss = call(&args);
    assert_eq!(miss.code, EXIT_OK);
    let stat = doc(&call(&["--cache-dir", d, "cache", "stat"]));
    assert_eq!(stat["entries"], 1);
    let hit = call(&args);
    assert_eq!(hit, miss);

    // corrupt every entry: the result is recomputed, not trusted
    for e in std::fs::read_dir(d).unwrap() {
        let path = e.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replace("pass", "fail")).unwrap();
    }
    assert_eq!(call(&args), miss);

    // no cache at all gives the same bytes
    let uncached: Vec<&str> = args[2..].to_vec();
    assert_eq!(call(&uncached), miss);
}

#[test]
fn gc_evicts_to_budget_and_recomputes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let empty = call(&["--cache-dir", d, "cache", "gc", "--max-bytes", "0"]);
    assert_eq!(empty.code, EXIT_OK);
    let v = doc(&empty);
    assert_eq!(v["bytes_before"], 0);
    assert_eq!(v["evicted"].as_array().unwrap().len(), 0);

    let a = call(&["--cache-dir", d, "poly", "gleason", "--n", "2", "--h", "4"]);
    let b = call(&["--cache-dir", d, "poly", "gleason", "--n", "3", "--h", "3"]);
    let stat = doc(&call(&["--cache-dir", d, "cache", "stat"]));
    assert_eq!(stat["entries"], 2);
    let all = doc(&call(&[
        "--cache-dir",
        d,
        "cache",
        "gc",
        "--max-bytes",
        "0",
    ]));
    let evicted = all["evicted"].as_array().unwrap();
    assert_eq!(evicted.len(), 2);
    assert!(evicted
        .iter()
        .all(|k| k.as_str().unwrap().contains("gleason")));
    assert_eq!(
        doc(&call(&["--cache-dir", d, "cache", "stat"]))["entries"],
        0
    );
    assert_eq!(
        call(&["--cache-dir", d, "poly", "gleason", "--n", "2", "--h", "4"]),
        a
    );
    assert_eq!(
        call(&["--cache-dir", d, "poly", "gleason", "--n", "3", "--h", "3"]),
        b
    );
}

#[test]
fn cache_commands_need_a_directory() {
    let out = call(&["cache", "stat"]);
    if std::env::var_os("UNICRIT_CACHE").is_none() {
        assert_eq!(out.code, EXIT_USAGE);
    }
}

#[test]
fn binary_honours_the_cache_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_unicrit");
    let run_bin = |args: &[&str]| {
        let out = Command::new(bin)
            .args(args)
            .env("UNICRIT_CACHE", dir.path())
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    let first = run_bin(&["poly", "gleason", "--n", "2", "--h", "3"]);
    assert_eq!(first.0, Some(0));
    let second = run_bin(&["poly", "gleason", "--n", "2", "--h", "3"]);
    assert_eq!(first, second);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let (code, _) = run_bin(&["verify", "thm14", "--n", "2"]);
    assert_eq!(code, Some(2));
}
