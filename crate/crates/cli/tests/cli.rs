use std::process::{Command, Output};

use serde_json::Value;

use kbound::oeis::parse_bfile;

fn kbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbound"))
        .args(args)
        .env_remove("KBOUND_OEIS_BASE_URL")
        .env_remove("KBOUND_OEIS_CACHE")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = kbound(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    kbound(args).status.code().unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&["count", "--k", "3", "--n", "8"]), "56\n");
    assert_eq!(stdout(&["count", "--k", "1", "--n", "999"]), "1\n");
    for method in ["brute", "dp", "closed", "auto"] {
        assert_eq!(stdout(&["count", "--k", "2", "--n", "12", "--method", method]), "41\n");
    }
    assert_eq!(stdout(&["count", "--k", "2", "--n", "5", "--variant", "free"]), "20\n");
    assert_eq!(stdout(&["count", "--k", "2", "--n", "4", "--variant", "endpoints:2,4"]), "1\n");
}

#[test]
fn methods_agree() {
    for k in 1..=4u32 {
        for n in 1..=10u32 {
            let (k, n) = (k.to_string(), n.to_string());
            for variant in ["anchored", "free", "endpoints:2,1"] {
                if variant == "endpoints:2,1" && n == "1" {
                    continue;
                }
                let mut methods = vec!["brute", "dp", "auto"];
                if variant == "anchored" && k != "4" {
                    methods.push("closed");
                }
                let outs: Vec<String> = methods
                    .iter()
                    .map(|m| stdout(&["count", "--k", &k, "--n", &n, "--variant", variant, "--method", m]))
                    .collect();
                assert!(outs.windows(2).all(|w| w[0] == w[1]), "k={k} n={n} {variant}: {outs:?}");
            }
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["count", "--k", "4", "--n", "8", "--method", "closed"]), 2);
    assert_eq!(code(&["count", "--k", "2", "--n", "8", "--variant", "free", "--method", "closed"]), 2);
    assert_eq!(code(&["count", "--k", "0", "--n", "8"]), 2);
    assert_eq!(code(&["count", "--k", "2", "--n", "0"]), 2);
    assert_eq!(code(&["count", "--k", "2", "--n", "4", "--variant", "endpoints:2,2"]), 2);
    assert_eq!(code(&["count", "--k", "2", "--n", "4", "--variant", "endpoints:1,9"]), 2);
    assert_eq!(code(&["count", "--k", "2", "--n", "4", "--variant", "sideways"]), 2);
    assert_eq!(code(&["count", "--k", "2"]), 2);
    assert_eq!(code(&["table", "--k", "5", "--max-n", "4", "--method", "closed"]), 2);
    assert_eq!(code(&["verify", "--suite", "everything"]), 2);
    assert_eq!(code(&["mine", "--k", "2", "--terms", "5"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let out = kbound(&["count", "--k", "4", "--n", "8", "--method", "closed"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn enumerate_examples() {
    assert_eq!(stdout(&["enumerate", "--k", "2", "--n", "5"]), "1,2,3,4,5\n1,2,4,3,5\n1,3,2,4,5\n");
    assert_eq!(stdout(&["enumerate", "--k", "1", "--n", "7"]), "1,2,3,4,5,6,7\n");
    assert_eq!(stdout(&["enumerate", "--k", "3", "--n", "1"]), "1\n");
    let json: Value = serde_json::from_str(&stdout(&["enumerate", "--k", "2", "--n", "5", "--format", "json"])).unwrap();
    assert_eq!(json, serde_json::json!([[1, 2, 3, 4, 5], [1, 2, 4, 3, 5], [1, 3, 2, 4, 5]]));
    let lines = stdout(&["enumerate", "--k", "3", "--n", "9"]);
    assert_eq!(lines.lines().count().to_string() + "\n", stdout(&["count", "--k", "3", "--n", "9"]));
}

#[test]
fn table_examples() {
    let b = stdout(&["table", "--k", "3", "--max-n", "8"]);
    assert_eq!(b.lines().count(), 8);
    assert_eq!(b.lines().last(), Some("8 56"));
    assert_eq!(stdout(&["table", "--k", "2", "--max-n", "3", "--format", "csv"]), "1,1\n2,1\n3,1\n");
    assert_eq!(stdout(&["table", "--k", "3", "--max-n", "0"]), "");
    let json: Value = serde_json::from_str(&stdout(&["table", "--k", "3", "--max-n", "5", "--format", "json"])).unwrap();
    assert_eq!(json["terms"], serde_json::json!([1, 1, 1, 2, 6]));
    assert_eq!(json["offset"], 1);
}

#[test]
fn bfile_output_round_trips() {
    for method in ["dp", "closed", "brute"] {
        let text = stdout(&["table", "--k", "3", "--max-n", "12", "--method", method]);
        let t = parse_bfile(&text).unwrap();
        assert_eq!(t.offset(), 1);
        assert_eq!(t.len(), 12);
        assert_eq!(kbound::oeis::to_bfile(&t), text);
    }
    let big = stdout(&["table", "--k", "4", "--max-n", "150"]);
    let t = parse_bfile(&big).unwrap();
    assert_eq!(t.len(), 150);
    assert!(t.terms()[149].bits() > 64);
}

#[test]
fn json_keeps_big_integers_exact() {
    let json = stdout(&["table", "--k", "3", "--max-n", "200", "--format", "json"]);
    let last_bfile = stdout(&["table", "--k", "3", "--max-n", "200"]);
    let want = last_bfile.lines().last().unwrap().split(' ').nth(1).unwrap();
    assert!(want.len() > 30);
    assert!(json.contains(&format!("{want}]")));
}

#[test]
fn mine_examples() {
    let report = |k: &str| -> Value { serde_json::from_str(&stdout(&["mine", "--k", k])).unwrap() };
    let r = report("2");
    assert_eq!(r["order"], 3);
    assert_eq!(r["coefficients"], serde_json::json!([1, 0, 1]));
    assert_eq!(r["gf_denominator"], serde_json::json!([1, -1, 0, -1]));
    assert_eq!(r["gf_numerator"], serde_json::json!([0, 1]));
    assert_eq!(r["holdout_match"], true);
    assert_eq!(r["state_space_size"], 7);
    let r = report("3");
    assert_eq!(r["order"], 8);
    assert_eq!(r["gf_denominator"], serde_json::json!([1, -2, 1, -2, -1, -1, 0, 1, 1]));
    assert_eq!(r["gf_numerator"], serde_json::json!([0, 1, -1, 0, -1]));
    assert_eq!(r["state_space_size"], 24);
    let r = report("1");
    assert_eq!(r["order"], 1);
    assert_eq!(r["gf_denominator"], serde_json::json!([1, -1]));
    for key in ["k", "order", "coefficients", "gf_numerator", "gf_denominator", "holdout_match", "state_space_size"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn mine_without_a_fit_fails_verification() {
    // Order 31 does not fit below max-order 10.
    let out = kbound(&["mine", "--k", "4", "--terms", "30", "--holdout", "5", "--max-order", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["order"], Value::Null);
    assert_eq!(r["holdout_match"], false);
}

#[test]
fn verify_examples() {
    let out = stdout(&["verify", "--suite", "lemma33", "--max-n", "10"]);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
    let out = stdout(&["verify", "--suite", "gf", "--max-n", "200"]);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
    for suite in ["lemma2", "fgh", "recurrences"] {
        stdout(&["verify", "--suite", suite, "--max-n", "9"]);
    }
    stdout(&["verify", "--suite", "recurrences", "--k", "4", "--max-n", "9"]);
}

#[test]
fn verify_oeis_offline_is_an_environment_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_kbound"))
        .args(["verify", "--suite", "oeis"])
        .env("KBOUND_OEIS_BASE_URL", "http://127.0.0.1:9")
        .env("KBOUND_OEIS_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("SKIP "));
}

#[test]
fn verify_oeis_uses_the_cache() {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");
    let out = Command::new(env!("CARGO_BIN_EXE_kbound"))
        .args(["verify", "--suite", "oeis"])
        .env("KBOUND_OEIS_BASE_URL", "http://127.0.0.1:9")
        .env("KBOUND_OEIS_CACHE", fixtures)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("shift 0"));
}

#[test]
fn bench_examples() {
    let dp = stdout(&["bench", "--k", "3", "--max-n", "30"]);
    let mut lines = dp.lines();
    assert_eq!(lines.next(), Some("n,seconds,peak_profiles"));
    assert_eq!(lines.count(), 30);
    let brute = stdout(&["bench", "--k", "3", "--max-n", "10", "--method", "brute"]);
    assert!(brute.starts_with("n,seconds,nodes\n"));
    assert_eq!(brute.lines().count(), 11);
    assert_eq!(stdout(&["bench", "--k", "3", "--max-n", "0"]), "n,seconds,peak_profiles\n");
}
