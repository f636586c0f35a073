use std::process::Command;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use psibar::arith::big_d_u64;
use psibar::cli::{run, CommandResult};
use psibar::sieve_file;

fn psibar(args: &str) -> CommandResult {
    run(std::iter::once("psibar").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let out = psibar(args);
    assert_eq!(out.exit_code, 0, "{args}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(String::as_str).collect()
}

#[test]
fn eval_values() {
    let v = json("eval --fn lambda --n 9");
    assert_eq!(keys(&v), ["n", "value", "class", "section"]);
    assert_eq!(v["value"], 4);
    assert_eq!(v["section"], "I");
    assert_eq!(json("eval --fn lambda --n 100")["value"], 7);
    assert_eq!(json("eval --fn psibar --n 1")["value"], 1);
    assert_eq!(psibar("eval --fn psibar --n 1 --format plain").stdout, "1 1\n");
    assert_eq!(json("eval --fn phi --n 100")["value"], 40);
    assert_eq!(json("eval --fn psi --n 12")["value"], 24);
    assert_eq!(json("eval --fn bigd --n 441")["value"], 10);

    let rows = json("eval --fn lambda --n 1..10");
    let values: Vec<u64> = rows.as_array().unwrap().iter().map(|r| r["value"].as_u64().unwrap()).collect();
    assert_eq!(values, [0, 0, 2, 1, 3, 2, 3, 2, 4, 3]);

    // 2^89 - 1 is a Mersenne prime, so lambda is 89
    let m89 = (BigUint::from(1u32) << 89usize) - 1u32;
    assert_eq!(json(&format!("eval --fn lambda --n {m89}"))["value"], 89);
}

#[test]
fn eval_errors() {
    for args in [
        "eval --fn lambda --n 0",
        "eval --fn lambda --n 5..3",
        "eval --fn lambda --n x",
        "eval --fn lambda --n 1..",
        "eval --fn nope --n 3",
    ] {
        assert_eq!(psibar(args).exit_code, 2, "{args}");
    }
    assert_eq!(psibar("eval --fn lambda --n 1..5000000").exit_code, 3);
}

#[test]
fn eval_csv() {
    let out = psibar("eval --fn lambda --n 3..4 --format csv").stdout;
    assert_eq!(out, "n,value,class,section\n3,2,2,I\n4,1,1,III\n");
}

#[test]
fn sieve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.sieve");
    let out = json(&format!("sieve --limit 100000 --out {}", path.display()));
    assert_eq!(out["limit"], 100_000);
    let table = sieve_file::load(&path).unwrap();
    assert_eq!(out["checksum"], table.checksum());
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=100_000u64);
        assert_eq!(table.d(n).unwrap() as u64, big_d_u64(n), "n = {n}");
    }
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 8 + 8 + 4 * 100_000 + 8);
    assert_eq!(sieve_file::encode(&table), bytes);

    assert_eq!(psibar("sieve --limit 1").exit_code, 2);
    assert_eq!(psibar("sieve --limit 99999999999").exit_code, 3);
}

#[test]
fn classes_queries() {
    let v = json("classes --k 1");
    assert_eq!(keys(&v), ["k", "members", "extremes", "complete"]);
    assert_eq!(v["members"], serde_json::json!([4]));
    assert_eq!(psibar("classes --k 0 --sections --format plain").stdout, "class 0: 1:I 2:III\n");
    let v = json("classes --k 4 --extremes");
    let e = &v["extremes"];
    assert_eq!((e["min_odd"].as_u64(), e["min_even"].as_u64()), (Some(9), Some(18)));
    assert_eq!((e["max_odd"].as_u64(), e["max_even"].as_u64()), (Some(13), Some(32)));
    assert_eq!(e["largest_odd"], 13);
    assert_eq!(v["complete"], true);
    assert_eq!(psibar("classes --k 1 --largest-odd").exit_code, 2);
    assert_eq!(json("classes --k 10 --largest-odd")["extremes"]["largest_odd"], 991);
}

#[test]
fn classes_from_sieve_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.sieve");
    psibar(&format!("sieve --limit 40 --out {}", path.display()));
    let v = json(&format!("classes --k 4 --sieve {}", path.display()));
    assert_eq!(v["complete"], true);
    // 2^6 is out of reach: the answer is marked incomplete
    let v = json(&format!("classes --k 5 --sieve {}", path.display()));
    assert_eq!(v["complete"], false);
    let out = psibar(&format!("classes --k 8 --largest-odd --sieve {}", path.display()));
    assert_eq!(out.exit_code, 3);

    std::fs::write(&path, b"NOTASIEVE").unwrap();
    assert_eq!(psibar(&format!("classes --k 4 --sieve {}", path.display())).exit_code, 2);
}

#[test]
fn verify_suites() {
    let v = json("verify --suite classes --kmax 14 --limit 32768");
    assert_eq!(v["passed"], true);
    let b: Vec<u64> = v["suites"][0]["largest_odd"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["b"].as_u64().unwrap())
        .collect();
    assert_eq!(b, [1, 3, 7, 13, 31, 61, 127, 223, 487, 991, 1951, 3967, 8191, 16381]);

    let white = psibar("verify --suite white --format plain");
    assert_eq!(white.exit_code, 0);
    assert!(white.stdout.contains("p = 2, q = 3"));

    let v = json("verify --suite density --c 0 --limit 20000");
    assert_eq!(v["passed"], true);
    let v = json("verify --suite mersenne --kmax 12");
    assert_eq!(v["passed"], true);

    assert_eq!(psibar("verify --suite classes --kmax 20 --limit 1000").exit_code, 3);
    assert_eq!(psibar("verify --suite density --c 1/0").exit_code, 2);
}

#[test]
fn density_rows() {
    let v = json("density --c 0 --xs 100");
    let row = &v["rows"][0];
    assert_eq!(keys(row)[..4], ["x", "b_c", "pi", "ratio"]);
    assert_eq!((row["x"].as_u64(), row["b_c"].as_u64(), row["pi"].as_u64()), (Some(100), Some(4), Some(25)));
    assert_eq!(row["ratio"], "4/25");
    assert_eq!(row["ratio_decimal"], "0.160000");

    let v = json("density --c -2 --xs 100");
    assert_eq!(v["rows"][0]["b_c"], 24);

    let v = json("density --c 0 --xs 1000,10000");
    assert_eq!(v["rows"][0]["b_c"], 94);
    assert_eq!(v["rows"][1]["b_c"], 961);

    assert_eq!(json("density --c 0 --witness")["witness"]["omega"], "53");
    let w = &json("density --c 1/2 --witness")["witness"];
    assert_eq!((w["k"].as_u64(), w["omega"].as_str()), (Some(3), Some("647")));
    assert_eq!(json("density --c 0.5 --witness")["witness"]["omega"], "647");

    assert_eq!(psibar("density --c x --xs 100").exit_code, 2);
    assert_eq!(psibar("density --c 0 --xs 100,10").exit_code, 2);
    assert_eq!(psibar("density --c 0").exit_code, 2);
    assert_eq!(psibar("density --c 0 --xs 1000000000000").exit_code, 3);
}

#[test]
fn bound_reports() {
    let v = json("bound --p 2 --q 3 --k 10");
    assert_eq!(v["witness"], "441");
    assert_eq!(v["witness_class"], 10);
    assert_eq!(v["sieve_b"], Value::Null);
    assert_eq!(psibar("bound --p 2 --q 4 --k 10").exit_code, 2);
    assert_eq!(psibar("bound --p 2 --q 3 --k 1").exit_code, 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.sieve");
    psibar(&format!("sieve --limit 2048 --out {}", path.display()));
    let v = json(&format!("bound --p 2 --q 3 --k 10 --sieve {}", path.display()));
    assert_eq!(v["sieve_b"], 991);
    assert_eq!(v["sandwich"], true);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_psibar");
    let out = Command::new(bin).args(["eval", "--fn", "lambda", "--n", "9", "--format", "plain"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "9 4 class 4 section I\n");
    let out = Command::new(bin).args(["sieve", "--limit", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
