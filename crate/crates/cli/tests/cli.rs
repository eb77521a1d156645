use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const DIVISOR: &str =
    r#"{"N": 47, "coeffs": [{"d": -11, "r": 41, "c": "1/2"}, {"d": -11, "r": -41, "c": "1/2"}]}"#;

fn singmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singmod"))
        .args(args)
        .env_remove("SINGMOD_PREC_BITS")
        .env_remove("SINGMOD_TRUNC")
        .env_remove("SINGMOD_CACHE_DIR")
        .env_remove("SINGMOD_CONFIG")
        .env_remove("SINGMOD_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn valuation_107_profile() {
    let dir = tempfile::tempdir().unwrap();
    let div = write(dir.path(), "d.json", DIVISOR);
    let out = singmod(&[
        "valuation",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &div,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = &v["primes"][0];
    assert_eq!(row["p"], 2);
    let ords: Vec<&str> = row["by_class"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["ord"].as_str().unwrap())
        .collect();
    assert_eq!(ords, ["0/1", "1/1", "1/1"]);
    assert_eq!(v["primes"].as_array().unwrap().len(), 1);
}

#[test]
fn valuation_23_is_unit() {
    let dir = tempfile::tempdir().unwrap();
    let div = write(dir.path(), "d.json", DIVISOR);
    let out = singmod(&[
        "valuation",
        "--N",
        "47",
        "--D",
        "-23",
        "--rho",
        "27",
        "--divisor",
        &div,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["primes"], Value::Array(vec![]));
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "unit");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"N": 47, "coeffs": [{"d": -11, "r": 40, "c": "1"}]}"#,
    );
    let out = singmod(&[
        "valuation",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &bad,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());

    // Z(D, ρ) passes through z_{D,ρ} itself.
    let improper = write(
        dir.path(),
        "imp.json",
        r#"{"N": 47, "coeffs": [{"d": -107, "r": 9, "c": "1"}]}"#,
    );
    let out = singmod(&[
        "valuation",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &improper,
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());

    let div = write(dir.path(), "d.json", DIVISOR);
    let out = singmod(&[
        "verify",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &div,
        "--trunc",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--prec-bits"));

    let out = singmod(&["clgroup", "--D", "-28"]);
    assert_eq!(out.status.code(), Some(1));
    let out = singmod(&["--prec-bits", "32", "clgroup", "--D", "-23"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_both_cases() {
    let dir = tempfile::tempdir().unwrap();
    let div = write(dir.path(), "d.json", DIVISOR);
    let out = singmod(&[
        "verify",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &div,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["polynomial"]["display"], "x^3 - 3x^2 + 2x - 4");
    assert_eq!(v["norm_check"]["pass"], true);
    assert_eq!(v["pass"], true);
    let real = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["label"] == "[1,1,27]")
        .unwrap();
    assert!(real["re"].as_str().unwrap().starts_with("2.796321"));

    let out = singmod(&[
        "verify",
        "--N",
        "47",
        "--D",
        "-23",
        "--rho",
        "27",
        "--divisor",
        &div,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["polynomial"]["display"], "x^3 - x^2 + 2x - 1");
    assert_eq!(v["unit"], true);

    let empty = write(dir.path(), "e.json", r#"{"N": 47, "coeffs": []}"#);
    let out = singmod(&[
        "verify",
        "--N",
        "47",
        "--D",
        "-23",
        "--rho",
        "27",
        "--divisor",
        &empty,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["polynomial"]["coefficients"],
        serde_json::json!(["1", "-3", "3", "-1"])
    );
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_with_borcherds_table() {
    let dir = tempfile::tempdir().unwrap();
    let div = write(dir.path(), "d.json", DIVISOR);
    // The product exponents of the level-47 Hauptmodul, from its q-expansion.
    let series = singmod::cmval::ExactQSeries::hauptmodul47(600).unwrap();
    let input =
        singmod::analytic::BorcherdsInput::from_series(&series, 47, singmod::arith::rat(11, 188))
            .unwrap();
    let table = write(dir.path(), "t.json", &input.to_json().to_string());
    let run = |d: &str, rho: &str, model: &str| {
        let mut args = vec![
            "verify",
            "--N",
            "47",
            "--D",
            d,
            "--rho",
            rho,
            "--divisor",
            &div,
            "--model",
            model,
        ];
        if model == "borcherds-table" {
            args.extend(["--table", &table]);
        }
        singmod(&args)
    };
    // Class number one: Im z = √163/94 is far above the convergence bound.
    let a = run("-163", "5", "borcherds-table");
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = run("-163", "5", "hauptmodul47");
    assert_eq!(
        json(&a)["polynomial"]["coefficients"],
        serde_json::json!(["1", "-4"])
    );
    assert_eq!(
        json(&b)["polynomial"]["coefficients"],
        serde_json::json!(["1", "-4"])
    );
    assert_eq!(json(&a)["norm_check"]["pass"], true);
    // For D = −107 the non-principal points lie just above the bound and
    // need a far longer table.
    assert_eq!(run("-107", "9", "borcherds-table").status.code(), Some(3));
    let out = singmod(&[
        "verify",
        "--N",
        "47",
        "--D",
        "-107",
        "--rho",
        "9",
        "--divisor",
        &div,
        "--model",
        "borcherds-table",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tools() {
    let v = json(&singmod(&["clgroup", "--D", "-23"]));
    let forms: Vec<&str> = v["forms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["form"].as_str().unwrap())
        .collect();
    assert_eq!(forms, ["[1,1,6]", "[2,-1,3]", "[2,1,3]"]);

    assert_eq!(
        json(&singmod(&["hilbert", "-a", "-1", "-b", "-1", "-p", "2"]))["symbol"],
        -1
    );
    assert_eq!(
        json(&singmod(&["hilbert", "-a", "-1", "-b", "-1", "-p", "inf"]))["symbol"],
        -1
    );
    assert_eq!(
        json(&singmod(&["hilbert", "-a", "-1", "-b", "-1", "-p", "3"]))["symbol"],
        1
    );
    assert_eq!(
        singmod(&["hilbert", "-a", "-1", "-b", "-1", "-p", "4"])
            .status
            .code(),
        Some(1)
    );

    let v = json(&singmod(&[
        "diff", "--m", "6/107", "--scale", "47", "--D", "-107",
    ]));
    assert_eq!(v["primes"], serde_json::json!([2]));
    assert_eq!(v["nu"][0]["nu"], "1/1");
    assert_eq!(v["o"], 0);

    let v = json(&singmod(&["rho", "--n", "3", "--D", "-107"]));
    let counts: Vec<u64> = v["by_class"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [0, 1, 1]);

    let v = json(&singmod(&[
        "content",
        "--series",
        "hauptmodul47",
        "--order",
        "50",
        "--p",
        "2",
    ]));
    assert_eq!(v["content"], 0);
    let v = json(&singmod(&["content", "--series", "delta", "--order", "20"]));
    assert_eq!(v["content_primes"], serde_json::json!([]));
}

#[test]
fn gz_matches() {
    let v = json(&singmod(&["gz", "--D", "-7", "--rho", "1", "--d", "-3"]));
    assert_eq!(v["pass"], true);
    assert!(v["log_norm_exact"]
        .as_str()
        .unwrap()
        .starts_with("5.4161004022044"));
}

#[test]
fn output_is_byte_stable_and_table_renders() {
    let a = singmod(&["clgroup", "--D", "-107"]);
    let b = singmod(&["clgroup", "--D", "-107"]);
    assert_eq!(a.stdout, b.stdout);
    let t = singmod(&["clgroup", "--D", "-23", "--format", "table"]);
    let text = String::from_utf8(t.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("h ") && l.ends_with(" 3")),
        "{text}"
    );
}

#[test]
fn precedence_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "format = \"table\"\nprec_bits = 128\n",
    );
    let cache = dir.path().join("cache");
    let out = singmod(&[
        "--config",
        &cfg,
        "--cache-dir",
        cache.to_str().unwrap(),
        "clgroup",
        "--D",
        "-23",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("D "));
    assert!(cache.join("classgroup_-23.json").exists());

    // A flag beats the config file.
    let out = singmod(&[
        "--config", &cfg, "--format", "json", "clgroup", "--D", "-23",
    ]);
    assert_eq!(json(&out)["h"], 3);

    // The environment beats the config file.
    let out = Command::new(env!("CARGO_BIN_EXE_singmod"))
        .args(["--config", &cfg, "clgroup", "--D", "-23"])
        .env("SINGMOD_FORMAT", "json")
        .env_remove("SINGMOD_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(json(&out)["h"], 3);
}
