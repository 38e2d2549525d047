use std::process::{Command, Output};

use serde_json::Value;

fn nielsen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nielsen")).env_remove("NIELSEN_TABLES").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--machine"];
    a.extend_from_slice(args);
    let o = nielsen(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn group_queries() {
    assert_eq!(stdout(&nielsen(&["pi", "9", "3"])).lines().next(), Some("Z_3"));
    assert_eq!(stdout(&nielsen(&["pi", "5", "5"])).lines().next(), Some("Z"));
    assert_eq!(stdout(&nielsen(&["stems", "4"])).lines().next(), Some("0"));
    assert_eq!(json(&["stems", "7"])["group"], "Z_240");
    assert_eq!(nielsen(&["pi", "40", "3"]).status.code(), Some(2));
    assert_eq!(nielsen(&["stems", "25"]).status.code(), Some(2));
}

#[test]
fn nielsen_rp2_machine_matches_human() {
    let args = ["nielsen", "--field", "R", "--nprime", "2", "--m", "3", "--f1", "hopfC", "--f2", "zero"];
    let v = json(&args);
    let r = &v["report"];
    assert_eq!(r["R"]["finite"], 2);
    assert_eq!(r["N_sharp"]["finite"], 2);
    assert_eq!(r["N_tilde"]["finite"], 2);
    assert_eq!(r["N_plain"]["finite"], 0);
    assert_eq!(r["N_z"]["finite"], 0);
    let human = stdout(&nielsen(&args));
    for (label, key) in [("N^# ", "N_sharp"), ("Ñ   ", "N_tilde"), ("N   ", "N_plain"), ("N^Z ", "N_z")] {
        let line = human.lines().find(|l| l.starts_with(label)).unwrap();
        assert_eq!(line.trim_start_matches(label).trim_start_matches("= "), r[key]["finite"].to_string());
    }
    assert_eq!(stdout(&nielsen(&["--machine", "nielsen", "--field", "R", "--nprime", "2", "--m", "3", "--f1", "hopfC", "--f2", "zero"])), serde_json::to_string_pretty(&v).unwrap() + "\n");
}

#[test]
fn nielsen_cp1_m9() {
    let v = json(&["nielsen", "--field", "C", "--nprime", "1", "--m", "9", "--f1", "alpha_1alpha_1", "--f2", "zero"]);
    assert_eq!(v["report"]["N_sharp"]["finite"], 1);
    assert_eq!(v["report"]["N_tilde"]["finite"], 0);
    let same = json(&["nielsen", "--field", "C", "--nprime", "1", "--m", "9", "--f1", "alpha_1alpha_1", "--f2", "alpha_1alpha_1"]);
    for k in ["MCC", "MC", "N_sharp", "N_tilde", "N_plain", "N_z"] {
        assert_eq!(same["report"][k]["finite"], 0, "{k}");
    }
}

#[test]
fn compare_ranges() {
    let rp2 = stdout(&nielsen(&["compare", "--surface", "RP2", "--m-range", "3..9"]));
    for line in rp2.lines() {
        assert!(line.contains("N ≡ N^Z"), "{line}");
    }
    let empty = nielsen(&["compare", "--surface", "CP1", "--m-range", "5..4"]);
    assert!(empty.status.success());
    assert!(stdout(&empty).is_empty());
    assert_eq!(nielsen(&["compare", "--surface", "CP1", "--m-range", "2-9"]).status.code(), Some(2));
    assert_eq!(nielsen(&["compare", "--surface", "CP1", "--m-range", "2..30"]).status.code(), Some(2));
}

#[test]
fn witness_claims() {
    for claim in ["a", "b", "c"] {
        let v = json(&["witnesses", "--claim", claim]);
        for w in v["witnesses"].as_array().unwrap() {
            assert_eq!(w["witnesses"], true, "{claim}: {}", w["title"]);
        }
    }
    assert_eq!(nielsen(&["witnesses", "--claim", "d"]).status.code(), Some(2));
}

#[test]
fn selfloose_verify_and_wecken() {
    let v = json(&["selfloose", "--field", "H", "--nprime", "5", "--fiber"]);
    assert_eq!(v["looseness"]["verdict"], "NotLoose");
    let v = json(&["selfloose", "--field", "C", "--nprime", "1", "--m", "2"]);
    assert_eq!(v["looseness"]["verdict"], "Unknown");
    let v = json(&["verify-s", "--field", "H"]);
    assert_eq!(v["residual"], "0");
    assert_eq!(v["lambda"], "i");
    let v = json(&["verify-s", "--field", "R", "--nprime", "3", "--samples", "50"]);
    assert_eq!(v["all_positive"], true);
    assert_eq!(nielsen(&["verify-s", "--field", "C", "--nprime", "2"]).status.code(), Some(2));
    let v = json(&["wecken", "--field", "H", "--nprime", "2", "--m", "12"]);
    assert!(v["status"]["Unknown"].as_str().unwrap().contains("Is MCC ≡ N^# whenever K = C or H?"));
    assert_eq!(json(&["wecken", "--field", "C", "--nprime", "3", "--m", "7"])["status"], "Holds");
    let v = json(&["kervaire", "--n", "16", "--m", "30"]);
    assert_eq!(v["result"]["Exception"]["MCC"]["finite"], 1);
}

#[test]
fn strict_mode() {
    let args = ["wecken", "--field", "H", "--nprime", "2", "--m", "12"];
    assert_eq!(nielsen(&args).status.code(), Some(0));
    let mut strict = vec!["--strict"];
    strict.extend_from_slice(&args);
    assert_eq!(nielsen(&strict).status.code(), Some(1));
}

#[test]
fn table_resolution_and_validation() {
    let ok = nielsen(&["validate-data"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("0 violation"));

    let dir = std::env::temp_dir().join(format!("nielsen-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "stem 0 1\ngen iota\nstem 0 1\n").unwrap();
    let faulty = dir.join("faulty.txt");
    let text = nielsen_core::homotopy::DEFAULT_TABLES.replacen("name whitehead(3) 5 3 0", "name whitehead(3) 5 3 1", 1);
    std::fs::write(&faulty, text).unwrap();

    assert_eq!(nielsen(&["--tables", bad.to_str().unwrap(), "pi", "3", "2"]).status.code(), Some(3));
    let via_env = Command::new(env!("CARGO_BIN_EXE_nielsen")).env("NIELSEN_TABLES", &bad).args(["stems", "1"]).output().unwrap();
    assert_eq!(via_env.status.code(), Some(3));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_nielsen"))
        .env("NIELSEN_TABLES", &bad)
        .args(["--tables", faulty.to_str().unwrap(), "stems", "1"])
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
    let v = nielsen(&["--tables", faulty.to_str().unwrap(), "validate-data"]);
    assert_eq!(v.status.code(), Some(3));
    assert!(stdout(&v).contains("whitehead-order"));
    assert_eq!(nielsen(&["--tables", "/nonexistent/tables.txt", "pi", "3", "2"]).status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn expression_errors_have_positions() {
    let o = nielsen(&["sphere", "--m", "9", "--n", "5", "--f1", "whitehead(5) + ", "--f2", "zero"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column"));
    let o = nielsen(&["sphere", "--m", "1", "--n", "1", "--f1", "3", "--f2", "5"]);
    assert!(stdout(&o).contains("MC  = 2"));
}
