//! The command-line front end.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sturm-branches"))
}

fn config(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

const SMALL: &str = "[potential]\nc0 = 2.0\nc1 = -1.0\n\n[grid]\na = [2.0]\np_min = 10\np_max = 12\n";

#[test]
fn identical_configs_give_identical_csv() {
    let c = config(SMALL);
    let run = || bin().arg("--config").arg(c.path()).args(["compare", "--no-header-timestamp"]).output().unwrap();
    let (x, y) = (run(), run());
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
    let text = String::from_utf8(x.stdout).unwrap();
    assert!(text.starts_with("a,p,sign,region,lambda_asym,lambda_oracle,residual_scaled,budget,b2,nodes_full,gap_observed,gap_predicted\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn timestamp_line_is_the_only_difference() {
    let c = config(SMALL);
    let plain = bin().arg("--config").arg(c.path()).args(["spectrum", "--no-header-timestamp"]).output().unwrap();
    let stamped = bin().arg("--config").arg(c.path()).arg("spectrum").output().unwrap();
    let stamped = String::from_utf8(stamped.stdout).unwrap();
    let (first, rest) = stamped.split_once('\n').unwrap();
    assert!(first.starts_with("# generated "));
    assert_eq!(rest.as_bytes(), plain.stdout.as_slice());
}

#[test]
fn empty_config_is_a_usage_error() {
    let c = config("");
    let out = bin().arg("--config").arg(c.path()).arg("compare").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
}

#[test]
fn unknown_config_keys_fail() {
    let c = config(&format!("{SMALL}\n[grid_extra]\nx = 1\n"));
    let out = bin().arg("--config").arg(c.path()).arg("compare").output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn headers_per_subcommand() {
    let cases: [(&[&str], &str); 5] = [
        (&["validate"], "condition,passed,note"),
        (&["geometry", "--a", "0.5,2"], "a,region,x2,alpha_sq,alpha2_sq,F,zeta2"),
        (&["hfun", "--x-min", "-1", "--x-max", "1", "--step", "0.5"], "x,H_plus,H_minus,arg_gamma"),
        (&["spectrum", "--a", "2", "--p-min", "10", "--p-max", "11"], "p,sign,lambda0,lambda,b2,gap_pred,region"),
        (
            &["oracle", "--a", "2", "--lambda-min", "10", "--lambda-max", "14", "--symmetry", "d"],
            "lambda,symmetry,nodes_half,nodes_full,discriminant_residual",
        ),
    ];
    for (args, header) in cases {
        let out = bin().args(args).arg("--no-header-timestamp").output().unwrap();
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{args:?}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = bin().args(["hfun", "--step", "1", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("x,H_plus,H_minus,arg_gamma"));
}

#[test]
fn rejected_potential_fails_validate() {
    let c = config("[potential]\nc0 = 2.0\nc2 = -1.0\n");
    let out = bin().arg("--config").arg(c.path()).arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_passes_and_catches_bias() {
    let ok = bin().arg("selftest").output().unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = bin().args(["selftest", "--arg-gamma-bias", "1e-3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL H(-x) reflection identity"));
}
