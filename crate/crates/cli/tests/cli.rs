use std::io::Write;
use std::process::{Command, Output};

use klingen_core::dims::DimReport;
use klingen_core::parse::decode_report;
use klingen_core::verify::VerifyReport;

fn klingen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klingen"))
        .args(args)
        .env_remove("KLINGEN_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dim_examples() {
    let o = klingen(&["dim", "--q", "2", "--n", "4", "--sigma", "chi5", "--mode", "both", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: DimReport = decode_report("dim", &stdout(&o)).unwrap();
    assert_eq!((r.total, r.agree), (11, Some(true)));

    let o = klingen(&["dim", "--q", "2", "--n", "1", "--sigma", "chi5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("total: 0"));

    let o = klingen(&["dim", "--q", "3", "--n", "4", "--sigma", "chi5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parity"));
}

#[test]
fn exit_codes() {
    assert_eq!(klingen(&["dim", "--q", "6", "--n", "4", "--sigma", "typeI"]).status.code(), Some(1));
    assert_eq!(klingen(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(klingen(&["dim", "--q", "2", "--n", "100000", "--sigma", "chi5"]).status.code(), Some(3));
    assert_eq!(klingen(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumerate_examples() {
    let o = klingen(&["enumerate", "--q", "3", "--n", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let counts: Vec<i64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, vec![6, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
    assert!(stdout(&o).starts_with("schema,family,count,dim_typeI,dim_typeII,subtotal_typeI,subtotal_typeII\n"));

    let o = klingen(&["enumerate", "--q", "2", "--n", "2", "--format", "csv"]);
    let nonzero = stdout(&o).lines().skip(1).filter(|l| l.split(',').nth(2) != Some("0")).count();
    assert_eq!(nonzero, 1);

    let o = klingen(&["enumerate", "--q", "2", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 0"));
}

#[test]
fn table_examples() {
    let o = klingen(&["table", "--q", "2", "--n", "1..8", "--sigma", "chi5", "--format", "csv"]);
    let col: Vec<i64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(col[..5], [0, 1, 4, 11, 22]);
    assert_eq!(col.len(), 8);

    let o = klingen(&["table", "--q", "3", "--n", "4", "--sigma", "x4", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1,4,12"));

    let o = klingen(&["table", "--q", "2,3", "--n", "2", "--sigma", "typeI", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1,2,1,1"));

    let o = klingen(&["table", "--q", "2", "--n", "1..8", "--sigma", "chi5", "--format", "markdown"]);
    assert!(stdout(&o).contains("219, 260, 155, 184"));
}

#[test]
fn verify_examples() {
    for args in [
        &["verify", "counts", "--n-max", "14", "--q", "2,3"][..],
        &["verify", "chartab", "--q", "2"],
        &["verify", "rg", "--q", "2", "--n-max", "5", "--budget", "500", "--seed", "7"],
    ] {
        let o = klingen(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
    assert_eq!(klingen(&["verify", "everything"]).status.code(), Some(1));
}

#[test]
fn seed_from_environment_is_deterministic() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_klingen"))
            .args(["verify", "rg", "--n-max", "3", "--format", "json"])
            .env("KLINGEN_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b) = (run("11"), run("11"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("not-a-number").status.code(), Some(1));
}

#[test]
fn json_written_to_disk_round_trips() {
    let o = klingen(&["verify", "theorem", "--q", "2,3", "--n-max", "12", "--format", "json"]);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(&o.stdout).unwrap();
    let text = std::fs::read_to_string(f.path()).unwrap();
    let r: VerifyReport = decode_report("verify", &text).unwrap();
    assert!(r.passed());
    assert_eq!(klingen_core::parse::encode_report("verify", &r).unwrap() + "\n", text);
}
