mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use common::*;
use leakregion::io::{emit_channel, frontier_csv, frontier_from_rows, parse_channel, parse_frontier_csv};
use leakregion::prob::Unit;
use leakregion::region::{pareto_filter, zero_rate_region, RegionFrontier};
use leakregion::Error;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_leakregion"));
    cmd.args(args).env_remove("LEAKREGION_SEED").env_remove("LEAKREGION_UNIT");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn channel_round_trip() {
    let mut r = rng(9);
    for _ in 0..20 {
        let ch = random_channel(&mut r, 3, 2, 2, 3).with_cost(vec![0.25, 1.5], 1.0).unwrap();
        let back = parse_channel(&emit_channel(&ch)).unwrap();
        assert_eq!(back, ch);
    }
}

#[test]
fn minimal_identity_channel_parses() {
    let text = std::fs::read_to_string(data("xor_channel.toml")).unwrap();
    let ch = parse_channel(&text).unwrap();
    assert_eq!((ch.card_s(), ch.card_x(), ch.card_y1(), ch.card_y2()), (2, 2, 2, 2));
}

#[test]
fn short_kernel_row_is_rejected() {
    let text = std::fs::read_to_string(data("xor_channel.toml")).unwrap();
    let bad = text.replacen("probs = [1.0, 0.0, 0.0, 0.0]", "probs = [0.999, 0.0, 0.0, 0.0]", 1);
    assert_ne!(bad, text);
    match parse_channel(&bad) {
        Err(Error::Validation(msg)) => assert!(msg.contains("x = 0") || msg.contains("x=0"), "{msg}"),
        other => panic!("expected validation error, got {other:?}"),
    }
    let broken = text.replacen("card_x = 2", "card_x = [", 1);
    assert!(matches!(parse_channel(&broken), Err(Error::Parse { .. })));
}

#[test]
fn frontier_csv_is_idempotent() {
    let f = zero_rate_region(&xor_channel(0.3), 32).unwrap();
    let csv = frontier_csv(&f, Unit::Bits);
    let rows = parse_frontier_csv(&csv).unwrap();
    let refiltered = pareto_filter(rows.clone(), |(q, _)| *q);
    assert_eq!(refiltered, rows);
    assert_eq!(frontier_csv(&frontier_from_rows(refiltered), Unit::Bits), csv);
}

#[test]
fn tiny_frontier_files() {
    let empty = RegionFrontier::default();
    assert_eq!(frontier_csv(&empty, Unit::Bits).lines().count(), 1);
    let one = zero_rate_region(&xor_channel(0.5), 4).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one.points[0].as_array(), [0.0; 5]);
    assert_eq!(frontier_csv(&one, Unit::Bits).lines().count(), 2);
}

#[test]
fn exit_codes() {
    let ok = run(&["zero-rate", "--channel", data("xor_channel.toml").to_str().unwrap(), "--steps", "8"], &[]);
    assert_eq!(ok.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "card_s = ").unwrap();
    let o = run(&["zero-rate", "--channel", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("missing.toml");
    let o = run(&["zero-rate", "--channel", missing.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(4));

    let text = std::fs::read_to_string(data("noisy_channel.toml")).unwrap();
    let tight = dir.path().join("tight.toml");
    std::fs::write(&tight, text.replace("cost = [0.0, 1.0]", "cost = [0.5, 1.0]")).unwrap();
    let o = run(&["zero-rate", "--channel", tight.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["verify-gaussian", "--p", "1", "--n1", "1", "--n2", "2", "--q1", "1", "--q2", "1", "--rho1", "0.5"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["gaussian", "--p", "1", "--n1", "1", "--n2", "2", "--rho1", "0.5"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let ch = data("noisy_channel.toml");
    let args = ["search", "--channel", ch.to_str().unwrap(), "--cards", "2,2,1", "--samples", "3", "--local-iters", "4"];
    let a = run(&args, &[("LEAKREGION_SEED", "5")]);
    let b = run(&args, &[("LEAKREGION_SEED", "5")]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&p1, &p2] {
        let o = run(&["gaussian", "--p", "1", "--n1", "1", "--n2", "2", "--q1", "1", "--q2", "1", "--gamma-steps", "9", "--rho-steps", "9", "--out", p.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn environment_overrides() {
    let ch = data("noisy_channel.toml");
    let args = ["zero-rate", "--channel", ch.to_str().unwrap(), "--steps", "4"];
    let bits = stdout(&run(&args, &[]));
    let nats = stdout(&run(&args, &[("LEAKREGION_UNIT", "nats")]));
    let flag = stdout(&run(&[&args[..], &["--unit", "nats"]].concat(), &[]));
    assert_ne!(bits, nats);
    assert_eq!(nats, flag);

    let search = ["search", "--channel", ch.to_str().unwrap(), "--cards", "1,2,1", "--samples", "2", "--local-iters", "2"];
    let env_seed = stdout(&run(&search, &[("LEAKREGION_SEED", "11")]));
    let flag_seed = stdout(&run(&[&search[..], &["--seed", "11"]].concat(), &[]));
    assert_eq!(env_seed, flag_seed);
}

#[test]
fn channel_from_stdin() {
    let text = std::fs::read(data("xor_channel.toml")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_leakregion"))
        .args(["zero-rate", "--channel", "-", "--steps", "4"])
        .env_remove("LEAKREGION_UNIT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let from_file = run(&["zero-rate", "--channel", data("xor_channel.toml").to_str().unwrap(), "--steps", "4"], &[]);
    assert_eq!(o.stdout, from_file.stdout);
}
