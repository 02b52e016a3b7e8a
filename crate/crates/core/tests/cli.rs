use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use orbita::bundled;
use orbita::config::Config;
use orbita::oracle::diagonal_sl2_multiplicities;
use serde_json::Value;

fn orbita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbita")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.lines().last().expect("stderr has a line")).expect("stderr is JSON")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn malformed_cartan_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(
        &path,
        "schema = 1\n[group.g]\nname = \"bad\"\ncartan = [[2, 1], [-1, 2]]\ncompact = [true, false]\n",
    )
    .unwrap();
    let out = orbita(&["--config", path.to_str().unwrap(), "chambers"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_json(&out)["error"], "invalid_cartan");
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = orbita(&["--config", "/nonexistent/pair.cfg", "chambers"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn non_admissible_pair_refuses_to_restrict() {
    let out = orbita(&["--bundled", "hol-antihol-sl2", "restrict", "--cutoff", "8"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_json(&out)["error"], "not_admissible_pair");
}

#[test]
fn selftest_rejects_a_corrupt_config() {
    let out = orbita(&["--config", &fixture("corrupt-su21.cfg"), "selftest"]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "selftest_failed");
    assert_eq!(err["failed"][0]["criterion"], 2);
}

#[test]
fn selftest_passes_on_bundled_data() {
    let out = orbita(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 10, "{text}");
}

#[test]
fn diagonal_restriction_is_the_ladder() {
    let out = orbita(&["--bundled", "diag-sl2", "restrict", "--orbit", "1/2,1/2", "--cutoff", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, entries) = rows.split_last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["mode"], "certified");
    assert_eq!(summary["unique_chamber"], 0);

    // Parameters are in units of the root: j/2 for the oracle's j.
    let expected = diagonal_sl2_multiplicities(1, 1, 40);
    let mut seen = BTreeMap::new();
    for e in entries {
        assert_eq!(e["certified"], true);
        let m = e["multiplicity"].as_i64().unwrap();
        if m != 0 {
            let coord = e["orbit"][0].as_str().unwrap();
            let j = match coord.split_once('/') {
                Some((n, "2")) => n.parse::<i64>().unwrap(),
                None => 2 * coord.parse::<i64>().unwrap(),
                _ => panic!("unexpected coordinate {coord}"),
            };
            seen.insert(j, m);
        }
    }
    let expected: BTreeMap<i64, i64> = expected.into_iter().filter(|(j, _)| *j < 20).collect();
    assert_eq!(seen, expected);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_orbita"))
            .env("ORBITA_THREADS", threads)
            .args(["--bundled", "identity-su21", "restrict", "--cutoff", "6"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    let c = run("4");
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn blattner_csv_for_a_holomorphic_series() {
    let out = orbita(&["--bundled", "sl2", "blattner", "--orbit", "1", "--cutoff", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "mu_1,multiplicity,ck2\n3/2,1,9\n5/2,1,25\n7/2,1,49\n");
}

#[test]
fn bundled_configs_round_trip_through_toml() {
    for name in bundled::NAMES {
        let cfg = bundled::config(name).unwrap();
        let again = Config::parse(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg, "{name}");
    }
}

#[test]
fn round_tripped_config_gives_the_same_chambers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sp4.cfg");
    std::fs::write(&path, bundled::config("sp4").unwrap().to_toml()).unwrap();
    let from_file = orbita(&["--config", path.to_str().unwrap(), "chambers"]);
    let from_bundle = orbita(&["--bundled", "sp4", "chambers"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_bundle.stdout);
}
