use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sqgt::cli::io::read_matrix;
use sqgt::construct::fixtures;

fn sqgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqgt")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn shipped_fixture_matches_the_worked_example() {
    let (c, p) = read_matrix(&data("concat_9x24.sqgt")).unwrap();
    assert_eq!(c, fixtures::concat_disjunct_9x24());
    assert_eq!((p.q, p.levels(), p.u), (7, 7, 2));
    let (base, _) = read_matrix(&data("disjunct_9x12.sqgt")).unwrap();
    assert_eq!(base.to_rows(), fixtures::disjunct_base_9x12().to_rows());
}

#[test]
fn construct_encode_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.sqgt");
    let base = data("disjunct_9x12.sqgt");
    let r = sqgt(&["construct", "--method", "concat-disjunct", "--base", path(&base), "--q", "7", "--eta1", "2", "--out", path(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(data("concat_9x24.sqgt")).unwrap());

    let y = sqgt(&["encode", "--matrix", path(&out), "--defectives", "2,20"]);
    assert_eq!(stdout(&y), "3 0 1 4 0 0 0 3 1\n");
    for algorithm in ["concat", "ml", "bp"] {
        let r = sqgt(&["decode", "--algorithm", algorithm, "--matrix", path(&out), "--syndrome", "3 0 1 4 0 0 0 3 1"]);
        assert_eq!(stdout(&r), "2,20\n", "{algorithm}");
    }
}

#[test]
fn lindstrom_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l.sqgt");
    assert!(sqgt(&["construct", "--method", "lindstrom", "--kappa", "3", "--q", "9", "--eta1", "2", "--out", path(&out)]).status.success());
    let y = stdout(&sqgt(&["encode", "--matrix", path(&out), "--defectives", "1,5,9,26"]));
    let r = sqgt(&["decode", "--algorithm", "lindstrom", "--matrix", path(&out), "--syndrome", y.trim()]);
    assert_eq!(stdout(&r), "1,5,9,26\n");
    let wrong = sqgt(&["decode", "--algorithm", "lindstrom", "--chains", "drop-smallest", "--matrix", path(&out), "--syndrome", y.trim()]);
    assert!(!wrong.status.success());
}

#[test]
fn verify_reports_pass_and_witness() {
    let ok = sqgt(&["verify", "--property", "bin-disjunct", "--matrix", path(&data("disjunct_9x12.sqgt"))]);
    assert_eq!(stdout(&ok), "PASS\n");
    let bad = sqgt(&["verify", "--property", "sq-disjunct", "--matrix", path(&data("concat_9x24.sqgt"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("FAIL sq-disjunct sets="));
    let sep = sqgt(&["verify", "--property", "sq-separable", "--matrix", path(&data("concat_9x24.sqgt"))]);
    assert_eq!(stdout(&sep), "PASS\n");
}

#[test]
fn errors_exit_nonzero_with_their_name() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.sqgt");
    std::fs::write(&broken, "SQGT-CODE v1\nq=3 Q=3 m=2 n=2\neta=0,1,2,5\n1 2\n").unwrap();
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["encode".into(), "--matrix".into(), path(&broken).into(), "--defectives".into(), "1".into()], "ParseError"),
        (
            vec!["encode".into(), "--matrix".into(), path(&data("concat_9x24.sqgt")).into(), "--defectives".into(), "25".into()],
            "BadSubject",
        ),
        (
            vec!["decode".into(), "--algorithm".into(), "disjunct".into(), "--matrix".into(), path(&data("concat_9x24.sqgt")).into(), "--syndrome".into(), "1 2".into()],
            "LengthMismatch",
        ),
        (vec!["construct".into(), "--method".into(), "lindstrom".into(), "--kappa".into(), "12".into()], "BadKappa"),
        (vec!["construct".into(), "--method".into(), "bose-chowla".into(), "--n".into(), "5".into(), "--q".into(), "1".into()], "AlphabetTooSmall"),
        (vec!["capacity".into(), "--d".into(), "2".into(), "--q".into(), "3".into(), "--Q".into(), "3".into(), "--grid-step".into(), "0.3".into()], "ConfigError"),
        (vec!["simulate".into(), "--config".into(), path(&dir.path().join("missing.cfg")).into()], "Io"),
    ];
    for (args, name) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = sqgt(&args);
        assert_eq!(r.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&r.stderr);
        assert!(err.starts_with(&format!("error: {name}:")), "{args:?}: {err}");
    }
}

#[test]
fn simulate_is_reproducible_and_seedable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "# small sweep\nseed=3\nn=30\nd=3\nm=20\neta=1\nq=2..4\nnoise=0/0,0.05/0.05\ntrials=20\n").unwrap();
    let a = stdout(&sqgt(&["simulate", "--config", path(&cfg)]));
    let b = stdout(&sqgt(&["simulate", "--config", path(&cfg)]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 3 * 2 * 2);
    assert!(a.starts_with("seed,n,m,d,q,eta,gamma_p,gamma_n,trials,iters,method,P_e,P_FN,P_FP\n"));
    let other = stdout(&sqgt(&["simulate", "--config", path(&cfg), "--seed", "4"]));
    assert!(other.lines().skip(1).all(|l| l.starts_with("4,")));
    let threads = Command::new(env!("CARGO_BIN_EXE_sqgt"))
        .args(["simulate", "--config", path(&cfg)])
        .env("SQGT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&threads), a);
}

#[test]
fn capacity_prints_the_optimum() {
    let r = sqgt(&["capacity", "--d", "1", "--q", "2", "--Q", "2", "--grid-step", "0.1"]);
    assert!(r.status.success());
    let text = stdout(&r);
    assert!(text.starts_with("alpha=1\n"), "{text}");
    assert!(text.contains("P_T=0.5,0.5\n"));
}

#[test]
fn random_constructions_follow_the_seed() {
    let args = ["construct", "--method", "random-disjunct", "--n", "10", "--d", "2", "--q", "5", "--eta1", "2", "--rows", "12"];
    let a = stdout(&sqgt(&[&args[..], &["--seed", "9"]].concat()));
    let b = stdout(&sqgt(&[&args[..], &["--seed", "9"]].concat()));
    let c = stdout(&sqgt(&[&args[..], &["--seed", "10"]].concat()));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 3 + 12);
}
