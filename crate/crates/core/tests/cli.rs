use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qcf");

fn qcf(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .parse()
        .unwrap()
}

#[test]
fn bias_report() {
    let o = qcf(&["qcf-bias", "--alpha", "0.7853981634", "--p", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "alpha: 0.785398163\np: 0\neps_sender: 0.353553\neps_receiver: 0.353553\neps_sender_berlin: 0.176777\n"
    );
}

#[test]
fn fair_and_dice_reports() {
    let o = qcf(&["qcf-fair", "--p", "0"]);
    assert_eq!(stdout(&o), "p: 0\nalpha: 0.785398163\nepsilon: 0.353553391\n");

    let o = qcf(&["dr-solve", "--p", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert!((field(&r, "beta") - 1.151_128_07).abs() < 1e-8);
    assert!((field(&r, "p_star") - 0.956_612_081).abs() < 1e-9);
    assert!((field(&r, "epsilon") - 0.289_945_415).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(qcf(&["qcf-fair", "--p", "1.5"]).status.code(), Some(1));
    assert_eq!(qcf(&["qcf-bias", "--alpha", "2.0"]).status.code(), Some(1));
    assert_eq!(qcf(&["qcf-run", "--alpha", "0.5", "--alice", "cheat:0", "--bob", "cheat:1"]).status.code(), Some(1));
    assert_eq!(qcf(&["qcf-run", "--alpha", "0.5", "--alice", "liar"]).status.code(), Some(1));
    assert_eq!(qcf(&["no-such-command"]).status.code(), Some(1));
    let o = qcf(&["dr-solve", "--p", "0.9999"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("solver"));
    let o = qcf(&["curve", "--which", "qcf", "--p-min", "0", "--p-max", "0.5", "--steps", "3", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(qcf(&["--help"]).status.code(), Some(0));
}

#[test]
fn restart_cap_exhaustion_exits_two() {
    let o = qcf(&["qcf-run", "--alpha", "0.5", "--eta", "0.9", "--restart-cap", "2", "--trials", "2000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(field(&stdout(&o), "restart_exceeded") > 20.0);
}

#[test]
fn curves_are_deterministic_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    for (which, first) in [("qcf", "0,0.785398,0.353553"), ("dr", "0,0.785398,1.15113,0.956612,0.289945")] {
        let paths = [dir.path().join(format!("{which}1.csv")), dir.path().join(format!("{which}2.csv"))];
        for path in &paths {
            let o = qcf(&["curve", "--which", which, "--p-min", "0", "--p-max", "0.95", "--steps", "20", "--out", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        }
        let a = std::fs::read(&paths[0]).unwrap();
        assert_eq!(a, std::fs::read(&paths[1]).unwrap());
        let text = String::from_utf8(a).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[1], first);
        let eps: Vec<f64> = rows[1..].iter().map(|r| r.rsplit(',').next().unwrap().parse().unwrap()).collect();
        assert!(eps.windows(2).all(|w| w[1] > w[0]), "{which}: {eps:?}");
    }
}

#[test]
fn cheating_runs_match_closed_forms() {
    for args in [
        ["--alice", "cheat:0", "--bob", "honest"],
        ["--alice", "honest", "--bob", "cheat:1"],
    ] {
        let mut full = vec!["qcf-run", "--alpha", "0.7853981634", "--p", "0.5", "--seed", "9"];
        full.extend_from_slice(&args);
        let o = qcf(&full);
        assert_eq!(o.status.code(), Some(0));
        let z = field(&stdout(&o), "z");
        assert!(z.abs() < 4.0, "{args:?}: z = {z}");
    }
}

#[test]
fn dice_runs() {
    for scenario in ["vs-alice", "vs-bob", "vs-charlie"] {
        let o = qcf(&["dr-run", "--p", "0.3", "--scenario", scenario, "--trials", "100000", "--seed", "4"]);
        assert_eq!(o.status.code(), Some(0));
        let r = stdout(&o);
        assert!(field(&r, "z").abs() < 4.0, "{scenario}: {r}");
        assert!((field(&r, "analytic") - 0.965_559_4).abs() < 1e-6);
    }
    let r = stdout(&qcf(&["dr-run", "--p", "0", "--scenario", "honest", "--trials", "100000"]));
    let n = 100_000.0;
    assert!((field(&r, "wins_charlie") / n - 0.5).abs() < 4.0 * (0.25f64 / n).sqrt());
    assert!((field(&r, "wins_alice") / n - 0.25).abs() < 4.0 * (0.1875f64 / n).sqrt());
}

#[test]
fn transcript_dump_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let o = qcf(&[
        "qcf-run", "--alpha", "0.7853981634", "--eta", "0.5", "--alice", "cheat:1", "--trials", "10", "--seed", "6",
        "--dump-transcripts", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), include_str!("golden/cheat_sender_lossy.jsonl"));

    let path = dir.path().join("dr.jsonl");
    let o = qcf(&["dr-run", "--p", "0.3", "--scenario", "vs-bob", "--trials", "50", "--dump-transcripts", path.to_str().unwrap(), "--dump-limit", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let outcomes = text.lines().filter(|l| l.contains(r#""tag":"outcome""#)).count();
    // Two rounds per tournament, five tournaments dumped.
    assert_eq!(outcomes, 10);
    assert!(text.lines().all(|l| l.contains(r#""round":"#)));
}
