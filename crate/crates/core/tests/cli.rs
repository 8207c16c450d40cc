use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-layers")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exit_codes_follow_verdicts() {
    let pass = run(&["verify", "--antitree", "1;2,3", "--depth", "4"]);
    assert_eq!(pass.status.code(), Some(0), "{}", stdout(&pass));
    let fail = run(&["verify", "--fixture", "fig3a", "--check", "path-commuting"]);
    assert_eq!(fail.status.code(), Some(1));
    let text = stdout(&fail);
    assert!(text.contains("path-commuting: fail"), "{text}");
    assert!(text.contains("=1") && text.contains("=2"), "{text}");
}

#[test]
fn verify_csv_lists_witnesses() {
    let o = run(&["verify", "--fixture", "fig4b", "--check", "path-commuting", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,verdict,witness"));
    assert!(lines.all(|l| l.starts_with("path-commuting,fail,")));
    assert!(text.contains("k=1 l=1"), "{text}");
}

#[test]
fn family_preserving_counterexample_for_fig5() {
    let o = run(&["verify", "--fixture", "fig5", "--check", "family-preserving"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no automorphism: condition"));
    let strong = run(&["verify", "--fixture", "fig5", "--check", "strong"]);
    assert_eq!(strong.status.code(), Some(0));
}

#[test]
fn build_round_trips_through_lgf_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--tree-cs", "2|0,1;0", "--depth", "3", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.path().join("graph.lgf");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&o));
    let again = run(&["build", "--lgf", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn decompose_both_reconciles_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "decompose",
        "--antitree",
        "1;2,3",
        "--depth",
        "6",
        "--method",
        "both",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("reconcile: pass"));
    for f in ["generic.csv", "closed_form.csv", "reconcile.txt"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
}

#[test]
fn spectrum_csv_matches_dense() {
    let o = run(&["spectrum", "--antitree", "1,2,1,0;", "--depth", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let dense: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let expected = [0.0, 2.0, 2.0, 4.0];
    assert!(dense.iter().zip(expected).all(|(x, y)| (x - y).abs() < 1e-10), "{text}");
}

#[test]
fn bands_from_coefficients_and_from_tree() {
    let o = run(&["bands", "--a", "1", "--b", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[0] + 2.0).abs() < 1e-9 && (row[1] - 2.0).abs() < 1e-9, "{text}");

    let t = run(&["bands", "--tree-cs", "2|1", "--depth", "60"]);
    assert_eq!(t.status.code(), Some(0), "{}", String::from_utf8_lossy(&t.stderr));
    assert!(stdout(&t).starts_with("1 bands"));
}

#[test]
fn detect_period_on_sparse_gamma() {
    let o = run(&["detect-period", "--sequence", "5,7;1,2", "--length", "40", "--format", "csv"]);
    assert_eq!(stdout(&o), "start,period\n2,2\n");
    let s = run(&["detect-period", "--sparse-gamma", "2", "--length", "60", "--max-period", "4"]);
    assert_eq!(s.status.code(), Some(0));
    // A finite window of the sparse sequence ends in a run of zeros.
    let text = stdout(&s);
    let start: usize = text
        .strip_prefix("eventually periodic on observed data: start ")
        .and_then(|r| r.split(',').next())
        .and_then(|n| n.parse().ok())
        .unwrap_or_else(|| panic!("{text}"));
    assert!(start > 20 && text.trim_end().ends_with("period 1"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--fixture", "fig3a", "--antitree", "1;2"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--antitree", "1,2;", "--depth", "5"]).status.code(), Some(2));
    let e = run(&["build", "--lgf", "/nonexistent/graph.lgf"]);
    assert_eq!(e.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&e.stderr).starts_with("error:"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
