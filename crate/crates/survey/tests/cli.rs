use std::fs;
use std::process::{Command, Output};

fn drinfeld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn identities_pass_for_small_fields() {
    for q in ["2", "3"] {
        let o = drinfeld(&["identities", "--q", q, "--max-deg", "3"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
        assert!(out.contains("inverse-norm"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(drinfeld(&["identities", "--q", "7"]).status.code(), Some(2));
    assert_eq!(drinfeld(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(drinfeld(&["report", "density", "--records", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(drinfeld(&["density", "--q", "3", "--d", "2,2"]).status.code(), Some(2));
}

#[test]
fn density_command_prints_both_series() {
    let o = drinfeld(&["density", "--q", "3", "--d", "1", "--cutoff", "1", "--zywina"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // 1 − 3/48 exactly, and (47/48)³
    assert!(out.contains("delta: 0.937500000000 (exact 15/16)"), "{out}");
    assert!(out.contains("exact 103823/110592"), "{out}");
    assert!(out.contains("agree within tails"));
}

#[test]
fn survey_and_reports_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("z.cfg");
    let out = dir.path().join("z.jsonl");
    fs::write(&cfg, "# Zywina, q = 3\nq = 3\ng1 = 1\ng2 = 0,0,2\ndeg_max = 4\ntargets = 1; 1,1\n").unwrap();
    let (cfg_s, out_s) = (cfg.to_str().unwrap(), out.to_str().unwrap());

    let o = drinfeld(&["survey", "--config", cfg_s, "--out", out_s, "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("computed 32 primes"));
    let first = fs::read(&out).unwrap();

    let o = drinfeld(&["survey", "--config", cfg_s, "--out", out_s, "--resume"]);
    assert!(stdout(&o).contains("computed 0 primes, reused 32"));
    assert_eq!(fs::read(&out).unwrap(), first);

    let csv = dir.path().join("d.csv");
    let o = drinfeld(&["report", "density", "--records", out_s, "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# density of d1 = 1 (q = 3"));
    assert!(text.contains("# density of d1 = 1,1 (q = 3"));
    let csv_text = fs::read_to_string(&csv).unwrap();
    assert_eq!(csv_text.matches("q,x,good,count").count(), 2);

    let o = drinfeld(&["report", "exponent", "--records", out_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f(x) = floor(x/3)"));

    let o = drinfeld(&["report", "splitting", "--records", out_s, "--m", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("primes dividing m: (1,1)"));
}

#[test]
fn corrupted_record_file_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("z.cfg");
    let out = dir.path().join("z.jsonl");
    fs::write(&cfg, "q = 3\ng1 = 1\ng2 = 0,0,2\ndeg_max = 2\n").unwrap();
    let o = drinfeld(&["survey", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let broken = text.replacen(r#""d1":"1","d2":"1,1""#, r#""d1":"1,1","d2":"1""#, 1);
    assert_ne!(broken, text);
    fs::write(&out, broken).unwrap();
    let o = drinfeld(&["report", "exponent", "--records", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fails validation"));
}
