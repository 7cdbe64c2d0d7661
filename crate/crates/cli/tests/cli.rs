use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn rcum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixed_feasible_verifies_without_change() {
    let o = rcum(&["propagate", "--in", &data("fixed_feasible.txt"), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        stdout(&o),
        "fixpoint changed=false\n0 0 0\n1 3 3\n2 0 0\nverified\n"
    );
}

#[test]
fn propagation_moves_activity_past_block() {
    let o = rcum(&["propagate", "--in", &data("prune.txt"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "fixpoint changed=true\n0 4 4\n1 7 8\nverified\n");
}

#[test]
fn infeasible_exit_code() {
    let o = rcum(&["solve", "--in", &data("infeasible.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("status infeasible\n"));
    let o = rcum(&["propagate", "--in", &data("infeasible.txt")]);
    assert_eq!(o.status.code(), Some(2));
    // without slack the same instance is fine
    let o = rcum(&["solve", "--in", &data("infeasible.txt"), "--mode", "cumulative"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn optimal_solve_reports_worst_case_makespan() {
    let o = rcum(&["solve", "--in", &data("prune.txt"), "--optimal"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("status optimal\nobjective 11\nstarts 4 7\n"), "{out}");
    let o = rcum(&["solve", "--in", &data("prune.txt"), "--optimal", "--mode", "cumulative"]);
    assert!(stdout(&o).contains("objective 10\n"));
}

#[test]
fn timeout_exit_code() {
    let o = rcum(&["solve", "--in", &data("prune.txt"), "--timeout", "0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("status timeout\n"));
}

#[test]
fn usage_and_parse_errors() {
    let o = rcum(&["propagate", "--in", &data("malformed.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(rcum(&["solve", "--in", &data("prune.txt"), "--mode", "bogus"]).status.code(), Some(1));
    assert_eq!(rcum(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rcum(&["propagate", "--in", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn generate_is_deterministic_and_readable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let o = rcum(&[
            "generate", "--n", "12", "--pmin", "5", "--pmax", "10", "--cap", "30", "--kavg", "4",
            "--seed", "9", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let o = rcum(&["solve", "--in", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("status feasible\n"));
}

#[test]
fn compare_csv_is_byte_identical_and_never_worse() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("1.csv"), dir.path().join("2.csv")];
    for p in &paths {
        let o = rcum(&[
            "bench", "compare", "--count", "4", "--ratios", "0.4,1.0", "--seed", "3", "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&paths[0]).unwrap();
    assert_eq!(text, fs::read_to_string(&paths[1]).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ratio,instances,min,avg,max,worse,better"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], "4");
        assert_eq!(fields[5], "0", "{line}");
    }
}

#[test]
fn scaling_csv_rows() {
    let o = rcum(&["bench", "scaling", "--ns", "20,40", "--modes", "rcumulative,decomposition"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,mode,seconds,nodes,verified");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("20,rcumulative,"));
    assert!(lines[4].starts_with("40,decomposition,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}
