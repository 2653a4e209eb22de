use std::process::{Command, Output};

fn stringprime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringprime"))
        .args(args)
        .env_remove("STRINGPRIME_CACHE")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table1_csv_rows() {
    let out = stringprime(&["table1", "--max-l", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,M,logN"));
    let expected = [(1, 83u64, 330.7), (2, 1847, 22_887.4), (3, 50411, 689_676.0)];
    for ((l, m, log_n), line) in expected.into_iter().zip(lines) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0].parse::<u32>().unwrap(), l);
        assert_eq!(cells[1].parse::<u64>().unwrap(), m);
        let got: f64 = cells[2].parse().unwrap();
        assert!((got - log_n).abs() / log_n <= 5e-3, "{line}");
    }
}

#[test]
fn solve_logn_prints_root() {
    let out = stringprime(&["solve-logn", "--b", "57", "--precision", "4", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "b,log_n\n57,330.7\n");
}

#[test]
fn not_found_exit_code() {
    let out = stringprime(&["ap", "--pattern", "123", "--k", "3", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not found ≤ 100"));
}

#[test]
fn argument_and_resource_errors() {
    assert_eq!(stringprime(&["count-avoiders", "--pattern", "", "--x", "5"]).status.code(), Some(2));
    assert_eq!(stringprime(&["bound", "--l", "0"]).status.code(), Some(2));
    assert_eq!(stringprime(&["coverage", "--l", "2", "--limit", "5000000000"]).status.code(), Some(3));
}

#[test]
fn markdown_output() {
    let out = stringprime(&["count-avoiders", "--pattern", "9", "--x", "99", "--format", "markdown"]);
    assert_eq!(stdout(&out), "| pattern | x | avoiders |\n| --- | --- | --- |\n| 9 | 99 | 80 |\n");
}

#[test]
fn cache_dir_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["density", "--pattern", "7", "--exponents", "3,6", "--format", "csv"];
    let plain = stdout(&stringprime(&args));
    let mut cached_args = args.to_vec();
    let path = dir.path().to_str().unwrap();
    cached_args.extend(["--cache-dir", path]);
    assert_eq!(stdout(&stringprime(&cached_args)), plain);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(stdout(&stringprime(&cached_args)), plain);

    let via_env = Command::new(env!("CARGO_BIN_EXE_stringprime"))
        .args(args)
        .env("STRINGPRIME_CACHE", path)
        .output()
        .unwrap();
    assert_eq!(stdout(&via_env), plain);
}

#[test]
fn csv_identical_across_thread_counts() {
    let base = ["coverage", "--l", "3", "--limit", "100000", "--format", "csv"];
    let outputs: Vec<String> = ["1", "3", "8"]
        .iter()
        .map(|t| {
            let mut args = base.to_vec();
            args.extend(["--threads", t]);
            stdout(&stringprime(&args))
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(outputs[0], "l,universe_size,m,last_string\n3,900,50411,504\n");
}
