use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn emtool(args: &[&str]) -> Output {
    emtool_with(args, None, &[])
}

fn emtool_with(args: &[&str], stdin: Option<&[u8]>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_emtool"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("emtool runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_example(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file).to_str().unwrap().to_string();
    let mut full = vec!["example"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &path]);
    let o = emtool(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn example_piped_into_axioms() {
    let even = emtool(&["example", "even", "0.5"]);
    assert_eq!(code(&even), 0);
    let o = emtool_with(&["axioms", "-"], Some(&even.stdout), &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("generator epsilon-machine:  yes"));
}

#[test]
fn axioms_exit_one_on_failure() {
    let dir = TempDir::new().unwrap();
    let np2 = write_example(dir.path(), "np2.m", &["np2", "0.5"]);
    let o = emtool(&["axioms", &np2]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("probabilistically distinct: no"));

    let sns = write_example(dir.path(), "sns.m", &["sns", "0.5", "0.5"]);
    let o = emtool(&["axioms", &sns]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("unifilar:                   no"));
}

#[test]
fn minimize_then_axioms() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.m");
    let out = out.to_str().unwrap();
    let np2 = emtool(&["example", "np2", "0.5"]);
    let o = emtool_with(&["minimize", "-", out], Some(&np2.stdout), &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&emtool(&["axioms", out])), 0);
    let map = fs::read_to_string(format!("{out}.map")).unwrap();
    assert_eq!(map, "0 -> 0\n1 -> 1\n2 -> 0\n3 -> 1\n");

    let min = write_example(dir.path(), "min.m", &["np2-min", "0.5"]);
    assert_eq!(code(&emtool(&["isomorphic", out, &min])), 0);
}

#[test]
fn minimize_to_stdout_puts_map_on_stderr() {
    let np2 = emtool(&["example", "np2", "0.3"]);
    let o = emtool_with(&["minimize", "-", "-"], Some(&np2.stdout), &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("states 2\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 -> 1"));
}

#[test]
fn isomorphic_identity_and_negative() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let abc = write_example(dir.path(), "abc.m", &["abc", "0.4", "0.6"]);
    let o = emtool(&["isomorphic", &even, &even]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0 -> 0\n1 -> 1\n");
    let o = emtool(&["isomorphic", &even, &abc]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "NOT ISOMORPHIC");

    let even3 = write_example(dir.path(), "even3.m", &["even", "0.3"]);
    assert_eq!(code(&emtool(&["isomorphic", &even, &even3])), 1);
    assert_eq!(
        code(&emtool(&["isomorphic", &even, &even3, "--tol", "0.25"])),
        0
    );
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    // Missing --seed.
    assert_eq!(code(&emtool(&["sample", &even, "--len", "5"])), 2);
    assert_eq!(code(&emtool(&["no-such-command"])), 2);
    assert_eq!(code(&emtool(&["example", "nope", "0.5"])), 2);
    assert_eq!(code(&emtool(&["example", "abc", "0.5", "0.5"])), 3);
    assert_eq!(code(&emtool(&["example", "even", "1.5"])), 3);
    assert_eq!(code(&emtool(&["axioms", "/no/such/file"])), 3);
    assert_eq!(code(&emtool(&["--help"])), 0);

    let bad = dir.path().join("bad.m");
    fs::write(
        &bad,
        "states 1\nalphabet 0 1\nedge 0 0 0.5 0\nedge 0 1 0.4 0\n",
    )
    .unwrap();
    let bad = bad.to_str().unwrap();
    let o = emtool(&["validate", bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("row 0 sums to"));
    assert_eq!(code(&emtool(&["axioms", bad])), 3);
    assert_eq!(code(&emtool(&["validate", &even])), 0);

    let o = emtool_with(&["belief", &even], None, &[("EMTOOL_THREADS", "zero")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn example_files_round_trip() {
    let o = emtool(&["example", "abc", "0.4", "0.6"]);
    let text = stdout(&o);
    let m = emachine::format::parse_machine(&text).unwrap().machine;
    assert_eq!(emachine::format::write_machine(&m), text);
    assert_eq!(m, emachine::examples::abc(0.4, 0.6).unwrap());
}

#[test]
fn sampling_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let run = |seed: &str| stdout(&emtool(&["sample", &even, "--len", "500", "--seed", seed]));
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));

    let packed = stdout(&emtool(&[
        "sample", &even, "--len", "500", "--seed", "9", "--packed",
    ]));
    let plain = run("9");
    let lines: Vec<&str> = plain.lines().skip(1).collect();
    assert_eq!(packed.lines().nth(1).unwrap(), lines.concat());
}

#[test]
fn sample_from_a_state() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    for seed in 0..20 {
        let s = seed.to_string();
        let o = emtool(&["sample", &even, "--len", "1", "--seed", &s, "--start", "1"]);
        assert_eq!(stdout(&o).lines().nth(1), Some("1"));
    }
    let o = emtool(&[
        "sample", &even, "--len", "3", "--seed", "1", "--start", "0,1",
    ]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1"));
}

#[test]
fn words_hand_count() {
    let dir = TempDir::new().unwrap();
    let sample = dir.path().join("s.txt");
    fs::write(&sample, "0110\n").unwrap();
    let o = emtool(&["words", sample.to_str().unwrap(), "--max-len", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "word,count,freq\n0,2,0.5\n1,2,0.5\n01,1,0.3333333333333333\n\
         10,1,0.3333333333333333\n11,1,0.3333333333333333\n"
    );
    assert_eq!(
        code(&emtool(&[
            "words",
            sample.to_str().unwrap(),
            "--max-len",
            "5"
        ])),
        3
    );
}

#[test]
fn sampled_even_never_shows_010() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let sample = dir.path().join("s.txt");
    let s = sample.to_str().unwrap();
    let o = emtool(&["sample", &even, "--len", "100000", "--seed", "4", "-o", s]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&emtool(&["words", s, "--max-len", "3"]));
    assert!(!csv.lines().any(|l| l.starts_with("010,")));
    assert!(csv.lines().any(|l| l.starts_with("101,")));
}

#[test]
fn belief_lines() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let o = stdout(&emtool(&["belief", &even, "0"]));
    assert!(o.contains("belief: 1 0\n"));
    assert!(o.contains("Q: 0\n"));
    let o = stdout(&emtool(&["belief", &even, "01"]));
    assert!(o.contains("belief: 0 1\n"));
    let o = stdout(&emtool(&["belief", &even, "010"]));
    assert!(o.contains("in language: no"));
    assert!(o.contains("belief: 0.6666666666666667 0.3333333333333333"));
    let o = stdout(&emtool(&["belief", &even]));
    assert!(o.contains("most likely state: 0"));
    assert_eq!(code(&emtool(&["belief", &even, "012"])), 2);
}

#[test]
fn sync_profile_csv_ignores_thread_count() {
    let dir = TempDir::new().unwrap();
    let abc = write_example(dir.path(), "abc.m", &["abc", "0.4", "0.6"]);
    let args = [
        "sync-profile",
        &abc,
        "--horizon",
        "16",
        "--chains",
        "500",
        "--seed",
        "5",
    ];
    let one = emtool_with(&args, None, &[("EMTOOL_THREADS", "1")]);
    let four = emtool_with(&args, None, &[("EMTOOL_THREADS", "4")]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let text = stdout(&one);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,mean_Q,frac_exceed,frac_unsynced"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0][1], 0.5);
    assert!(rows[16][1] < rows[0][1]);
}

#[test]
fn analytic_reconstruction_round_trips() {
    let dir = TempDir::new().unwrap();
    let abc = write_example(dir.path(), "abc.m", &["abc", "0.4", "0.6"]);
    let out = dir.path().join("rec.m");
    let report = dir.path().join("rec.txt");
    let o = emtool(&[
        "reconstruct",
        "analytic",
        &abc,
        "-o",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        code(&emtool(&[
            "isomorphic",
            &abc,
            out.to_str().unwrap(),
            "--tol",
            "1e-6"
        ])),
        0
    );
    let report = fs::read_to_string(report).unwrap();
    assert!(report.contains("method: analytic"));
    assert!(report.contains("class probabilities: 0.500000 0.500000"));
}

#[test]
fn analytic_class_explosion_is_a_data_error() {
    let sns = emtool(&["example", "sns", "0.5", "0.5"]);
    let o = emtool_with(
        &["reconstruct", "analytic", "-", "--cap", "20"],
        Some(&sns.stdout),
        &[],
    );
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("more than 20"));
}

#[test]
fn empirical_reconstruction_of_even() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let sample = dir.path().join("s.txt");
    let s = sample.to_str().unwrap();
    emtool(&["sample", &even, "--len", "200000", "--seed", "11", "-o", s]);
    let out = dir.path().join("rec.m");
    let o = emtool(&["reconstruct", "empirical", s, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("method: empirical"));
    let o = emtool(&["isomorphic", &even, out.to_str().unwrap(), "--tol", "0.02"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn topology_emits() {
    let dir = TempDir::new().unwrap();
    let even = write_example(dir.path(), "even.m", &["even", "0.5"]);
    let dfa = stdout(&emtool(&["topology", &even]));
    assert!(dfa.starts_with("# start 0\nstates 3\n"));
    let fischer = stdout(&emtool(&["topology", &even, "--emit", "fischer"]));
    assert!(fischer.starts_with("states 2\n"));
    assert!(fischer
        .lines()
        .skip(2)
        .all(|l| l.split(' ').nth(3) == Some("1")));
    let krieger = stdout(&emtool(&["topology", &even, "--emit", "krieger"]));
    assert!(krieger.starts_with("states "));
    assert_eq!(code(&emtool(&["topology", &even, "--emit", "other"])), 2);
}
