use std::fs;
use std::path::{Path, PathBuf};

use hypwalk::cli::{help_text, run, SUBCOMMANDS};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hypwalk(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypwalk").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = file(dir.path(), "gens.txt", "aaaaa\nbbbbb\n");
    let bad = file(dir.path(), "bad.txt", "aab\naaB\n");

    let r = hypwalk(&["certify", "--space", "tree", "--rank", "2", "--delta", "0", "--generators", s(&good)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("status = certified"));
    assert!(r.stdout.contains("margin = 4\n"));

    let r = hypwalk(&["certify", "--space", "tree", "--rank", "2", "--delta", "0", "--generators", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("status = failed"));
    assert!(r.stdout.contains("pair=(g1, g2)"));
    assert!(r.stdout.contains("required=5"));
}

#[test]
fn usage_and_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let gens = file(dir.path(), "gens.txt", "aaaaa\nbbbbb\n");
    let junk = file(dir.path(), "junk.txt", "aaaaa\nxyz\n");
    assert_eq!(hypwalk(&["certify", "--generators", s(&gens), "--bogus"]).code, 1);
    assert_eq!(hypwalk(&["frobnicate"]).code, 1);
    let r = hypwalk(&["certify", "--generators", s(&junk)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(hypwalk(&["certify", "--generators", "/nonexistent/gens.txt"]).code, 1);
    let r = hypwalk(&["certify", "--space", "plane", "--generators", s(&gens)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--delta"));
    // Randomized subcommands require a seed.
    assert_eq!(hypwalk(&["walk", "--n", "5"]).code, 1);
    assert_eq!(hypwalk(&["curve", "--n", "4,8"]).code, 1);
    assert_eq!(hypwalk(&["curve", "--n", "8,4", "--seed", "1"]).code, 1);
}

#[test]
fn plane_certify_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = file(
        dir.path(),
        "sanov.txt",
        "# parabolic pair\n1 2 0 1\n1 0 2 1\n",
    );
    let r = hypwalk(&["certify", "--space", "plane", "--delta", "0.7", "--generators", s(&gens)]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("delta_used = 0.7"));
}

#[test]
fn curve_then_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let svg = dir.path().join("curve.svg");
    let r = hypwalk(&[
        "curve", "--space", "tree", "--rank", "2", "--k", "2", "--n", "4,8,16,32,64,100",
        "--trials", "1000", "--seed", "42", "--out", s(&csv),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trials,successes,p_hat,stderr");
    assert_eq!(lines.len(), 7);

    let r = hypwalk(&["plot", "--input", s(&csv), "--out", s(&svg), "--errorbar", "stderr"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let first = fs::read(&svg).unwrap();
    assert!(String::from_utf8_lossy(&first).contains("<polyline"));
    hypwalk(&["plot", "--input", s(&csv), "--out", s(&svg), "--errorbar", "stderr"]);
    assert_eq!(fs::read(&svg).unwrap(), first);

    let r = hypwalk(&["plot", "--input", s(&csv), "--out", s(&svg), "--y", "nope"]);
    assert_eq!(r.code, 1);
}

#[test]
fn plot_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("o.svg");
    let empty = file(dir.path(), "empty.csv", "n,trials,successes,p_hat,stderr\n");
    let r = hypwalk(&["plot", "--input", s(&empty), "--out", s(&svg)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no data rows"));

    let one = file(dir.path(), "one.csv", "n,trials,successes,p_hat,stderr\n4,10,5,0.5,0.158\n");
    assert_eq!(hypwalk(&["plot", "--input", s(&one), "--out", s(&svg)]).code, 0);
    let body = fs::read_to_string(&svg).unwrap();
    assert_eq!(body.matches("<circle").count(), 1);
    assert!(!body.contains("<polyline"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "8"] {
        let path = dir.path().join(format!("c{threads}.csv"));
        let r = hypwalk(&[
            "curve", "--n", "5,10,20", "--trials", "300", "--seed", "7", "--threads", threads,
            "--out", s(&path),
        ]);
        assert_eq!(r.code, 0);
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let tails = |threads: &str| {
        hypwalk(&["tails", "--n", "20,40", "--trials", "200", "--l", "3", "--seed", "1", "--threads", threads])
            .stdout
    };
    assert_eq!(tails("1"), tails("4"));
}

#[test]
fn config_file_supplies_missing_flags_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = file(dir.path(), "run.cfg", "# defaults\nseed = 11\nn = 4,8\ntrials = 50\n");
    let a = hypwalk(&["curve", "--config", s(&cfg)]);
    let b = hypwalk(&["curve", "--n", "4,8", "--trials", "50", "--seed", "11"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let c = hypwalk(&["curve", "--config", s(&cfg), "--trials", "20"]);
    assert!(c.stdout.contains("\n4,20,"));

    let bad = file(dir.path(), "bad.cfg", "mystery = 3\n");
    assert_eq!(hypwalk(&["curve", "--config", s(&bad)]).code, 1);
}

#[test]
fn other_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    let r = hypwalk(&["walk", "--n", "10", "--seed", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 11);
    assert_eq!(r.stdout, hypwalk(&["walk", "--n", "10", "--seed", "3"]).stdout);

    let r = hypwalk(&["drift", "--n", "500", "--trials", "20", "--seed", "3"]);
    assert!(r.stdout.contains("l_hat = "));

    let r = hypwalk(&["delta", "--quadruples", "200", "--seed", "3"]);
    assert!(r.stdout.contains("delta_hat = 0\n"));

    let r = hypwalk(&["shadow-decay", "--n", "20", "--r", "2,4,30", "--shadows", "5", "--samples", "20", "--seed", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("r,shadows,samples,f_hat\n"));
    assert!(r.stdout.contains("\n30,5,20,0\n"));

    let point = file(dir.path(), "point.txt", "a 1.0\n");
    let r = hypwalk(&["tails", "--measure", s(&point), "--n", "12", "--trials", "5", "--l", "3", "--seed", "1"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"));
    assert!(r.stdout.contains("12,pp,5,0,0,0"));
    assert!(r.stdout.contains("12,self_inverse,5,5,1,0"));
}

/// Help snapshots pin the flag grammar. Regenerate with UPDATE_SNAPSHOTS=1.
#[test]
fn help_snapshots() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots");
    let update = std::env::var_os("UPDATE_SNAPSHOTS").is_some();
    let mut names = vec!["hypwalk".to_string()];
    names.extend(SUBCOMMANDS.iter().map(|s| s.to_string()));
    for name in names {
        let text = if name == "hypwalk" {
            help_text(None)
        } else {
            help_text(Some(&name))
        };
        assert!(!text.is_empty());
        let path = dir.join(format!("{name}.help"));
        if update {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&path, &text).unwrap();
        } else {
            let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(text, want, "help for {name} changed");
        }
    }
}

#[test]
fn help_lists_defaults() {
    for name in SUBCOMMANDS {
        let text = help_text(Some(name));
        for flag in ["--threads", "--config"] {
            assert!(text.contains(flag), "{name} help lacks {flag}");
        }
    }
    let curve = help_text(Some("curve"));
    for fragment in ["--trials <TRIALS>", "[default: 1000]", "[default: tree]", "[default: 2]"] {
        assert!(curve.contains(fragment), "curve help lacks {fragment}");
    }
    let r = hypwalk(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("shadow-decay"));
}
