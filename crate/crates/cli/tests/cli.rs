use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcover::broken::TaggedQDecomposition;
use tcover::format::write_qdecomp;
use tcover::ring::RingTag;
use tcover_cli::report::*;
use tempfile::TempDir;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn tcover(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tcover")).args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_instance_text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(2..=8);
    let m = rng.random_range(1..=2 * n);
    let t = rng.random_range(1..=n);
    let mut text = format!("setcover {n} {m} {t}\n");
    for _ in 0..m {
        let mut elems: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.35)).take(3).collect();
        if elems.is_empty() {
            elems.push(rng.random_range(0..n));
        }
        let line: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
        text.push_str(&format!("{} {}\n", elems.len(), line.join(" ")));
    }
    text
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let yes = write(dir.path(), "yes.txt", "setcover 3 1 1\n3 0 1 2\n");
    let r = tcover(&["solve", s(&yes)]);
    assert_eq!((r.stdout.as_str(), r.code), ("YES\n", 0));
    let no = write(dir.path(), "no.txt", "setcover 3 2 3\n1 0\n1 1\n");
    let r = tcover(&["solve", s(&no)]);
    assert_eq!((r.stdout.as_str(), r.code), ("NO\n", 1));
    let bad = write(dir.path(), "bad.txt", "setcover 8 1 1\n1 9\n");
    let r = tcover(&["solve", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("element 9"));
    assert_eq!(tcover(&["solve", "/nonexistent/instance.txt"]).code, 2);
}

#[test]
fn oracle_never_disagrees() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for i in 0..100 {
        let p = write(dir.path(), &format!("i{i}.txt"), &random_instance_text(&mut rng));
        let r = tcover(&["solve", s(&p), "--oracle", "--json"]);
        assert_ne!(r.code, 3, "{}", r.stderr);
        assert!(r.code == 0 || r.code == 1);
        let rep: SolveReport = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(rep.oracle.as_deref(), Some(rep.answer.as_str()));
    }
}

#[test]
fn json_reports_match_schema() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.txt", "setcover 6 3 3\n2 0 1\n2 2 3\n2 4 5\n");
    let r = tcover(&["solve", s(&inst), "--json", "--backend", "broken", "--q", "2", "--repeats", "16"]);
    let rep: SolveReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rep.backend, "broken");
    assert_eq!(rep.broken.as_ref().unwrap().q, 2);

    let f = write(dir.path(), "f.txt", "family 3 3\n1 0\n1 1\n1 2\n");
    let g = write(dir.path(), "g.txt", "family 3 2\n1 1\n2 1 2\n");
    let h = write(dir.path(), "h.txt", "family 3 2\n1 2\n0\n");
    let r = tcover(&["partition3", s(&f), s(&g), s(&h), "--json", "--oracle"]);
    let rep: Partition3Report = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!((rep.count.as_deref(), rep.oracle), (Some("2"), Some(2)));
    let r = tcover(&["partition3", s(&f), s(&g), s(&h), "--ring", "gf2"]);
    assert_eq!(r.stdout, "count 0\n");

    let u = write(dir.path(), "u.txt", "vector 2 gf3\n1 2 0 1\n");
    let r = tcover(&["convolve", s(&u), s(&u), "--json", "--oracle"]);
    let rep: ConvolveReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rep.oracle, Some(true));
    assert_eq!(rep.entries.len(), 4);

    let r = tcover(&["verify", "p-border", "--json"]);
    let rep: VerifyReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(rep.ok && rep.checks.len() == 5);

    let r = tcover(&["analyze", "--json"]);
    let rep: AnalyzeReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(rep.below_two && rep.margin_exceeds_delta && rep.holds_at_epsilon_kappa);

    let r = tcover(&["bench", "--n-min", "3", "--n-max", "5", "--json"]);
    let rep: BenchReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(rep.rows.iter().all(|row| row.agree));
    assert!(serde_json::from_str::<SolveReport>(r#"{"answer":"YES","extra":1}"#).is_err());
}

#[test]
fn verify_detects_corruption() {
    let r = tcover(&["verify", "p-border"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("OK\n"));
    let dir = TempDir::new().unwrap();
    let corrupt = tcover_cli::P_BORDER.replace("\n1 -1\n", "\n1 1\n");
    let p = write(dir.path(), "corrupt.txt", &corrupt);
    let r = tcover(&["verify", s(&p)]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.ends_with("FAIL\n"));
    let r = tcover(&["verify", "q"]);
    assert_eq!(r.code, 0);
}

#[test]
fn analyze_reports_base_below_two() {
    let r = tcover(&["analyze", "--sigma", "1/1000", "--tau", "1/1000", "--rho", "1/1000"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("max base below 2: true"));
    assert!(r.stdout.contains("significant digits"));
    assert_eq!(tcover(&["analyze", "--sigma", "1/12"]).code, 2);
}

#[test]
fn decomposition_files() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.txt", "setcover 6 3 3\n2 0 1\n2 2 3\n2 4 5\n");
    let dec = TaggedQDecomposition::trivial(RingTag::Gf3, 1).unwrap();
    let good = write(dir.path(), "q.txt", &write_qdecomp(&dec));
    let base = ["solve", s(&inst), "--backend", "broken", "--q", "1", "--repeats", "20"];
    let r = tcover(&[&base[..], &["--decomp", s(&good)]].concat());
    assert_eq!((r.stdout.as_str(), r.code), ("YES\n", 0));
    // Zero out the first row of A_Q.
    let text = write_qdecomp(&dec);
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[1] = lines[1].split(' ').map(|_| "0").collect::<Vec<_>>().join(" ");
    let bad = write(dir.path(), "bad.txt", &(lines.join("\n") + "\n"));
    let r = tcover(&[&base[..], &["--decomp", s(&bad)]].concat());
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("does not reproduce"));
    let r = tcover(&[&base[..], &["--decomp", s(&bad), "--skip-verify"]].concat());
    assert!(r.code == 0 || r.code == 1);
    let r = tcover(&[&base[..], &["--decomp", s(&good), "--ring", "gf2"]].concat());
    assert_eq!(r.code, 2);
}

#[test]
fn output_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.txt", "setcover 9 4 3\n3 0 1 2\n3 3 4 5\n3 6 7 8\n2 0 8\n");
    let args = ["solve", s(&inst), "--backend", "broken", "--q", "3", "--repeats", "40", "--seed", "9", "--json"];
    let one = tcover(&[&args[..], &["--threads", "1"]].concat());
    let eight = tcover(&[&args[..], &["--threads", "8"]].concat());
    assert_eq!(one.stdout, eight.stdout);
    assert_eq!(one.code, eight.code);
}
