use std::path::Path;
use std::process::{Command, Output};

fn encap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_encap"))
        .args(args)
        .env_remove("ENCAP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = encap(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn manifest(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

/// Column `name` of the first data row.
fn field(text: &str, name: &str) -> String {
    let rows = csv_rows(text);
    let i = rows[0].iter().position(|h| h == name).expect("column");
    rows[1][i].clone()
}

#[test]
fn laws_output() {
    let out = stdout_ok(&["laws", "--nodes", "20", "--violations", "1", "--format", "csv"]);
    assert_eq!(field(&out, "r_min"), "4.4721");
    assert_eq!(field(&out, "r_recommended"), "4");
    assert_eq!(field(&out, "psc_recommended"), "140");
    assert_eq!(field(&out, "s_max"), "380");

    let out = stdout_ok(&["laws", "--nodes", "1", "--violations", "1", "--format", "csv"]);
    assert_eq!(field(&out, "r_min"), "1");
    assert_eq!(field(&out, "s_min"), "0");

    let bad = encap(&["laws", "--nodes", "20", "--violations", "0"]);
    assert!(!bad.status.success());
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("undefined"));
}

#[test]
fn analyze_manifests() {
    let two_regions = manifest("context flat\nregion a private=2 public=1\nregion b private=0 public=1\n");
    let out = stdout_ok(&["analyze", "--input", two_regions.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(field(&out, "psc"), "10");
    assert_eq!(field(&out, "ihv_percent"), "50");

    let anomalous = manifest("context flat\nregion k1 private=33 public=12\nregion k2 private=5 public=50\n");
    let out = stdout_ok(&["analyze", "--input", anomalous.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(field(&out, "psc"), "7860");
    assert_eq!(field(&out, "amc"), "yes");

    let empty = manifest("context flat\n");
    let out = stdout_ok(&["analyze", "--input", empty.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(field(&out, "nodes"), "0");
    assert_eq!(field(&out, "c_e"), "undefined");

    let hier = manifest("context hier\nsubsystem root parent=- private=0 public=1\nsubsystem c1 parent=root private=0 public=1\n");
    let out = stdout_ok(&["analyze", "--input", hier.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(field(&out, "context"), "hier");
    assert_eq!(field(&out, "psc"), "1");
}

#[test]
fn analyze_errors() {
    let broken = manifest("context flat\nregion a private=1 public=one\n");
    let out = encap(&["analyze", "--input", broken.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = encap(&["analyze", "--input", "/definitely/not/here.txt"]);
    assert!(!missing.status.success());

    let both = encap(&["analyze", "--input", "a", "--scan-java", "b"]);
    assert!(!both.status.success());
}

#[test]
fn analyze_scan_per_region() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/java");
    let out = stdout_ok(&["analyze", "--scan-java", dir.to_str().unwrap(), "--per-region", "--format", "csv"]);
    assert_eq!(
        out,
        "region,private,public\n(default),0,1\ncom.rail,2,1\ncom.rail.signals,1,1\norg.shop,0,2\n"
    );
    let out = stdout_ok(&["analyze", "--scan-java", dir.to_str().unwrap(), "--graph", "second", "--format", "csv"]);
    assert_eq!(field(&out, "nodes"), "12");
}

#[test]
fn figure_tables() {
    assert_eq!(
        stdout_ok(&["figure", "15"]),
        "r,psc\n1,132\n2,72\n3,60\n4,60\n6,72\n12,132\n"
    );
    let first_law = csv_rows(&stdout_ok(&["figure", "3"]));
    assert_eq!(first_law.len(), 101);
    assert_eq!(first_law[100], vec!["100", "9900"]);

    let by_violation = csv_rows(&stdout_ok(&["figure", "18"]));
    let mut minima = [f64::MAX; 5];
    for row in &by_violation[1..] {
        let p: usize = row[0].parse().unwrap();
        minima[p] = minima[p].min(row[2].parse().unwrap());
    }
    assert!(minima[1] < minima[2] && minima[2] < minima[3] && minima[3] < minima[4]);

    let bad = encap(&["figure", "4"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown figure"));
}

#[test]
fn growth_and_sweeps() {
    let out = stdout_ok(&["growth", "--context", "flat", "--max", "100", "--format", "csv"]);
    assert!(out.ends_with("100,1800\n"));
    let out = stdout_ok(&["sweep", "fixed", "--nodes", "4", "--format", "csv"]);
    assert_eq!(out, "index,split,psc\n0,4-0,12\n1,3-1,10\n2,2-2,8\n");
}

fn seeded_commands() -> Vec<Vec<&'static str>> {
    vec![
        vec!["random", "--count", "300", "--seed", "7", "--format", "csv"],
        vec!["evolve", "--systems", "4", "--steps", "300", "--seed", "7", "--format", "csv"],
        vec!["amc", "--regions", "4", "--samples", "20000", "--seed", "7", "--format", "csv"],
        vec!["figure", "19", "--seed", "7"],
        vec!["figure", "22", "--seed", "7"],
    ]
}

#[test]
fn seeded_output_is_byte_identical_across_runs_and_jobs() {
    for args in seeded_commands() {
        let base = encap(&args);
        assert!(base.status.success(), "{args:?}");
        for jobs in ["1", "3"] {
            let mut with_jobs = args.clone();
            with_jobs.extend(["--jobs", jobs]);
            assert_eq!(encap(&with_jobs).stdout, base.stdout, "{with_jobs:?}");
        }
        assert_eq!(encap(&args).stdout, base.stdout, "{args:?}");
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let flag = encap(&["random", "--count", "20", "--seed", "99", "--format", "csv"]);
    let env = Command::new(env!("CARGO_BIN_EXE_encap"))
        .args(["random", "--count", "20", "--format", "csv"])
        .env("ENCAP_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    let other = encap(&["random", "--count", "20", "--seed", "98", "--format", "csv"]);
    assert_ne!(flag.stdout, other.stdout);
}
