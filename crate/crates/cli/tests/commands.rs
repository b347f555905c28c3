use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quick_xml::events::Event;
use quick_xml::Reader;

fn stabmap(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabmap"))
        .current_dir(cwd)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(cwd: &Path, args: &[&str]) -> String {
    let o = stabmap(cwd, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn data_ids(svg: &str) -> Vec<String> {
    let mut r = Reader::from_str(svg);
    let mut ids = Vec::new();
    loop {
        match r.read_event().expect("well-formed SVG") {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) => {
                for a in e.attributes() {
                    let a = a.unwrap();
                    if a.key.as_ref() == b"data-id" {
                        ids.push(String::from_utf8(a.value.to_vec()).unwrap());
                    }
                }
            }
            _ => {}
        }
    }
    ids
}

const LEFT: &str = "sr 6\n0: 1 2 3 4 5\n1: 2 0 5 3 4\n2: 0 1 4 5 3\n3: 4 5 1 0 2\n4: 5 3 0 2 1\n5: 3 4 2 1 0\n";
const ID4: &str = "sr 4\n0: 1 2 3\n1: 0 2 3\n2: 0 1 3\n3: 0 1 2\n";

#[test]
fn generate_single_culture_and_reject_bad_params() {
    let t = tempfile::tempdir().unwrap();
    ok(t.path(), &["generate", "--culture", "euclidean", "--param", "d=1", "--agents", "50", "--count", "20", "--seed", "1", "--out", "e"]);
    assert_eq!(fs::read_dir(t.path().join("e/instances")).unwrap().count(), 20);
    let o = stabmap(t.path(), &["generate", "--culture", "mallows", "--param", "norm_phi=1.5", "--out", "m"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("norm_phi"));
    assert!(!t.path().join("m").exists());
    let o = stabmap(t.path(), &["generate", "--culture", "nonsense", "--out", "n"]);
    assert!(!o.status.success());
}

#[test]
fn anchors_only_chain() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path();
    ok(p, &["generate", "--culture", "ic", "--count", "0", "--agents", "10", "--out", "a"]);
    ok(p, &["dist", "--dataset", "a", "--out", "d.csv"]);
    let d = fs::read_to_string(p.join("d.csv")).unwrap();
    assert!(d.starts_with("id,ID,MA,MD,CH\n"));
    // MA to MD is 4(n-1)n² with n = 5.
    assert!(d.contains("\nMA,") && d.lines().nth(2).unwrap().split(',').nth(3) == Some("400"));

    ok(p, &["embed", "--dist", "d.csv", "--seed", "1", "--out", "e1.csv"]);
    ok(p, &["embed", "--dist", "d.csv", "--seed", "1", "--out", "e2.csv"]);
    assert_eq!(fs::read(p.join("e1.csv")).unwrap(), fs::read(p.join("e2.csv")).unwrap());

    ok(p, &["stats", "--dataset", "a", "--features", "mutuality", "--out", "s.csv"]);
    let s = fs::read_to_string(p.join("s.csv")).unwrap();
    assert!(s.contains("\nMA,MA,0\n"));

    ok(p, &["render", "--emb", "e1.csv", "--out", "map.svg"]);
    let svg = fs::read_to_string(p.join("map.svg")).unwrap();
    assert_eq!(data_ids(&svg), ["ID", "MA", "MD", "CH"]);
    assert_eq!(svg.matches("<rect data-id=").count(), 4);

    ok(p, &["render", "--emb", "e1.csv", "--stats", "s.csv", "--color", "mutuality", "--out", "m.svg"]);
    let o = stabmap(p, &["render", "--emb", "e1.csv", "--stats", "s.csv", "--color", "nope", "--out", "x.svg"]);
    assert!(!o.status.success());
    assert!(!p.join("x.svg").exists());
}

#[test]
fn solve_records() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path();
    fs::write(p.join("left.txt"), LEFT).unwrap();
    fs::write(p.join("id4.txt"), ID4).unwrap();
    let r = ok(p, &["solve", "--instance", "left.txt", "--task", "irving"]);
    assert!(r.contains("outcome: infeasible\n") && r.contains("no stable matching"));
    let r = ok(p, &["solve", "--instance", "id4.txt", "--task", "egal"]);
    assert!(r.contains("value: 8\n") && r.contains("matching: 0-1 2-3\n"));
    let a = ok(p, &["solve", "--instance", "left.txt", "--task", "avg-bp", "--samples", "100", "--seed", "3"]);
    let b = ok(p, &["solve", "--instance", "left.txt", "--task", "avg-bp", "--samples", "100", "--seed", "3"]);
    assert_eq!(a, b);
    let r = ok(p, &["solve", "--instance", "left.txt", "--task", "egal"]);
    assert!(r.contains("outcome: infeasible"));
    let o = stabmap(p, &["solve", "--instance", "id4.txt", "--task", "gs"]);
    assert!(!o.status.success());
    let o = stabmap(p, &["solve", "--instance", "missing.txt", "--task", "irving"]);
    assert!(!o.status.success());
}

#[test]
fn small_pipeline_is_reproducible() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path();
    let args = |out: &'static str| ["pipeline", "--culture", "mallows", "--param", "norm_phi=0.5", "--count", "8", "--agents", "6", "--seed", "3", "--iters", "300", "--out", out];
    ok(p, &args("r1"));
    ok(p, &args("r2"));
    for f in ["dist.csv", "emb.csv", "stats.csv", "cultures.csv", "distortion.csv", "summary.txt", "ds/manifest.csv"] {
        assert_eq!(fs::read(p.join("r1").join(f)).unwrap(), fs::read(p.join("r2").join(f)).unwrap(), "{f}");
    }
    let svg = fs::read_to_string(p.join("r1/map.svg")).unwrap();
    let mut ids = data_ids(&svg);
    ids.sort();
    let mut want: Vec<String> = (0..8).map(|i| format!("i{i:03}")).collect();
    want.extend(["CH", "ID", "MA", "MD"].map(String::from));
    want.sort();
    assert_eq!(ids, want);
    // Re-running into the same directory replaces it.
    ok(p, &args("r1"));
    let o = stabmap(p, &["pipeline", "--standard", "--agents", "10", "--metric", "spear_exact", "--out", "sp"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("spear_exact"));
    assert!(!p.join("sp").exists());
}
