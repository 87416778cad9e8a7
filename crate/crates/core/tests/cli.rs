use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cfml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfml"))
        .args(args)
        .env("CFML_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cfml-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn gen(dir: &TempDir, spec: &str, file: &str) -> String {
    let path = dir.path(file);
    let o = cfml(&["gen", spec, "--out", &path]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn gen_echoes_spec_and_is_deterministic() {
    let a = cfml(&["gen", "staircase:9x7:4"]);
    let b = cfml(&["gen", "staircase:9x7:4"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# staircase:9x7:4\n"));
    let seeded = cfml(&["gen", "tree:20:1", "--seed", "5"]);
    assert!(stdout(&seeded).starts_with("# tree:20:5\n"));
    assert_eq!(cfml(&["gen", "nonsense"]).status.code(), Some(2));
}

#[test]
fn check_accepts_and_rejects() {
    let dir = TempDir::new("check");
    let grid = gen(&dir, "grid:4x4", "grid.txt");
    let ok = cfml(&["check", &grid]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).trim(), "ok n=16 m=24");

    let c6 = dir.path("c6.txt");
    std::fs::write(&c6, "# six-cycle\n6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap();
    let bad = cfml(&["check", &c6]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not median"));

    let cube = gen(&dir, "product:path:2,path:2", "square.txt");
    assert!(cfml(&["check", &cube]).status.success());

    let broken = dir.path("broken.txt");
    std::fs::write(&broken, "3 2\n0 1\n1 x\n").unwrap();
    assert_eq!(cfml(&["check", &broken]).status.code(), Some(2));
}

#[test]
fn query_encode_verify_on_grid() {
    let dir = TempDir::new("verify");
    let grid = gen(&dir, "grid:3x3", "grid.txt");
    for (kind, format) in [
        ("dist", "text"),
        ("dist", "binary"),
        ("rout", "text"),
        ("rout", "binary"),
    ] {
        let labels = dir.path(&format!("{kind}.{format}"));
        let o = cfml(&["encode", &grid, "--kind", kind, "--format", format, "--out", &labels]);
        assert!(o.status.success());
        let v = cfml(&["verify", &grid, &labels]);
        assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
        assert!(stdout(&v).contains("mismatches=0\n"));
        assert!(stdout(&v).contains("status=ok\n"));
        assert_eq!(stdout(&cfml(&["query", &labels, "4", "4"])).trim(), "0");
    }
    assert_eq!(stdout(&cfml(&["query", &dir.path("dist.text"), "0", "8"])).trim(), "4");
    let port: u32 = stdout(&cfml(&["query", &dir.path("rout.binary"), "0", "8"]))
        .trim()
        .parse()
        .unwrap();
    assert!((1..=2).contains(&port));
    assert_eq!(
        cfml(&["query", &dir.path("dist.text"), "0", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_fails_on_foreign_labels() {
    let dir = TempDir::new("foreign");
    let a = gen(&dir, "grid:4x4", "a.txt");
    let b = gen(&dir, "tree:16:3", "b.txt");
    let labels = dir.path("b.labels");
    assert!(cfml(&["encode", &b, "--out", &labels]).status.success());
    assert_eq!(cfml(&["verify", &a, &labels]).status.code(), Some(4));
    let small = gen(&dir, "grid:2x2", "small.txt");
    assert_eq!(cfml(&["verify", &small, &labels]).status.code(), Some(2));
}

#[test]
fn route_prints_shortest_walk() {
    let dir = TempDir::new("route");
    let g = gen(&dir, "product:star:3,path:3", "g.txt");
    let labels = dir.path("r.bin");
    assert!(
        cfml(&["encode", &g, "--kind", "rout", "--format", "binary", "--out", &labels])
            .status
            .success()
    );
    let o = cfml(&["route", &g, &labels, "3", "11"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let field = |k: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{k}=")))
            .unwrap()
            .to_string()
    };
    // Vertex a*3+b: leaf 1 at position 0 to leaf 3 at position 2 is 2 + 2 hops.
    assert_eq!(field("hops"), "4");
    assert_eq!(field("path").split(' ').count(), 5);
    let dist_labels = dir.path("d.txt");
    assert!(cfml(&["encode", &g, "--out", &dist_labels]).status.success());
    assert_eq!(cfml(&["route", &g, &dist_labels, "1", "2"]).status.code(), Some(2));
}

#[test]
fn bench_and_inspect_print_fields() {
    let dir = TempDir::new("bench");
    let g = gen(&dir, "grid:5x5", "g.txt");
    let labels = dir.path("d.bin");
    assert!(cfml(&["encode", &g, "--format", "binary", "--out", &labels])
        .status
        .success());
    let b = stdout(&cfml(&["bench", &labels, "--pairs", "500", "--seed", "3"]));
    for key in ["queries=", "mean_ns=", "median_ns=", "p99_ns="] {
        assert!(b.contains(key), "{b}");
    }
    let i = stdout(&cfml(&["inspect", &g]));
    assert!(i.starts_with("level 0 centroid 12 size 25"), "{i}");
    assert!(i.contains("fiber "));
}

#[test]
fn skip_check_encodes_without_checking() {
    let dir = TempDir::new("skip");
    let g = gen(&dir, "grid:40x30", "big.txt");
    let out = dir.path("l.bin");
    let o = cfml(&["encode", &g, "--skip-check", "--format", "binary", "--out", &out]);
    assert!(o.status.success());
    assert!(Path::new(&out).metadata().unwrap().len() > 0);
    // Above the exhaustive bound the checker refuses instead of guessing.
    let refused = cfml(&["encode", &g, "--out", &out]);
    assert_eq!(refused.status.code(), Some(1));
}
