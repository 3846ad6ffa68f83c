use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn ore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ore"))
        .args(args)
        .env_remove("ORE_PARALLELISM")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_figure_1_passes() {
    let o = ore(&["validate", path(&fixtures().join("figure1.nt"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("passed"));
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.nt");
    let text = std::fs::read_to_string(fixtures().join("figure1.nt")).unwrap();
    let kept: String = text
        .lines()
        .filter(|l| !l.contains("/terms/modified"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&broken, kept).unwrap();
    let o = ore(&["validate", path(&broken)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("E-MODIFIED-MISSING"));

    let o = ore(&["validate", "--json", path(&broken)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_start().starts_with('{'));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(
        ore(&["validate", "/nonexistent/map.nt"]).status.code(),
        Some(2)
    );
    assert_eq!(ore(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ore(&[]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.nt");
    std::fs::write(&junk, "not n-triples\n").unwrap();
    assert_eq!(ore(&["validate", path(&junk)]).status.code(), Some(2));
}

#[test]
fn convert_reaches_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let mut input = fixtures().join("figure2.atom");
    let mut outputs = Vec::new();
    for (i, to) in ["ntriples", "atom", "ntriples", "atom"]
        .into_iter()
        .enumerate()
    {
        let out = dir
            .path()
            .join(format!("{i}.{}", if to == "atom" { "atom" } else { "nt" }));
        let o = ore(&["convert", path(&input), "--to", to, "--out", path(&out)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stderr.is_empty());
        outputs.push(std::fs::read(&out).unwrap());
        input = out;
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
    assert_eq!(
        outputs[0],
        std::fs::read(fixtures().join("figure2.nt")).unwrap()
    );
}

#[test]
fn convert_lists_dropped_triples() {
    let o = ore(&[
        "convert",
        path(&fixtures().join("figure1.nt")),
        "--to",
        "atom",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.starts_with(b"<?xml"));
    // Figure 1 carries nothing Atom cannot hold.
    assert!(
        o.stderr.is_empty(),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.nt");
    let mut text = std::fs::read_to_string(fixtures().join("figure2.nt")).unwrap();
    text.push_str("<http://example.org/x> <http://www.w3.org/2002/07/owl#sameAs> <http://arxiv.org/pdf/astro-ph/0601007v2> .\n");
    std::fs::write(&extra, text).unwrap();
    let o = ore(&["convert", path(&extra), "--to", "atom"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("warning: 1 triples"));
    assert!(err.contains("<http://example.org/x>"));
}

#[test]
fn roundtrip_report() {
    let o = ore(&[
        "roundtrip",
        path(&fixtures().join("figure1.nt")),
        "--codec",
        "atom",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("stable\tyes"));
    assert!(text.contains("dropped\t0"));
}

#[test]
fn classify_finds_the_hub() {
    let routes = fixtures().join("site/routes.tsv");
    let o = ore(&[
        "classify",
        "http://example.org/rem/article-1",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Indirect"));
    assert_eq!(lines.next(), Some("hub\thttp://example.org/article-1"));
    assert!(text
        .contains("http://example.org/article-1\tresourcemap\thttp://example.org/rem/article-1"));
    assert!(text.contains("http://example.org/article-1.pdf\tup\thttp://example.org/article-1"));
}

#[test]
fn discover_prints_tab_separated_hits() {
    let routes = fixtures().join("discovery/routes.tsv");
    let o = ore(&[
        "discover",
        "http://repo.example.com/start/03-html-two",
        "--confirm",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "html-link\thttp://repo.example.com/rem/a\ttrue\nhtml-link\thttp://repo.example.com/rem/b\ttrue\n"
    );
    let o = ore(&[
        "discover",
        "http://repo.example.com/start/06-html-decoy",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(
        stdout(&o),
        "html-link\thttp://repo.example.com/page\tfalse\n"
    );

    let o = ore(&[
        "discover",
        "http://repo.example.com/start/16-feed-entryid-is-rem",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("E-ENTRYID-IS-REM"));

    let o = ore(&[
        "discover",
        "http://repo.example.com/missing",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn snapshot_output_is_stable() {
    let routes = fixtures().join("site/routes.tsv");
    let dir = tempfile::tempdir().unwrap();
    let mut manifests = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = ore(&[
            "snapshot",
            "http://example.org/rem/article-1",
            "--out",
            path(&out),
            "--at",
            "2008-03-02T09:00:00Z",
            "--fixture",
            path(&routes),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let manifest = out.join("manifest.txt");
        assert_eq!(stdout(&o).trim_end(), path(&manifest));
        manifests.push(std::fs::read_to_string(manifest).unwrap());
    }
    assert_eq!(manifests[0], manifests[1]);
    assert!(manifests[0].starts_with(
        "# resourcemap\thttp://example.org/rem/article-1\n# retrieved\t2008-03-02T09:00:00Z\n"
    ));
    assert_eq!(manifests[0].lines().count(), 6);
}

#[test]
fn graph_parents_and_lineage() {
    let routes = fixtures().join("arxiv/routes.tsv");
    let o = ore(&[
        "graph",
        "http://arxiv.org/rem/0801.2244v1",
        "--parents",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "parent\thttp://arxiv.org/rem/0801.2244#aggregation\nalso-in\thttp://arxiv.org/rem/0801.2244\n"
    );
    let o = ore(&[
        "graph",
        "http://arxiv.org/rem/0801.2244v1",
        "--lineage",
        "http://arxiv.org/abs/0801.2244v1",
        "--mode",
        "degraded",
        "--fixture",
        path(&routes),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parallelism_comes_from_the_environment() {
    let routes = fixtures().join("site/routes.tsv");
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_ore"))
            .args([
                "classify",
                "http://example.org/rem/article-1",
                "--fixture",
                path(&routes),
            ])
            .env("ORE_PARALLELISM", value)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, run("8").stdout);
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn in_process_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let file = fixtures().join("figure2.atom");
    let code = ore_cli::run(["ore", "validate", path(&file)], &mut out, &mut err);
    assert_eq!(code, ore_cli::EXIT_OK);
    assert_eq!(out, b"passed\n");
}
