use std::path::Path;
use std::process::{Command, Stdio};

use sofic_cli::{run_in, Outcome, EXIT_INPUT, EXIT_LIMIT, EXIT_OK};
use tempfile::TempDir;
use toml::{Table, Value};

const SQUARE_ROOT: &str = "# x^2 = a\nconstants 1; variables 1;\nx1 x1 = a1\n";

fn run(dir: &Path, args: &[&str]) -> Outcome {
    let mut full = vec!["sofic-wb"];
    full.extend_from_slice(args);
    run_in(full, dir)
}

fn report(o: &Outcome) -> Table {
    toml::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}\n{}", o.stdout))
}

fn result(o: &Outcome) -> Table {
    report(o)["result"].as_table().unwrap().clone()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("sq.eqn"), SQUARE_ROOT).unwrap();
    dir
}

#[test]
fn hamming_length_of_a_three_cycle_in_a5() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &["length", "--group", "A5", "--perm", "(1 2 3)"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    assert_eq!(result(&o)["hamming"].as_str(), Some("3/5"));
}

#[test]
fn square_roots_fail_in_s3_at_a_transposition() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &["eq-solve", "--group", "S3", "--system", "sq.eqn"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    let r = result(&o);
    assert_eq!(r["verdict"].as_str(), Some("unsolvable"));
    // least failing constant in the canonical order
    assert_eq!(
        r["counterexample"].as_array().unwrap()[0].as_str(),
        Some("(2 3)")
    );
}

#[test]
fn klein_subgroup_separates_three_cycles_in_a4() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &[
            "separate",
            "--group",
            "A4",
            "--X",
            "(1 2)(3 4)",
            "--Y",
            "(1 2 3)",
            "--n",
            "8",
        ],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    assert_eq!(result(&o)["verdict"].as_str(), Some("separated"));
}

#[test]
fn diagnostics_carry_line_and_column() {
    let dir = workspace();
    let o = run(dir.path(), &["length", "--group", "A5", "--perm", "(1 2"]);
    assert_eq!(o.exit_code, EXIT_INPUT);
    assert!(o.stderr.contains("--perm:1:5"), "{}", o.stderr);
    assert_eq!(report(&o)["error"]["kind"].as_str(), Some("parse-error"));

    std::fs::write(
        dir.path().join("bad.eqn"),
        "constants 1; variables 1;\nx1 y2\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &["eq-solve", "--group", "S3", "--system", "bad.eqn"],
    );
    assert_eq!(o.exit_code, EXIT_INPUT);
    assert!(o.stderr.contains("bad.eqn:2:4"), "{}", o.stderr);

    let o = run(dir.path(), &["length", "--group", "B7", "--perm", "()"]);
    assert_eq!(o.exit_code, EXIT_INPUT);
    assert_eq!(report(&o)["error"]["kind"].as_str(), Some("unknown-group"));
}

#[test]
fn elements_outside_the_group_are_rejected() {
    let dir = workspace();
    let o = run(dir.path(), &["length", "--group", "A5", "--perm", "(1 2)"]);
    assert_eq!(o.exit_code, EXIT_INPUT);
}

#[test]
fn limits_exit_with_two_and_record_the_budget() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &[
            "eq-solve", "--group", "S4", "--system", "sq.eqn", "--budget", "10",
        ],
    );
    assert_eq!(o.exit_code, EXIT_LIMIT);
    let r = report(&o);
    assert_eq!(r["result"]["verdict"].as_str(), Some("unknown"));
    assert_eq!(r["meta"]["budget"].as_integer(), Some(10));

    let o = run(
        dir.path(),
        &[
            "consequences",
            "--group",
            "S6",
            "--X",
            "(1 2)",
            "--n",
            "2",
            "--cap",
            "100",
        ],
    );
    assert_eq!(o.exit_code, EXIT_LIMIT);
    assert_eq!(report(&o)["error"]["kind"].as_str(), Some("cap-exceeded"));
}

#[test]
fn process_exit_codes_match() {
    let dir = workspace();
    let bin = env!("CARGO_BIN_EXE_sofic-wb");
    let code = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(
        code(&["length", "--group", "A5", "--perm", "(1 2 3)"]),
        Some(0)
    );
    assert_eq!(
        code(&["length", "--group", "A5", "--perm", "(1 2"]),
        Some(1)
    );
    assert_eq!(
        code(&["eq-solve", "--group", "S4", "--system", "sq.eqn", "--budget", "1"]),
        Some(2)
    );
    assert_eq!(code(&["no-such-command"]), Some(1));
}

#[test]
fn reports_reverify() {
    let dir = workspace();
    for args in [
        &[
            "eq-solve", "--group", "S3", "--system", "sq.eqn", "--out", "r.toml",
        ][..],
        &["covering-constant", "--group", "A5", "--out", "r.toml"][..],
        &[
            "axioms-check",
            "--group",
            "S4",
            "--length",
            "cayley",
            "--X",
            "(1 2)",
            "--n",
            "3",
            "--out",
            "r.toml",
        ][..],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.exit_code, EXIT_OK);
        assert!(o.stdout.is_empty());
        let v = run(dir.path(), &["verify-report", "--report", "r.toml"]);
        assert_eq!(v.exit_code, EXIT_OK, "{}", v.stdout);
        assert_eq!(result(&v)["reproduced"].as_bool(), Some(true));
    }
}

#[test]
fn tampered_reports_do_not_reverify() {
    let dir = workspace();
    run(
        dir.path(),
        &[
            "eq-solve", "--group", "S3", "--system", "sq.eqn", "--out", "r.toml",
        ],
    );
    let path = dir.path().join("r.toml");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("\"unsolvable\"", "\"solvable\"")).unwrap();
    let v = run(dir.path(), &["verify-report", "--report", "r.toml"]);
    assert_eq!(v.exit_code, EXIT_INPUT);
    let r = result(&v);
    assert_eq!(r["reproduced"].as_bool(), Some(false));
    assert_eq!(
        r["differing_sections"].as_array().unwrap(),
        &vec![Value::from("result")]
    );
}

#[test]
fn emitted_certificates_check() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("z3.pres"),
        "generators: a\nrelator: a^3\nY: a\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &[
            "approx-search",
            "--presentation",
            "z3.pres",
            "--n",
            "2",
            "--groups",
            "Z2,Z3",
            "--out",
            "s.toml",
        ],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    let c = run(dir.path(), &["approx-check", "--cert", "s.toml"]);
    assert_eq!(c.exit_code, EXIT_OK);
    assert_eq!(result(&c)["holds"].as_bool(), Some(true));

    let o = run(
        dir.path(),
        &[
            "sofic-search",
            "--presentation",
            "z3.pres",
            "--eps",
            "1/2",
            "--groups",
            "A4",
            "--out",
            "f.toml",
        ],
    );
    assert_eq!(o.exit_code, EXIT_OK, "{}", o.stderr);
    let c = run(dir.path(), &["approx-check", "--cert", "f.toml"]);
    assert_eq!(c.exit_code, EXIT_OK, "{}", c.stdout);
    assert_eq!(result(&c)["holds"].as_bool(), Some(true));
}

#[test]
fn jobs_and_out_do_not_change_report_bodies() {
    let dir = workspace();
    let args = ["covering-constant", "--group", "A6"];
    let a = run(dir.path(), &args);
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "8"]);
    let b = run(dir.path(), &with_jobs);
    assert_eq!(a.stdout, b.stdout);
    with_jobs.extend(["--out", "c.toml"]);
    run(dir.path(), &with_jobs);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("c.toml")).unwrap(),
        a.stdout
    );
}

#[test]
fn catalog_files_supply_groups() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("small.catalog"),
        "# three groups\nC3 cyclic 3\nK generated 4 (1 2)(3 4); (1 3)(2 4)\nSym3 symmetric 3\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &["eq-sys", "--system", "sq.eqn", "--catalog", "small.catalog"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    let r = result(&o);
    assert_eq!(r["membership"].as_str(), Some("not-member"));
    assert_eq!(r["first_failure"].as_str(), Some("K"));

    std::fs::write(
        dir.path().join("broken.catalog"),
        "C3 cyclic 3\nK generated 3 (1 4)\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &[
            "eq-sys",
            "--system",
            "sq.eqn",
            "--catalog",
            "broken.catalog",
        ],
    );
    assert_eq!(o.exit_code, EXIT_INPUT);
    assert!(o.stderr.contains("broken.catalog:2:"), "{}", o.stderr);
}

#[test]
fn embeddings_are_checked() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &[
            "eq-over",
            "--group",
            "S3",
            "--system",
            "sq.eqn",
            "--embed",
            "S6:diagonal",
        ],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    let r = result(&o);
    assert_eq!(r["verdict"].as_str(), Some("solvable"));
    assert_eq!(r["via"].as_str(), Some("S6"));

    // generator images that do not define a homomorphism
    let o = run(
        dir.path(),
        &[
            "eq-over",
            "--group",
            "S3",
            "--system",
            "sq.eqn",
            "--embed",
            "S4:(1 2);(1 2 3 4)",
        ],
    );
    assert_eq!(o.exit_code, EXIT_INPUT);

    // no overgroup helps: unknown, never unsolvable
    let o = run(
        dir.path(),
        &["eq-over", "--group", "S3", "--system", "sq.eqn"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    assert_eq!(result(&o)["verdict"].as_str(), Some("unknown"));
}

#[test]
fn manifests_replay_deterministically() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("m.toml"),
        r#"version = "0.1.0"

[[run]]
name = "sq"
args = ["eq-solve", "--group", "S3", "--system", "sq.eqn"]
expect_exit = 0

[[run]]
name = "tight"
args = ["eq-solve", "--group", "S4", "--system", "sq.eqn", "--budget", "10"]
expect_exit = 2
"#,
    )
    .unwrap();
    let a = run(
        dir.path(),
        &["replay", "--manifest", "m.toml", "--out", "a"],
    );
    let b = run(
        dir.path(),
        &[
            "replay",
            "--manifest",
            "m.toml",
            "--out",
            "b",
            "--jobs",
            "4",
        ],
    );
    assert_eq!(a.exit_code, EXIT_LIMIT);
    assert_eq!(a.stdout, b.stdout);
    for f in ["sq.toml", "tight.toml", "index.toml"] {
        let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
        assert_eq!(
            x,
            std::fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
    let index = result(&a);
    let runs = index["reports"].as_array().unwrap();
    assert!(runs
        .iter()
        .all(|r| r["matches_expectation"].as_bool() == Some(true)));
}

#[test]
fn empty_manifest_gives_empty_report_set() {
    let dir = workspace();
    std::fs::write(dir.path().join("m.toml"), "version = \"0.1.0\"\n").unwrap();
    let o = run(
        dir.path(),
        &["replay", "--manifest", "m.toml", "--out", "out"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    assert_eq!(result(&o)["runs"].as_integer(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path().join("out")).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn version_mismatch_aborts_replay() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("m.toml"),
        "version = \"9.9.9\"\n[[run]]\nname = \"a\"\nargs = [\"length\", \"--group\", \"A5\", \"--perm\", \"()\"]\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &["replay", "--manifest", "m.toml", "--out", "out"],
    );
    assert_eq!(o.exit_code, EXIT_INPUT);
    let r = report(&o);
    assert_eq!(r["result"]["aborted"].as_bool(), Some(true));
    assert!(!dir.path().join("out").join("a.toml").exists());
}

#[test]
fn unmet_expectations_fail_the_replay() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("m.toml"),
        "version = \"0.1.0\"\n[[run]]\nname = \"a\"\nargs = [\"length\", \"--group\", \"A5\", \"--perm\", \"()\"]\nexpect_exit = 2\n",
    )
    .unwrap();
    let o = run(dir.path(), &["replay", "--manifest", "m.toml"]);
    assert_eq!(o.exit_code, EXIT_INPUT);
}

#[test]
fn csv_export_matches_rows() {
    let dir = workspace();
    let o = run(
        dir.path(),
        &["covering-constant", "--group", "A5", "--csv", "a5.csv"],
    );
    assert_eq!(o.exit_code, EXIT_OK);
    let rows = result(&o)["rows"].as_array().unwrap().len();
    let mut reader = csv::Reader::from_path(dir.path().join("a5.csv")).unwrap();
    assert_eq!(reader.records().count(), rows);
}
