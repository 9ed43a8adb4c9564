//! CLI integration tests: golden help output and end-to-end runs through the
//! dispatch entry point.

use centroloc::cli::{dispatch, EXIT_OK, EXIT_REFUTED, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["centroloc".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let code = dispatch(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn golden_help_texts() {
    let cases: &[(&[&str], &str)] = &[
        (&["--help"], include_str!("golden/help_main.txt")),
        (&["gen", "--help"], include_str!("golden/help_gen.txt")),
        (&["solve", "--help"], include_str!("golden/help_solve.txt")),
        (
            &["verify", "--help"],
            include_str!("golden/help_verify.txt"),
        ),
        (&["play", "--help"], include_str!("golden/help_play.txt")),
        (
            &["gadget", "--help"],
            include_str!("golden/help_gadget.txt"),
        ),
        (&["plane", "--help"], include_str!("golden/help_plane.txt")),
    ];
    for (args, golden) in cases {
        let (code, out) = run(args);
        assert_eq!(code, EXIT_OK, "{args:?}");
        assert_eq!(&out, golden, "help text drifted for {args:?}");
    }
}

#[test]
fn solve_quantities_end_to_end() {
    for (quantity, family, expect) in [
        ("zeta_star", "path:3", 2u64),
        ("zeta", "cycle:4", 2),
        ("md", "path:5", 1),
        ("cd", "cycle:4", 2),
        ("locating", "complete:3", 2),
        ("pathwidth", "cycle:5", 2),
    ] {
        let (code, out) = run(&["solve", "--family", family, "--quantity", quantity]);
        assert_eq!(code, EXIT_OK, "{quantity} on {family}: {out}");
        let v: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert_eq!(v["value"], expect, "{quantity} on {family}");
        assert!(v["graph_hash"].is_string());
    }
}

#[test]
fn verify_all_strategy_names() {
    let cases: &[(&[&str], i32)] = &[
        (
            &["verify", "--family", "complete:2", "--strategy", "trivial"],
            EXIT_OK,
        ),
        (
            &["verify", "--family", "path:6", "--strategy", "tree"],
            EXIT_OK,
        ),
        (
            &["verify", "--family", "cycle:4", "--strategy", "bipartite"],
            EXIT_OK,
        ),
        (
            &["verify", "--family", "cycle:7", "--strategy", "outerplanar"],
            EXIT_OK,
        ),
        (
            &["verify", "--family", "cycle:5", "--strategy", "pathwidth"],
            EXIT_OK,
        ),
        (
            &[
                "verify",
                "--family",
                "random_maximal_outerplanar:15:3",
                "--strategy",
                "auto",
            ],
            EXIT_OK,
        ),
        (
            &[
                "verify",
                "--strategy",
                "product",
                "--factors",
                "complete:2,complete:2",
            ],
            EXIT_OK,
        ),
    ];
    for (args, expect) in cases {
        let (code, out) = run(args);
        assert_eq!(code, *expect, "{args:?}: {out}");
        if *expect == EXIT_OK {
            assert!(out.contains("VERIFIED"), "{args:?}: {out}");
        }
    }
}

#[test]
fn verify_component_strategy_on_disconnected_graph() {
    let dir = std::env::temp_dir().join("centroloc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two_edges.g");
    std::fs::write(&path, "4 2\n0 1\n2 3\n").unwrap();
    let (code, out) = run(&[
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--strategy",
        "component",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("VERIFIED"));
}

#[test]
fn play_against_trajectory_file() {
    let dir = std::env::temp_dir().join("centroloc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("walk.txt");
    std::fs::write(&path, "2\n2\n1\n").unwrap();
    let spec = format!("@{}", path.display());
    let (code, out) = run(&[
        "play",
        "--family",
        "path:3",
        "--strategy",
        "tree",
        "--trajectory",
        &spec,
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let last: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert!(
        last["outcome"].is_object() || last["outcome"].is_string(),
        "{out}"
    );
}

#[test]
fn illegal_trajectory_is_usage_error() {
    let (code, out) = run(&[
        "play",
        "--family",
        "path:3",
        "--strategy",
        "tree",
        "--trajectory",
        "0,2",
    ]);
    assert_eq!(code, EXIT_USAGE, "{out}");
    assert!(out.contains("not an edge"), "{out}");
}

#[test]
fn refutation_exit_code_and_branch_output() {
    let (code, out) = run(&[
        "verify",
        "--family",
        "path:4",
        "--strategy",
        "tree",
        "--bound",
        "1",
    ]);
    assert_eq!(code, EXIT_REFUTED);
    assert!(out.contains("REFUTED"));
    // One record per branch turn plus the summary.
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn plane_trajectory_file() {
    let dir = std::env::temp_dir().join("centroloc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plane.txt");
    std::fs::write(&path, "5.5 5.5\n6.0 5.5\n6.5 6.0\n").unwrap();
    let (code, out) = run(&["plane", "--trajectory", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let last: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert!(last["error_radius"].as_f64().unwrap() <= 3.0 * 2f64.sqrt() + 0.1);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("centroloc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.jsonl");
    let _ = std::fs::remove_file(&path);
    let (code, out) = run(&[
        "solve",
        "--family",
        "path:3",
        "--quantity",
        "zeta_star",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty(), "output should go to the file");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("zeta_star"));
}

#[test]
fn env_threads_fallback_accepted() {
    std::env::set_var("CENTROLOC_THREADS", "2");
    let (code, _) = run(&["solve", "--family", "path:4", "--quantity", "zeta_star"]);
    std::env::remove_var("CENTROLOC_THREADS");
    assert_eq!(code, EXIT_OK);
}
