use std::path::Path;

use menergy::cli::{run_cli, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    run_cli(std::iter::once("menergy").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_writes_a_verifiable_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig1.moore");
    let (code, text) = run(&["solve", &fixture("fig1.game"), "--out", path_str(&out)]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("result: won at cap 7"), "{text}");
    assert!(text.contains("cap=7\n") && text.contains("iter=0 antichain_size="));
    assert!(text.contains("(1,0,2,1)"));

    let (code, text) = run(&["verify", &fixture("fig1.game"), path_str(&out), "--credit", "1,0"]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("Winning"), "{text}");
}

#[test]
fn losing_loop_is_negative() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("loop.game");
    std::fs::write(&game, "game k=1\nstate s owner=1 prio=0 init\nedge s s -1\n").unwrap();
    let (code, text) = run(&["solve", path_str(&game), "--caps", "1,2"]);
    assert_eq!(code, EXIT_NEGATIVE, "{text}");
    assert!(text.contains("unknown up to cap 2"), "{text}");
}

#[test]
fn gen_outputs_parse_back() {
    let (code, text) = run(&["gen", "expfam", "2"]);
    assert_eq!(code, EXIT_OK);
    let g = menergy::parse_game(&text).unwrap();
    assert_eq!(g.dimension(), 4);

    let (code, text) = run(&["gen", "random", "--states", "4", "--dim", "2", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(menergy::parse_game(&text).unwrap().num_states(), 4);

    let (code, _) = run(&["gen", "nonsense"]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn reduce_adds_one_dimension_per_odd_priority() {
    let (code, text) = run(&["reduce", &fixture("fig1.game")]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.starts_with("# reward l=7 added_dimensions=2"), "{text}");
    let g = menergy::parse_game(&text).unwrap();
    assert_eq!(g.dimension(), 4);
}

#[test]
fn randomize_then_simulate_fig7() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7.rm");
    let (code, text) = run(&[
        "randomize",
        &fixture("fig7.game"),
        "--mode",
        "lasso",
        "--cycle",
        "s1,s1,s1,s1,s1,s1,s1,s1,s1,s2",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("3/5"), "{text}");
    let rm = std::fs::read_to_string(&out).unwrap();
    assert_eq!(rm, "rm\ndist s1 s1:8/9 s2:1/9\ndist s2 s1:1/1\n");

    let (code, text) = run(&[
        "simulate",
        &fixture("fig7.game"),
        path_str(&out),
        "--horizon",
        "2000",
        "--episodes",
        "20",
        "--seed",
        "5",
    ]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("ChaCha8"), "{text}");
}

#[test]
fn randomize_buchi_reports_the_guarantee() {
    let (code, text) = run(&[
        "randomize",
        &fixture("fig7.game"),
        "--mode",
        "buchi",
        "--buchi",
        "s2",
        "--threshold",
        "3/5",
        "--epsilon",
        "1/2",
    ]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("1/35328"), "{text}");
}

#[test]
fn missing_file_is_an_error() {
    let (code, text) = run(&["solve", "/nonexistent/x.game"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(text.contains("error:"));
}
