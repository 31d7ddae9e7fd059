use std::process::{Command, Output};

fn ordcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ordcov(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn word_and_cmp_examples() {
    assert_eq!(stdout(&["word", "w^w"]).trim(), "1(2)^w");
    assert_eq!(stdout(&["word", "w^3+w^2", "--compact"]).trim(), "122(21)^w");
    assert_eq!(stdout(&["word", "3"]).trim(), "1,1,0");
    assert_eq!(stdout(&["cmp", "w^2", "w^2+w"]).trim(), "LT");
    assert_eq!(stdout(&["cmp", "w+w^2", "w^2"]).trim(), "EQ");
    assert_eq!(stdout(&["eval", "w + w^2"]).trim(), "w^2");
}

#[test]
fn fundamental_commands() {
    assert_eq!(stdout(&["fund", "w^w", "--count", "3"]), "w\nw^2\nw^3\n");
    assert_eq!(stdout(&["covers", "w^2", "w^w"]).trim(), "yes fund 1");
    assert_eq!(stdout(&["upset", "w", "--bound", "w^w"]), "w + 1\nw^2\n");
    assert_eq!(stdout(&["chain", "0", "w"]), "0\n1\nw\n");
    assert_eq!(ordcov(&["covers", "w+1", "w^2"]).status.code(), Some(1));
}

#[test]
fn graph_json_is_stable_and_sorted() {
    let a = stdout(&["graph", "w^2", "--depth", "4", "--format", "json"]);
    assert_eq!(a, stdout(&["graph", "w^2", "--depth", "4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["bound"], "w^2");
    assert_eq!(v["depth"], 4);
    let verts: Vec<&str> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    let parsed: Vec<_> = verts
        .iter()
        .map(|t| ordcov::syntax::parse_ordinal(t).unwrap())
        .collect();
    assert!(parsed.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn dot_exports() {
    let dot = stdout(&["graph", "w", "--depth", "2", "--annotate"]);
    assert!(dot.starts_with("digraph") && dot.contains("[label=\"s\"]"));
    let tree = stdout(&["tree", "1", "--spine", "2"]);
    assert!(tree.contains("s0 -> s1 [label=\"a\"]") && tree.contains("[label=\"b\"]"));
    assert!(stdout(&["restrict", "w^2", "--to", "1(1)^w", "--depth", "5"]).starts_with("digraph"));
}

#[test]
fn stack_and_set_commands() {
    assert_eq!(stdout(&["stack", "decode", "[[1],[0]]", "--raw"]).trim(), "w^(w) + w");
    let s = stdout(&["stack", "encode", "w^2+3", "--level", "2"]);
    assert_eq!(stdout(&["stack", "decode", s.trim()]).trim(), "w^2 + 3");
    assert_eq!(
        stdout(&["stack", "rel", "[[1]]", "[[2]]", "--expr", "inc"]).trim(),
        "Yes"
    );
    assert_eq!(
        stdout(&["stack", "domain", "--level", "1", "--count", "3"]),
        "0\n1\n2\n"
    );
    assert_eq!(stdout(&["cset", "1", "2"]), "0\n1\nw\nw + 1\n");
    assert_eq!(stdout(&["salpha", "w", "--ambient", "w^2+1"]), "w\nw + 1\n");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ordcov(&["verify", "degree", "--n", "3"]).status.code(), Some(0));
    assert_eq!(
        ordcov(&["verify", "tail-sequence", "--n", "2", "--K", "2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(ordcov(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(ordcov(&["eval", "w^"]).status.code(), Some(2));
    assert_eq!(ordcov(&["fund", "w+1"]).status.code(), Some(1));
    let out = ordcov(&["verify", "phi-u-matrix", "--max", "3"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS phi-u-matrix"));
}
