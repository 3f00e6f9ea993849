use conelift_wasm::{d_sets_text, nn_rank_text, slack_text};

const SIMPLEX: &str = "H\nQ\nineq -1 0 | 0\nineq 0 -1 | 0\nineq 1 1 | 1\n";
const SQUARE: &str = "V\nQ\npoint 0 0\npoint 1 0\npoint 0 1\npoint 1 1\n";

#[test]
fn d_sets_of_simplex() {
    let out = d_sets_text(SIMPLEX).unwrap();
    assert_eq!(out, "D1: (1 1)\nD2: (-1 0) (0 -1)\nD3: none\nD32: none\n");
}

#[test]
fn slack_of_square() {
    let out = slack_text(SQUARE).unwrap();
    assert!(out.starts_with("4 4\n"), "{out}");
    assert!(out.contains("rank 3 (line-free dimension + 1 = 3)"));
    assert!(out.contains("recognized as a slack matrix: yes"));
}

#[test]
fn nn_rank_of_square_slack() {
    let m = "4 4\n0 1 1 0\n0 0 1 1\n1 0 0 1\n1 1 0 0\n";
    assert!(nn_rank_text(m, 3, 1).unwrap().starts_with("no\n"));
    assert!(nn_rank_text(m, 4, 1).unwrap().starts_with("yes, exactly verified\n"));
}

#[test]
fn errors_are_messages() {
    assert!(d_sets_text("H\nQ\nineq 1 | x\n").is_err());
    assert!(nn_rank_text("1 1\n-1\n", 1, 0).unwrap_err().contains("negative"));
}
