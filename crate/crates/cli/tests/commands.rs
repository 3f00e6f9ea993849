use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn conelift(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conelift")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn dsets_of_nonequal() {
    let (code, out, _) = conelift(&["dsets", &fixture("nonequal.poly")]);
    assert_eq!(code, 0);
    assert_eq!(out, "d1 -1 1\nd1 1/3 1/3\nd1 1 -1\nd2 -1 0\nd2 0 -1\nd3 -1 -1\nd32 none\n");
}

#[test]
fn prism_refuted_at_five() {
    let (code, out, _) = conelift(&["nnrank", &fixture("prism_slack.mat"), "--k", "5"]);
    assert_eq!(code, 1);
    assert_eq!(out, "no\nblock >= 6 (row 6, column 6)\n  rectangle >= 5\n");
}

#[test]
fn hexagon_found_at_five() {
    let (code, out, _) = conelift(&["nnrank", &fixture("hexagon_slack.mat"), "--k", "5", "--threads", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("yes\n# U\n6 5\n"));
}

#[test]
fn noncompact_factorization_verifies() {
    let (code, out, _) =
        conelift(&["verify-fact", &fixture("noncom_S.mat"), &fixture("noncom_U.mat"), &fixture("noncom_V.mat")]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
    // U against the wrong matrix
    let (code, out, _) =
        conelift(&["verify-fact", &fixture("prism_slack.mat"), &fixture("noncom_U.mat"), &fixture("noncom_V.mat")]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn lift_build_then_verify() {
    let dir = std::env::temp_dir().join(format!("conelift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let lift = dir.join("noncom.lift").display().to_string();
    let args = [
        "lift-build",
        &fixture("noncom.poly"),
        &fixture("noncom_gens.poly"),
        &fixture("noncom_U.mat"),
        &fixture("noncom_V.mat"),
        "--out",
        &lift,
    ];
    let (code, out, _) = conelift(&args);
    assert_eq!((code, out.as_str()), (0, ""));
    let (code, out, _) = conelift(&["lift-verify", &fixture("noncom.poly"), &lift]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(c) recession pass\n"));

    let (code, out, _) = conelift(&["lift-verify", &fixture("halfline.poly"), &fixture("halfline_psd.lift")]);
    assert_eq!(code, 1);
    assert!(out.contains("(c) recession FAIL"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn eliminate_matches_reference() {
    let (code, out, _) = conelift(&["eliminate", &fixture("noncom.poly"), &fixture("noncom_U.mat")]);
    assert_eq!(code, 0);
    let got = conelift::io::parse_affine(&out).unwrap();
    let want = conelift::io::parse_affine(&std::fs::read_to_string(fixture("noncom_elim.aff")).unwrap()).unwrap();
    assert!(conelift::linalg::subspace_equal(&got, &want).unwrap());
}

#[test]
fn slack_commands() {
    let (code, out, _) = conelift(&["slack", &fixture("prism.poly"), &fixture("prism_gens.poly")]);
    assert_eq!(code, 0);
    let want = std::fs::read_to_string(fixture("prism_slack.mat")).unwrap();
    assert_eq!(
        conelift::io::parse_matrix(&out).unwrap(),
        conelift::io::parse_matrix(&want).unwrap()
    );
    let (code, out, _) = conelift(&["rank-check", &fixture("prism.poly")]);
    assert_eq!((code, out.as_str()), (0, "rank 4\nexpected 4\nholds yes\n"));
    let (code, out, _) = conelift(&["identify-slack", &fixture("prism_slack.mat")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("accepted\npoints 1 1 1 1 1 1 0\n"));
    let (code, out, _) = conelift(&["psd-bound", &fixture("prism.poly")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("psd rank >= 3\n"));
}

#[test]
fn convert_round_trip() {
    let dir = std::env::temp_dir().join(format!("conelift-convert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = dir.join("v.poly").display().to_string();
    let h = dir.join("h.poly").display().to_string();
    assert_eq!(conelift(&["convert", &fixture("noncom.poly"), "--out", &v]).0, 0);
    assert_eq!(conelift(&["convert", &v, "--out", &h]).0, 0);
    let a = conelift::io::parse_polyhedron(&std::fs::read_to_string(fixture("noncom.poly")).unwrap()).unwrap();
    let b = conelift::io::parse_polyhedron(&std::fs::read_to_string(&h).unwrap()).unwrap();
    assert!(conelift::polyhedron::polyhedra_equal(&a, &b).unwrap());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn json_output_is_stable() {
    let args = ["nnrank", &fixture("hexagon_slack.mat"), "--k", "5", "--format", "json", "--seed", "7"];
    let first = conelift(&args);
    assert_eq!(first.0, 0);
    let doc: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    assert_eq!(doc["result"]["decision"], "yes");
    assert_eq!(conelift(&args), first);

    let (_, out, _) = conelift(&["dsets", &fixture("nonequal.poly"), "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["d1"][1], serde_json::json!(["1/3", "1/3"]));
}

#[test]
fn input_errors_exit_two_with_one_line() {
    let dir = std::env::temp_dir().join(format!("conelift-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.poly");
    std::fs::write(&bad, "H\nQ\nineq 1 x | 2\n").unwrap();
    for args in [
        vec!["dsets".to_string(), bad.display().to_string()],
        vec!["dsets".into(), "/nonexistent/file.poly".into()],
        vec!["frobnicate".into()],
        vec!["nnrank".into(), fixture("prism_slack.mat")],
        vec!["dsets".into(), fixture("nonequal.poly"), "--unknown-flag".into()],
    ] {
        let (code, out, err) = conelift(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("error: "));
    }
    std::fs::remove_dir_all(dir).ok();
}
