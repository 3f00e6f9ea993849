use std::path::PathBuf;

use conelift::factorization::{
    block_augmentation_bound, nn_rank_decide, psd_rank_lower_bound, psd_verify_family, rectangle_cover_bound,
    shitov_report, verify_factorization, BoundRule, Decision, PsdFamily, RankKind, SearchOptions,
};
use conelift::io::{parse_affine, parse_lift, parse_matrix, parse_poly_file, PolyFile};
use conelift::lift::{build_lift_from_slack, eliminate_presentation, orthant_image, verify_lift};
use conelift::linalg::subspace_equal;
use conelift::polar::compute_d_sets;
use conelift::polyhedron::{polyhedra_equal, Polyhedron};
use conelift::slack::{build_slack, canonical_slack, check_rank_theorem, is_slack_matrix};
use conelift::{Factorization, Matrix, Scalar, Vector};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn poly(name: &str) -> PolyFile {
    parse_poly_file(&fixture(name)).unwrap()
}

fn mat(name: &str) -> Matrix {
    parse_matrix(&fixture(name)).unwrap()
}

fn q(s: &str) -> Scalar {
    s.parse().unwrap()
}

fn vecs(rows: &[&[&str]]) -> Vec<Vector> {
    rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()
}

#[test]
fn nonequal_d_sets() {
    let p = poly("nonequal.poly").polyhedron().unwrap();
    let pd = compute_d_sets(&p).unwrap();
    assert_eq!(pd.d1, vecs(&[&["-1", "1"], &["1/3", "1/3"], &["1", "-1"]]));
    assert_eq!(pd.d2, vecs(&[&["-1", "0"], &["0", "-1"]]));
    assert_eq!(pd.d3, vecs(&[&["-1", "-1"]]));
    assert!(pd.d32.is_empty());
}

#[test]
fn prism_slack_and_rank() {
    let PolyFile::H { rep: h, .. } = poly("prism.poly") else { panic!() };
    let PolyFile::V { rep: v, .. } = poly("prism_gens.poly") else { panic!() };
    let s = build_slack(&h, &v).unwrap();
    assert_eq!(s.matrix, mat("prism_slack.mat"));
    assert_eq!(s.matrix.rank(), 4);

    let p = Polyhedron::from_h(h).unwrap();
    let report = check_rank_theorem(&p).unwrap();
    assert_eq!((report.rank, report.expected, report.holds()), (4, 4, Some(true)));
    assert_eq!(canonical_slack(&p).unwrap().matrix.rank(), 4);
    assert_eq!(psd_rank_lower_bound(&p).unwrap(), 3);

    let id = is_slack_matrix(&s.matrix).unwrap();
    assert!(id.accepted);
    assert_eq!(id.zero_one, Some(vecs(&[&["1", "1", "1", "1", "1", "1", "0"]]).remove(0)));
}

#[test]
fn prism_has_no_five_factorization() {
    let s = mat("prism_slack.mat");
    let hex = mat("hexagon_slack.mat");
    assert_eq!(rectangle_cover_bound(&hex).unwrap(), 5);
    let bound = block_augmentation_bound(&s, RankKind::Nonnegative);
    assert_eq!(bound.value, 6);
    assert_eq!(bound.rule, BoundRule::Block);
    assert_eq!(bound.children[0].value, 5);
    assert_eq!(bound.children[0].rule, BoundRule::Rectangle);
    match nn_rank_decide(&s, 5, &SearchOptions::default()) {
        Decision::No(b) => assert_eq!(b, bound),
        d => panic!("{d:?}"),
    }
    match nn_rank_decide(&hex, 5, &SearchOptions::default()) {
        Decision::Yes(f) => assert!(verify_factorization(&hex, &f).unwrap().ok),
        d => panic!("{d:?}"),
    }
    assert!(matches!(nn_rank_decide(&hex, 4, &SearchOptions::default()), Decision::No(_)));
}

#[test]
fn noncompact_factorization_over_sqrt3() {
    let s = mat("noncom_S.mat");
    let (u, v) = (mat("noncom_U.mat"), mat("noncom_V.mat"));
    assert_eq!(u.mul(&v).unwrap(), s);
    let f = Factorization::from_matrices(&u, &v).unwrap();
    assert!(verify_factorization(&s, &f).unwrap().ok);
    assert_eq!(s.rank(), 3);
    assert_eq!(shitov_report(&s), Some(7));

    let PolyFile::H { rep: h, .. } = poly("noncom.poly") else { panic!() };
    let PolyFile::V { rep: g, .. } = poly("noncom_gens.poly") else { panic!() };
    assert_eq!(build_slack(&h, &g).unwrap().matrix, s);
}

#[test]
fn noncompact_lift() {
    let PolyFile::H { rep: h, .. } = poly("noncom.poly") else { panic!() };
    let PolyFile::V { rep: g, .. } = poly("noncom_gens.poly") else { panic!() };
    let (u, v) = (mat("noncom_U.mat"), mat("noncom_V.mat"));
    let slack = build_slack(&h, &g).unwrap();
    let lift = build_lift_from_slack(&slack, &Factorization::from_matrices(&u, &v).unwrap()).unwrap();
    let p = Polyhedron::from_h(h.clone()).unwrap();
    let report = verify_lift(&p, &lift).unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.recession.exact);
    assert!(!report.origin_in_slice);
    assert!(polyhedra_equal(&orthant_image(&lift).unwrap(), &p).unwrap());

    let elim = eliminate_presentation(&h.normals(), &u, &h.rhs()).unwrap();
    let reference = parse_affine(&fixture("noncom_elim.aff")).unwrap();
    assert!(subspace_equal(&elim, &reference).unwrap());
    assert!(subspace_equal(&lift.slice, &reference).unwrap());
}

#[test]
fn psd_lift_without_recession() {
    let c = poly("halfline.poly").polyhedron().unwrap();
    let lift = parse_lift(&fixture("halfline_psd.lift")).unwrap();
    let r = verify_lift(&c, &lift).unwrap();
    assert!(r.generators.passed && r.dual.passed);
    assert!(!r.recession.passed);
    assert!(r.recession.detail.unwrap().starts_with("π(K ∩ 0⁺L) = {0}"));

    // A(x) = [[1, x, 0], [x, x², 0], [0, 0, x+1]], B = diag(0, 0, 1)
    let p = |c: &[i64]| c.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>();
    let a = PsdFamily { k: 3, entries: vec![p(&[1]), p(&[0, 0, 1]), p(&[1, 1]), p(&[0, 1]), p(&[]), p(&[])] };
    let b: Vector = p(&[0, 0, 1, 0, 0, 0]);
    let target = p(&[1, 1]);
    let samples: Vec<Scalar> = [-1, 0, 1, 2].iter().map(|&x| Scalar::int(x)).collect();
    let rep = psd_verify_family(&a, &b, &target, &samples, &|x: &Scalar| x >= &Scalar::int(-1)).unwrap();
    assert!(rep.ok);
}

#[test]
fn orthant_psd_bound_and_slack() {
    for n in 1..=6 {
        let rows: Vec<(Vec<i64>, i64)> =
            (0..n).map(|i| ((0..n).map(|j| if i == j { -1 } else { 0 }).collect(), 0)).collect();
        let text: String = std::iter::once("H\nQ\n".to_string())
            .chain(rows.iter().map(|(a, b)| {
                format!("ineq {} | {b}\n", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            }))
            .collect();
        let p = parse_poly_file(&text).unwrap().polyhedron().unwrap();
        assert_eq!(psd_rank_lower_bound(&p).unwrap(), n);
        let s = canonical_slack(&p).unwrap().matrix;
        let expected = Matrix::zeros(n, 1).hstack(&Matrix::identity(n));
        assert_eq!(s, expected);
        assert_eq!(block_augmentation_bound(&s, RankKind::Psd).value, n);
    }
}
