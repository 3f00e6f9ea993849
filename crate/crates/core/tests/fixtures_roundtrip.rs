use std::path::PathBuf;

use conelift::io::{parse_affine, parse_lift, parse_matrix, parse_poly_file, write_affine, write_lift, write_matrix, write_poly_file};

#[test]
fn every_fixture_round_trips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    for path in names {
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.display();
        match path.extension().and_then(|e| e.to_str()) {
            Some("poly") => {
                let a = parse_poly_file(&text).unwrap();
                let printed = write_poly_file(&a);
                assert_eq!(parse_poly_file(&printed).unwrap(), a, "{name}");
                assert_eq!(write_poly_file(&parse_poly_file(&printed).unwrap()), printed, "{name}");
            }
            Some("mat") => {
                let a = parse_matrix(&text).unwrap();
                assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a, "{name}");
            }
            Some("aff") => {
                let a = parse_affine(&text).unwrap();
                assert_eq!(parse_affine(&write_affine(&a)).unwrap(), a, "{name}");
            }
            Some("lift") => {
                let a = parse_lift(&text).unwrap();
                assert_eq!(parse_lift(&write_lift(&a)).unwrap(), a, "{name}");
            }
            _ => panic!("unexpected fixture {name}"),
        }
        seen += 1;
    }
    assert!(seen >= 13);
}
