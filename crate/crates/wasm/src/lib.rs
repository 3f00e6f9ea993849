//! Three operations for the demo page. The plain functions return the text
//! to show or an error message; the exported wrappers hand them to JS.

use std::fmt::Write as _;

use conelift::factorization::{nn_rank_decide, Decision, SearchOptions};
use conelift::io::{parse_matrix, parse_polyhedron, write_matrix};
use conelift::polar::compute_d_sets;
use conelift::slack::{build_slack, check_rank_theorem, is_slack_matrix};
use conelift::{Scalar, Vector};
use wasm_bindgen::prelude::*;

/// Search budget per call, small enough to keep the page responsive.
pub const DEMO_BUDGET: u64 = 200_000;

fn join(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn d_sets_text(poly: &str) -> Result<String, String> {
    let p = parse_polyhedron(poly).map_err(err)?;
    let pd = compute_d_sets(&p).map_err(err)?;
    let mut out = String::new();
    let sets: [(&str, &Vec<Vector>); 4] = [("D1", &pd.d1), ("D2", &pd.d2), ("D3", &pd.d3), ("D32", &pd.d32)];
    for (tag, vs) in sets {
        if vs.is_empty() {
            writeln!(out, "{tag}: none").unwrap();
        } else {
            let items: Vec<String> = vs.iter().map(|v| format!("({})", join(v))).collect();
            writeln!(out, "{tag}: {}", items.join(" ")).unwrap();
        }
    }
    if !pd.l_two_basis.is_empty() {
        writeln!(out, "polar lineality: {}", pd.l_two_basis.len()).unwrap();
    }
    Ok(out)
}

pub fn slack_text(poly: &str) -> Result<String, String> {
    let p = parse_polyhedron(poly).map_err(err)?;
    let s = build_slack(p.hrep(), p.vrep()).map_err(err)?;
    let rank = check_rank_theorem(&p).map_err(err)?;
    let mut out = s.to_string();
    writeln!(out, "\nrank {} (line-free dimension + 1 = {})", rank.rank, rank.expected).unwrap();
    if s.ncols() > 0 && s.matrix.rank() >= 2 {
        match is_slack_matrix(&s.matrix) {
            Ok(id) => writeln!(out, "recognized as a slack matrix: {}", if id.accepted { "yes" } else { "no" }).unwrap(),
            Err(e) => writeln!(out, "recognition skipped: {e}").unwrap(),
        }
    }
    Ok(out)
}

pub fn nn_rank_text(matrix: &str, k: usize, seed: u64) -> Result<String, String> {
    let m = parse_matrix(matrix).map_err(err)?;
    if !m.is_nonneg() {
        return Err("the matrix has negative entries".into());
    }
    let opts = SearchOptions { budget_iters: DEMO_BUDGET, seed, restarts: 4, warm_start: None };
    Ok(match nn_rank_decide(&m, k, &opts) {
        Decision::Yes(f) => {
            let (u, v) = f.to_matrices();
            format!("yes, exactly verified\nU\n{}V\n{}", write_matrix(&u), write_matrix(&v))
        }
        Decision::No(b) => format!("no\n{b}"),
        Decision::Unknown => "unknown: no certificate within the demo budget\n".into(),
    })
}

#[wasm_bindgen]
pub fn d_sets(poly: &str) -> Result<String, JsError> {
    d_sets_text(poly).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn slack(poly: &str) -> Result<String, JsError> {
    slack_text(poly).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn nn_rank(matrix: &str, k: usize, seed: u32) -> Result<String, JsError> {
    nn_rank_text(matrix, k, seed as u64).map_err(|e| JsError::new(&e))
}
