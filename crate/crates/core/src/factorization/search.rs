//! Nonnegative factorization search. Candidates come from floating point
//! HALS iterations and are only ever reported after exact verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bounds::{block_augmentation_bound, Bound, RankKind};
use super::{verify_factorization, ConeKind, Factorization};
use crate::linalg::{Matrix, Vector};
use crate::lp::nonneg_solution;
use crate::scalar::Scalar;

/// HALS sweeps per random start before giving up on it.
const ATTEMPT_SWEEPS: u64 = 400;
const DENOMINATOR_CAPS: [u64; 3] = [16, 1000, 1_000_000];

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Total HALS sweeps over all restarts.
    pub budget_iters: u64,
    pub seed: u64,
    pub restarts: u64,
    /// Checked exactly and padded to `k` if it verifies.
    pub warm_start: Option<Factorization>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget_iters: 1_000_000, seed: 0x5eed, restarts: 10, warm_start: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Yes(Factorization),
    No(Bound),
    Unknown,
}

/// Searches for an exactly verified `R₊^k` factorization. `None` proves nothing.
pub fn nn_search(m: &Matrix, k: usize, opts: &SearchOptions) -> Option<Factorization> {
    if k == 0 || !m.is_nonneg() {
        return None;
    }
    if let Some(ws) = &opts.warm_start {
        if let (ConeKind::Orthant(w), Ok(v)) = (ws.cone, verify_factorization(m, ws)) {
            if v.ok && w <= k {
                return ws.padded(k).ok();
            }
        }
    }
    if m.entries().all(Scalar::is_zero) {
        let z = Matrix::zeros(m.nrows(), k);
        return Factorization::from_matrices(&z, &Matrix::zeros(k, m.ncols())).ok();
    }
    let target = m.to_f64();
    let restarts = opts.restarts.max(1);
    let per_restart = opts.budget_iters / restarts;
    let run = |r: u64| restart(m, &target, k, opts.seed.wrapping_add(r), per_restart);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().find_map_first(run)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..restarts).find_map(run)
    }
}

fn restart(m: &Matrix, target: &[Vec<f64>], k: usize, seed: u64, budget: u64) -> Option<Factorization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = (target.len(), target[0].len());
    let scale = target.iter().flatten().fold(0f64, |a, &b| a.max(b));
    let mut spent = 0;
    while spent < budget {
        let sweeps = ATTEMPT_SWEEPS.min(budget - spent);
        spent += sweeps;
        let mut w: Vec<Vec<f64>> = (0..p).map(|_| (0..k).map(|_| rng.random::<f64>() * scale).collect()).collect();
        let mut h: Vec<Vec<f64>> = (0..k).map(|_| (0..q).map(|_| rng.random::<f64>()).collect()).collect();
        let mut converged = false;
        for s in 0..sweeps {
            hals_sweep(target, &mut w, &mut h);
            if s % 25 == 24 && max_residual(target, &w, &h) < 1e-10 * scale.max(1.0) {
                converged = true;
                break;
            }
        }
        if converged || max_residual(target, &w, &h) < 1e-8 * scale.max(1.0) {
            if let Some(f) = certify(m, &mut w, &mut h) {
                return Some(f);
            }
        }
    }
    None
}

fn max_residual(m: &[Vec<f64>], w: &[Vec<f64>], h: &[Vec<f64>]) -> f64 {
    let mut worst = 0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let y: f64 = (0..h.len()).map(|t| w[i][t] * h[t][j]).sum();
            worst = worst.max((x - y).abs());
        }
    }
    worst
}

fn hals_sweep(m: &[Vec<f64>], w: &mut [Vec<f64>], h: &mut [Vec<f64>]) {
    let (p, q, k) = (m.len(), m[0].len(), h.len());
    // H rows
    let wtw: Vec<Vec<f64>> = (0..k).map(|a| (0..k).map(|b| (0..p).map(|i| w[i][a] * w[i][b]).sum()).collect()).collect();
    let wtm: Vec<Vec<f64>> = (0..k).map(|a| (0..q).map(|j| (0..p).map(|i| w[i][a] * m[i][j]).sum()).collect()).collect();
    for t in 0..k {
        let d = wtw[t][t].max(1e-12);
        for j in 0..q {
            let g: f64 = (0..k).map(|s| wtw[t][s] * h[s][j]).sum();
            h[t][j] = (h[t][j] + (wtm[t][j] - g) / d).max(0.0);
        }
    }
    // W columns
    let hht: Vec<Vec<f64>> = (0..k).map(|a| (0..k).map(|b| (0..q).map(|j| h[a][j] * h[b][j]).sum()).collect()).collect();
    let mht: Vec<Vec<f64>> = (0..p).map(|i| (0..k).map(|a| (0..q).map(|j| m[i][j] * h[a][j]).sum()).collect()).collect();
    for t in 0..k {
        let d = hht[t][t].max(1e-12);
        for row in w.iter_mut().zip(&mht) {
            let (wi, mi) = row;
            let g: f64 = (0..k).map(|s| wi[s] * hht[s][t]).sum();
            wi[t] = (wi[t] + (mi[t] - g) / d).max(0.0);
        }
    }
}

fn rationalize(x: f64, cap: u64) -> Option<Scalar> {
    if x.abs() < 1e-9 {
        return Some(Scalar::zero());
    }
    Scalar::approximate_f64(x, cap).filter(Scalar::is_nonneg)
}

fn rationalize_rows(a: &[Vec<f64>], cap: u64) -> Option<Vec<Vector>> {
    a.iter().map(|r| r.iter().map(|&x| rationalize(x, cap)).collect()).collect()
}

/// Turns a converged float pair into an exact factorization, or gives up.
fn certify(m: &Matrix, w: &mut [Vec<f64>], h: &mut [Vec<f64>]) -> Option<Factorization> {
    let k = h.len();
    // unit column maxima of W, so locally unique solutions land on small rationals
    for t in 0..k {
        let c = w.iter().fold(0f64, |a, r| a.max(r[t]));
        if c > 1e-12 {
            w.iter_mut().for_each(|r| r[t] /= c);
            h[t].iter_mut().for_each(|x| *x *= c);
        }
    }
    for cap in DENOMINATOR_CAPS {
        let Some(wr) = rationalize_rows(w, cap) else { continue };
        let wm = Matrix::from_rows_with_cols(&wr, k);
        if let Some(hr) = rationalize_rows(h, cap) {
            let hm = Matrix::from_rows_with_cols(&hr, m.ncols());
            if let Some(f) = checked(m, &wm, &hm) {
                return Some(f);
            }
        }
        // keep W, solve each column of H exactly
        let cols: Option<Vec<Vector>> = (0..m.ncols()).map(|j| nonneg_solution(&wm, &m.col(j))).collect();
        if let Some(cols) = cols {
            if let Some(f) = checked(m, &wm, &Matrix::from_cols(&cols)) {
                return Some(f);
            }
        }
        // keep H, solve each row of W exactly
        if let Some(hr) = rationalize_rows(h, cap) {
            let ht = Matrix::from_rows_with_cols(&hr, m.ncols()).transpose();
            let rows: Option<Vec<Vector>> = (0..m.nrows()).map(|i| nonneg_solution(&ht, m.row(i))).collect();
            if let Some(rows) = rows {
                if let Some(f) = checked(m, &Matrix::from_rows_with_cols(&rows, k), &ht.transpose()) {
                    return Some(f);
                }
            }
        }
    }
    None
}

fn checked(m: &Matrix, w: &Matrix, h: &Matrix) -> Option<Factorization> {
    let f = Factorization::from_matrices(w, h).ok()?;
    verify_factorization(m, &f).ok().filter(|v| v.ok).map(|_| f)
}

/// `No` when a lower bound exceeds `k`, `Yes` with a verified certificate when
/// one is found, `Unknown` otherwise.
pub fn nn_rank_decide(m: &Matrix, k: usize, opts: &SearchOptions) -> Decision {
    let bound = block_augmentation_bound(m, RankKind::Nonnegative);
    if bound.value > k {
        return Decision::No(bound);
    }
    if m.is_nonneg() && k >= m.nrows().min(m.ncols()) {
        let t = Factorization::trivial(m);
        if let Ok(f) = t.padded(k) {
            return Decision::Yes(f);
        }
    }
    match nn_search(m, k, opts) {
        Some(f) => Decision::Yes(f),
        None => Decision::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> Matrix {
        let base = [0, 0, 1, 2, 2, 1];
        let rows: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| base[(j + 6 - i) % 6]).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Matrix::from_i64(&refs)
    }

    #[test]
    fn rank_one() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let f = nn_search(&m, 1, &SearchOptions { budget_iters: 10_000, ..Default::default() }).unwrap();
        assert!(verify_factorization(&m, &f).unwrap().ok);
        assert_eq!(f.cone, ConeKind::Orthant(1));
    }

    #[test]
    fn hexagon_five() {
        let m = hexagon();
        assert_eq!(super::super::rectangle_cover_bound(&m).unwrap(), 5);
        let f = nn_search(&m, 5, &SearchOptions::default()).expect("search finds a certificate");
        assert!(verify_factorization(&m, &f).unwrap().ok);
        match nn_rank_decide(&m, 4, &SearchOptions::default()) {
            Decision::No(b) => assert_eq!(b.value, 5),
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn warm_start_is_padded() {
        let m = Matrix::from_i64(&[&[1, 0], &[0, 1]]);
        let ws = Factorization::trivial(&m);
        let f = nn_search(&m, 4, &SearchOptions { warm_start: Some(ws), ..Default::default() }).unwrap();
        assert_eq!(f.cone, ConeKind::Orthant(4));
        assert!(verify_factorization(&m, &f).unwrap().ok);
    }

    #[test]
    fn trivial_and_monotone() {
        let m = Matrix::from_i64(&[&[1, 0, 2], &[0, 1, 1]]);
        for k in 2..5 {
            match nn_rank_decide(&m, k, &SearchOptions::default()) {
                Decision::Yes(f) => assert!(verify_factorization(&m, &f).unwrap().ok),
                d => panic!("{d:?}"),
            }
        }
        assert!(matches!(nn_rank_decide(&m, 1, &SearchOptions::default()), Decision::No(_)));
    }
}
