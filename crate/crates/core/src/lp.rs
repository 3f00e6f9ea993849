//! Exact feasibility for `{x >= 0 : A x = b}` by a phase-one simplex with
//! Bland's rule. Problems here have a few dozen variables at most.

use crate::linalg::{zeros, Matrix, Vector};
use crate::scalar::Scalar;

/// A nonnegative solution of `a x = b`, if there is one.
pub fn nonneg_solution(a: &Matrix, b: &[Scalar]) -> Option<Vector> {
    let (m, n) = (a.nrows(), a.ncols());
    assert_eq!(m, b.len(), "right-hand side length");
    // tableau: n structural columns, m artificials, then the rhs
    let w = n + m + 1;
    let mut t = vec![Scalar::zero(); m * w];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[i * w + j] = if flip { -&a[(i, j)] } else { a[(i, j)].clone() };
        }
        t[i * w + n + i] = Scalar::one();
        t[i * w + w - 1] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the phase-one objective (sum of artificials)
    let cost = |t: &[Scalar], basis: &[usize], j: usize| -> Scalar {
        let mut c = if j >= n && j < n + m { Scalar::one() } else { Scalar::zero() };
        for (i, &bi) in basis.iter().enumerate() {
            if bi >= n {
                c -= &t[i * w + j];
            }
        }
        c
    };

    loop {
        let Some(enter) = (0..n + m).find(|&j| !basis.contains(&j) && cost(&t, &basis, j).is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            let p = &t[i * w + enter];
            if p.is_positive() {
                let ratio = &t[i * w + w - 1] / p;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one is bounded below");
        pivot(&mut t, w, m, r, enter);
        basis[r] = enter;
    }

    let mut x = zeros(n + m);
    for (i, &bi) in basis.iter().enumerate() {
        x[bi] = t[i * w + w - 1].clone();
    }
    if x[n..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    x.truncate(n);
    Some(x)
}

fn pivot(t: &mut [Scalar], w: usize, m: usize, r: usize, c: usize) {
    let inv = t[r * w + c].inverse().unwrap();
    for j in 0..w {
        let v = &t[r * w + j] * &inv;
        t[r * w + j] = v;
    }
    for i in 0..m {
        if i == r || t[i * w + c].is_zero() {
            continue;
        }
        let f = t[i * w + c].clone();
        for j in 0..w {
            let v = &t[r * w + j] * &f;
            t[i * w + j] -= v;
        }
    }
}
