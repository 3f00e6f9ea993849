//! Double description: generators of `{y : G y >= 0, E y = 0}`.
//!
//! Starts from the whole space (every coordinate direction is a line) and
//! intersects one constraint at a time in the given order. Two rays are
//! combined only when they are adjacent, tested algebraically: the
//! constraints tight at both must have rank `k - lineality - 2`.

use crate::linalg::{axpy, dot, normalize_direction, unit, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
struct Ray {
    v: Vector,
    // indices into the processed inequality list
    zeros: Vec<u64>,
}

fn has(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// Lineality basis and extreme rays (one per ray class modulo the lineality)
/// of the cone `{y in R^k : ineqs . y >= 0, eqs . y = 0}`.
pub(crate) fn cone_generators(k: usize, ineqs: &[Vector], eqs: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let words = ineqs.len().div_ceil(64).max(1);
    let mut lin: Vec<Vector> = (0..k).map(|i| unit(k, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed_eqs: Vec<Vector> = Vec::new();

    for e in eqs {
        intersect_hyperplane(e, &mut lin, &mut rays, k, ineqs, &processed_eqs);
        processed_eqs.push(e.clone());
    }

    for (gi, g) in ineqs.iter().enumerate() {
        let vals: Vec<Scalar> = lin.iter().map(|l| dot(g, l)).collect();
        if let Some(p) = vals.iter().position(|x| !x.is_zero()) {
            let mut l0 = lin.remove(p);
            let mut g0 = vals[p].clone();
            if g0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                g0 = -g0;
            }
            for l in lin.iter_mut() {
                let c = dot(g, l) / &g0;
                if !c.is_zero() {
                    *l = axpy(l, &-c, &l0);
                }
            }
            for r in rays.iter_mut() {
                let c = dot(g, &r.v) / &g0;
                if !c.is_zero() {
                    r.v = normalize_direction(&axpy(&r.v, &-c, &l0));
                }
                set(&mut r.zeros, gi);
            }
            // l0 was tight on every earlier inequality
            let mut zeros = vec![0u64; words];
            for i in 0..gi {
                set(&mut zeros, i);
            }
            rays.push(Ray { v: normalize_direction(&l0), zeros });
            continue;
        }

        let vals: Vec<Scalar> = rays.iter().map(|r| dot(g, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for &p in &pos {
            for &n in &neg {
                if adjacent(&rays[p], &rays[n], gi, ineqs, &processed_eqs, k, lin.len()) {
                    let v = axpy(&scale_by(&rays[n].v, &vals[p]), &-&vals[n], &rays[p].v);
                    let mut zeros = meet(&rays[p].zeros, &rays[n].zeros);
                    set(&mut zeros, gi);
                    next.push(Ray { v: normalize_direction(&v), zeros });
                }
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                set(&mut r.zeros, gi);
                next.push(r);
            } else if vals[i].is_positive() {
                next.push(r);
            }
        }
        rays = next;
    }
    (lin, rays.into_iter().map(|r| r.v).collect())
}

fn scale_by(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| x * c).collect()
}

fn intersect_hyperplane(
    e: &Vector,
    lin: &mut Vec<Vector>,
    rays: &mut Vec<Ray>,
    k: usize,
    ineqs: &[Vector],
    processed_eqs: &[Vector],
) {
    let vals: Vec<Scalar> = lin.iter().map(|l| dot(e, l)).collect();
    if let Some(p) = vals.iter().position(|x| !x.is_zero()) {
        let l0 = lin.remove(p);
        let g0 = vals[p].clone();
        for l in lin.iter_mut() {
            let c = dot(e, l) / &g0;
            if !c.is_zero() {
                *l = axpy(l, &-c, &l0);
            }
        }
        for r in rays.iter_mut() {
            let c = dot(e, &r.v) / &g0;
            if !c.is_zero() {
                r.v = normalize_direction(&axpy(&r.v, &-c, &l0));
            }
        }
        return;
    }
    let vals: Vec<Scalar> = rays.iter().map(|r| dot(e, &r.v)).collect();
    let mut next = Vec::new();
    // equalities are intersected before any inequality
    let processed_ineqs = 0;
    for p in 0..rays.len() {
        if !vals[p].is_positive() {
            continue;
        }
        for n in 0..rays.len() {
            if !vals[n].is_negative() {
                continue;
            }
            if adjacent(&rays[p], &rays[n], processed_ineqs, ineqs, processed_eqs, k, lin.len()) {
                let v = axpy(&scale_by(&rays[n].v, &vals[p]), &-&vals[n], &rays[p].v);
                next.push(Ray { v: normalize_direction(&v), zeros: meet(&rays[p].zeros, &rays[n].zeros) });
            }
        }
    }
    for (i, r) in rays.drain(..).enumerate() {
        if vals[i].is_zero() {
            next.push(r);
        }
    }
    *rays = next;
}

/// `upto` is the number of inequalities already processed.
fn adjacent(a: &Ray, b: &Ray, upto: usize, ineqs: &[Vector], eqs: &[Vector], k: usize, lin_dim: usize) -> bool {
    let common = meet(&a.zeros, &b.zeros);
    let Some(target) = k.checked_sub(lin_dim + 2) else {
        return false;
    };
    if count(&common) + eqs.len() < target {
        return false;
    }
    let mut rows: Vec<Vector> = eqs.to_vec();
    rows.extend((0..upto).filter(|&i| has(&common, i)).map(|i| ineqs[i].clone()));
    if rows.is_empty() {
        return target == 0;
    }
    Matrix::from_rows_with_cols(&rows, k).rank() == target
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn orthant() {
        let (lin, rays) = cone_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], &[]);
        assert!(lin.is_empty());
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square [-1,1]^2 at height 1
        let ineqs = vec![v(&[1, -1, 0]), v(&[1, 1, 0]), v(&[1, 0, -1]), v(&[1, 0, 1])];
        let (lin, rays) = cone_generators(3, &ineqs, &[]);
        assert!(lin.is_empty());
        assert_eq!(rays.len(), 4);
    }

    #[test]
    fn halfspace_keeps_lines() {
        let (lin, rays) = cone_generators(3, &[v(&[0, 0, 1])], &[]);
        assert_eq!(lin.len(), 2);
        assert_eq!(rays.len(), 1);
    }

    #[test]
    fn equality_restricts() {
        let (lin, rays) = cone_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])], &[v(&[0, 0, 1])]);
        assert!(lin.is_empty());
        assert_eq!(rays.len(), 2);
        assert!(rays.iter().all(|r| r[2].is_zero()));
    }
}
