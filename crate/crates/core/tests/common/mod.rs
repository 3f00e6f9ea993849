//! Random polyhedra for the property checks.

#![allow(dead_code)]

use conelift::polyhedron::{Polyhedron, VRep};
use conelift::{Scalar, Vector};
use rand::{Rng, RngCore};

pub fn small(rng: &mut impl RngCore, span: i64, max_den: i64) -> Scalar {
    let den = rng.random_range(1..=max_den);
    Scalar::ratio(rng.random_range(-span * den..=span * den), den)
}

fn direction(rng: &mut impl RngCore, n: usize) -> Vector {
    loop {
        let v: Vector = (0..n).map(|_| Scalar::int(rng.random_range(-3..=3))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Bounded,
    Unbounded,
    Lines,
}

/// A full-dimensional polyhedron in `R^n` of the requested shape. Points
/// get a `sqrt(2)` component now and then, and some instances are moved so
/// the origin is the centroid of their points.
pub fn random_polyhedron(rng: &mut impl RngCore, n: usize, shape: Shape) -> (VRep, Polyhedron) {
    loop {
        let count = rng.random_range(n + 1..=n + 4);
        let surd = rng.random_bool(0.15);
        let mut points: Vec<Vector> = (0..count)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let x = small(rng, 4, 3);
                        if surd && rng.random_bool(0.3) {
                            &x + &Scalar::sqrt_of(2)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let (rays, lines) = match shape {
            Shape::Bounded => (vec![], vec![]),
            Shape::Unbounded => ((0..rng.random_range(1..=n)).map(|_| direction(rng, n)).collect(), vec![]),
            Shape::Lines => {
                let rays = (0..rng.random_range(0..n)).map(|_| direction(rng, n)).collect();
                (rays, vec![direction(rng, n)])
            }
        };
        if rng.random_bool(0.4) {
            let k = Scalar::int(points.len() as i64);
            let c: Vector = (0..n)
                .map(|i| &points.iter().fold(Scalar::zero(), |acc, p| &acc + &p[i]) / &k)
                .collect();
            for p in &mut points {
                for i in 0..n {
                    p[i] = &p[i] - &c[i];
                }
            }
        }
        let v = VRep { dim: n, points, rays, lines };
        let Ok(p) = Polyhedron::from_v(v.clone()) else { continue };
        let wanted = match shape {
            Shape::Bounded => p.is_bounded(),
            Shape::Unbounded => !p.is_bounded() && !p.has_lines(),
            Shape::Lines => p.has_lines(),
        };
        if p.is_full_dimensional() && wanted {
            return (v, p);
        }
    }
}

pub fn probe(rng: &mut impl RngCore, n: usize) -> Vector {
    (0..n).map(|_| small(rng, 5, 4)).collect()
}
