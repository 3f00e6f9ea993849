//! Polars, support values and the D-set description of a polyhedron.
//!
//! For a closed convex `C` the polar is `C° = {l : <l,x> <= 1 for x in C}`.
//! The finite sets
//!
//! * `D1`: extreme points of `C°` other than the origin,
//! * `D2`: extreme rays `r` of `0⁺C°` with `sigma(r) = 0`,
//! * `D3`: extreme points of `C3 = {l : sigma(l) <= -1}`,
//! * `D32`: extreme rays of `0⁺C°` with negative support, scaled to `sigma = -1`,
//!
//! describe `C` by `<l,x> <= 1`, `<l,x> <= 0`, `<l,x> <= -1` over `D1`, `D2`, `D3`.
//! When `C°` contains lines (`C` spans a proper linear subspace) everything is
//! computed inside the orthogonal complement of that lineality space.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, is_zero_vec, normalize_direction, scale, Vector};
use crate::polyhedron::{Halfspace, HRep, Polyhedron};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Value of `sup {<l,x> : x in C}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    Finite(Scalar),
    Infinite,
}

impl Support {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Support::Finite(s) => Some(s),
            Support::Infinite => None,
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Finite(s) => write!(f, "{s}"),
            Support::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn support_value(p: &Polyhedron, l: &[Scalar]) -> Result<Support> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if p.rays().iter().any(|r| dot(l, r).is_positive()) || p.lines().iter().any(|w| !dot(l, w).is_zero()) {
        return Ok(Support::Infinite);
    }
    Ok(Support::Finite(p.points().iter().map(|c| dot(l, c)).max().unwrap()))
}

/// `<l,c> <= rhs` for points, `<l,r> <= 0` for rays, `<l,w> = 0` for lines.
fn dual_system(p: &Polyhedron, rhs: &Scalar) -> HRep {
    let n = p.ambient_dim();
    let mut ineqs = Vec::new();
    for c in p.points() {
        if is_zero_vec(c) {
            if rhs.is_negative() {
                // 0 <= rhs fails: nothing satisfies the system
                return HRep::infeasible(n);
            }
            continue;
        }
        ineqs.push(Halfspace::new(c.clone(), rhs.clone()));
    }
    ineqs.extend(p.rays().iter().map(|r| Halfspace::new(r.clone(), Scalar::zero())));
    let eqs = p.lines().iter().map(|w| Halfspace::new(w.clone(), Scalar::zero())).collect();
    HRep { dim: n, ineqs, eqs }
}

pub fn polar_set(p: &Polyhedron) -> Result<Polyhedron> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    Polyhedron::from_h(dual_system(p, &Scalar::one()))
}

/// The cone generated by `C°`, i.e. all `l` with finite support.
pub fn barrier_cone(p: &Polyhedron) -> Result<Polyhedron> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let n = p.ambient_dim();
    let ineqs = p.rays().iter().map(|r| Halfspace::new(r.clone(), Scalar::zero())).collect();
    let eqs = p.lines().iter().map(|w| Halfspace::new(w.clone(), Scalar::zero())).collect();
    Polyhedron::from_h(HRep { dim: n, ineqs, eqs })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarData {
    pub polar_set: Polyhedron,
    pub polar_recession: Polyhedron,
    /// `{l : sigma(l) <= -1}`; empty exactly when `C` contains the origin.
    pub c_three: Polyhedron,
    pub d1: Vec<Vector>,
    pub d2: Vec<Vector>,
    pub d3: Vec<Vector>,
    pub d32: Vec<Vector>,
    /// Lineality of `C°`.
    pub l_two_basis: Vec<Vector>,
}

pub fn compute_d_sets(p: &Polyhedron) -> Result<PolarData> {
    let polar = polar_set(p)?;
    let polar_recession = polar.recession_cone()?;
    let c_three = Polyhedron::from_h(dual_system(p, &Scalar::int(-1)))?;

    let d1: Vec<Vector> = polar.points().iter().filter(|x| !is_zero_vec(x)).cloned().collect();
    let mut d2 = Vec::new();
    let mut d32 = Vec::new();
    for r in polar.rays() {
        let Support::Finite(s) = support_value(p, r)? else {
            unreachable!("rays of the polar have finite support");
        };
        if s.is_zero() {
            d2.push(normalize_direction(r));
        } else {
            d32.push(scale(r, &(-s).inverse().unwrap()));
        }
    }
    d2.sort();
    d32.sort();
    let d3 = c_three.points().to_vec();
    Ok(PolarData {
        l_two_basis: polar.lines().to_vec(),
        polar_set: polar,
        polar_recession,
        c_three,
        d1,
        d2,
        d3,
        d32,
    })
}

impl PolarData {
    /// `(normal, rhs)` rows `<y,x> <= rhs` in the order D1, D2, D3.
    pub fn rows(&self) -> Vec<(Vector, Scalar)> {
        let tag = |vs: &[Vector], b: i64| vs.iter().map(move |v| (v.clone(), Scalar::int(b))).collect::<Vec<_>>();
        let mut rows = tag(&self.d1, 1);
        rows.extend(tag(&self.d2, 0));
        rows.extend(tag(&self.d3, -1));
        rows
    }
}

/// Membership through the D-sets alone. Meant for polyhedra that are full
/// dimensional or span a proper linear subspace.
pub fn membership_by_d(pd: &PolarData, x: &[Scalar]) -> bool {
    pd.l_two_basis.iter().all(|w| dot(w, x).is_zero())
        && pd.rows().iter().all(|(y, b)| dot(y, x) <= *b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::VRep;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn hs(n: &[i64], b: i64) -> Halfspace {
        Halfspace::new(v(n), Scalar::int(b))
    }

    fn nonequal() -> Polyhedron {
        Polyhedron::from_h(
            HRep::new(2, vec![hs(&[-1, -1], -1), hs(&[1, 1], 3), hs(&[1, -1], 1), hs(&[-1, 1], 1)], vec![]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn support_values() {
        let p = nonequal();
        assert_eq!(support_value(&p, &v(&[-1, -1])).unwrap(), Support::Finite(Scalar::int(-1)));
        assert_eq!(support_value(&p, &v(&[0, 0])).unwrap(), Support::Finite(Scalar::zero()));
        let half = Polyhedron::from_h(HRep::new(1, vec![hs(&[-1], 1)], vec![]).unwrap()).unwrap();
        assert_eq!(support_value(&half, &v(&[1])).unwrap(), Support::Infinite);
    }

    #[test]
    fn polar_of_half_line_is_segment() {
        let half = Polyhedron::from_h(HRep::new(1, vec![hs(&[-1], 1)], vec![]).unwrap()).unwrap();
        let pol = polar_set(&half).unwrap();
        assert_eq!(pol.points(), &[v(&[-1]), v(&[0])]);
        let pd = compute_d_sets(&half).unwrap();
        assert_eq!(pd.d1, vec![v(&[-1])]);
        assert!(pd.d2.is_empty() && pd.d3.is_empty());
        let bc = barrier_cone(&half).unwrap();
        assert_eq!(bc.rays(), &[v(&[-1])]);
    }

    #[test]
    fn nonequal_dsets() {
        let pd = compute_d_sets(&nonequal()).unwrap();
        let third = Scalar::ratio(1, 3);
        assert_eq!(pd.d1, vec![v(&[-1, 1]), vec![third.clone(), third], v(&[1, -1])]);
        assert_eq!(pd.d2, vec![v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(pd.d3, vec![v(&[-1, -1])]);
        assert!(pd.d32.is_empty());
        assert!(membership_by_d(&pd, &v(&[1, 1])));
        assert!(!membership_by_d(&pd, &v(&[0, 0])));
    }

    #[test]
    fn wedge_has_negative_support_rays() {
        // y >= x+1, y >= -x+1
        let p = Polyhedron::from_h(HRep::new(2, vec![hs(&[1, -1], -1), hs(&[-1, -1], -1)], vec![]).unwrap()).unwrap();
        let pd = compute_d_sets(&p).unwrap();
        assert!(pd.d2.is_empty());
        assert_eq!(pd.d32, vec![v(&[-1, -1]), v(&[1, -1])]);
        for r in &pd.d32 {
            assert_eq!(support_value(&p, r).unwrap(), Support::Finite(Scalar::int(-1)));
        }
    }

    #[test]
    fn square_polar_is_diamond() {
        let sq = Polyhedron::from_v(
            VRep::new(2, vec![v(&[-1, -1]), v(&[-1, 1]), v(&[1, -1]), v(&[1, 1])], vec![], vec![]).unwrap(),
        )
        .unwrap();
        let pol = polar_set(&sq).unwrap();
        assert_eq!(pol.points(), &[v(&[-1, 0]), v(&[0, -1]), v(&[0, 1]), v(&[1, 0])]);
        let back = polar_set(&pol).unwrap();
        assert!(crate::polyhedron::polyhedra_equal(&back, &sq).unwrap());
        let pd = compute_d_sets(&sq).unwrap();
        assert!(pd.d2.is_empty() && pd.d3.is_empty());
    }

    #[test]
    fn lower_dimensional_linear_span() {
        // segment from (0,0) to (1,0): C° has the y-axis as lineality
        let seg = Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0]), v(&[1, 0])], vec![], vec![]).unwrap()).unwrap();
        let pd = compute_d_sets(&seg).unwrap();
        assert_eq!(pd.l_two_basis, vec![v(&[0, 1])]);
        assert_eq!(pd.d1, vec![v(&[1, 0])]);
        assert!(membership_by_d(&pd, &[Scalar::ratio(1, 2), Scalar::zero()]));
        assert!(!membership_by_d(&pd, &[Scalar::ratio(1, 2), Scalar::one()]));
    }
}
