//! Polyhedra kept in both inequality and generator form.

mod dd;

use serde::{Deserialize, Serialize};

use crate::linalg::{
    dot, domain_of, is_zero_vec, normalize_direction, normalize_line, orthogonal_basis, project_out, scale,
    Matrix, Vector,
};
use crate::scalar::{Domain, Scalar};
use crate::{Error, Result};

pub(crate) use dd::cone_generators;

/// `normal . x <= rhs` (or `= rhs` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub rhs: Scalar,
}

impl Halfspace {
    pub fn new(normal: Vector, rhs: Scalar) -> Self {
        Halfspace { normal, rhs }
    }

    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        &self.rhs - &dot(&self.normal, x)
    }
}

/// `{x : ineq . x <= b, eq . x = f}`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HRep {
    pub dim: usize,
    pub ineqs: Vec<Halfspace>,
    pub eqs: Vec<Halfspace>,
}

impl HRep {
    pub fn new(dim: usize, ineqs: Vec<Halfspace>, eqs: Vec<Halfspace>) -> Result<Self> {
        for h in ineqs.iter().chain(&eqs) {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a system over R^{dim}",
                    h.normal.len()
                )));
            }
        }
        if ineqs.iter().any(|h| is_zero_vec(&h.normal)) {
            return Err(Error::parse("inequality with zero normal"));
        }
        Ok(HRep { dim, ineqs, eqs })
    }

    /// `a x <= b` from matrix rows.
    pub fn from_matrix(a: &Matrix, b: &[Scalar]) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch(format!("{} rows but {} right-hand sides", a.nrows(), b.len())));
        }
        let ineqs = a.row_vecs().into_iter().zip(b).map(|(n, r)| Halfspace::new(n, r.clone())).collect();
        Self::new(a.ncols(), ineqs, Vec::new())
    }

    pub fn normals(&self) -> Matrix {
        let rows: Vec<Vector> = self.ineqs.iter().map(|h| h.normal.clone()).collect();
        Matrix::from_rows_with_cols(&rows, self.dim)
    }

    pub fn rhs(&self) -> Vector {
        self.ineqs.iter().map(|h| h.rhs.clone()).collect()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.ineqs.iter().all(|h| !h.slack(x).is_negative()) && self.eqs.iter().all(|h| h.slack(x).is_zero())
    }

    /// Direction of the recession cone: `ineq . r <= 0` and `eq . r = 0`.
    pub fn contains_direction(&self, r: &[Scalar]) -> bool {
        self.ineqs.iter().all(|h| !dot(&h.normal, r).is_positive())
            && self.eqs.iter().all(|h| dot(&h.normal, r).is_zero())
    }

    pub fn domain(&self) -> Domain {
        domain_of(self.ineqs.iter().chain(&self.eqs).flat_map(|h| h.normal.iter().chain(std::iter::once(&h.rhs))))
    }

    pub(crate) fn infeasible(dim: usize) -> Self {
        let e = crate::linalg::unit(dim, 0);
        let neg: Vector = e.iter().map(|x| -x).collect();
        HRep {
            dim,
            ineqs: vec![Halfspace::new(e, Scalar::int(-1)), Halfspace::new(neg, Scalar::zero())],
            eqs: Vec::new(),
        }
    }
}

/// Points, rays and lines; `P = conv(points) + cone(rays) + span(lines)`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VRep {
    pub dim: usize,
    pub points: Vec<Vector>,
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

impl VRep {
    pub fn new(dim: usize, points: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> Result<Self> {
        for g in points.iter().chain(&rays).chain(&lines) {
            if g.len() != dim {
                return Err(Error::DimensionMismatch(format!("generator of length {} in R^{dim}", g.len())));
            }
        }
        if rays.iter().chain(&lines).any(|r| is_zero_vec(r)) {
            return Err(Error::parse("zero ray or line"));
        }
        Ok(VRep { dim, points, rays, lines })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn domain(&self) -> Domain {
        domain_of(self.points.iter().chain(&self.rays).chain(&self.lines).flatten())
    }

    /// Rank of the homogenized generator matrix; the dimension is this minus one.
    fn homogeneous_rank(&self) -> usize {
        let rows: Vec<Vector> = self
            .points
            .iter()
            .map(|p| std::iter::once(Scalar::one()).chain(p.iter().cloned()).collect())
            .chain(self.rays.iter().chain(&self.lines).map(|r| std::iter::once(Scalar::zero()).chain(r.iter().cloned()).collect()))
            .collect();
        Matrix::from_rows_with_cols(&rows, self.dim + 1).rank()
    }
}

fn lex_sort_dedup(v: &mut Vec<Vector>) {
    v.sort();
    v.dedup();
}

/// Minimal generators of `{x : h}`: points are the extreme points of
/// `P ∩ L⊥`, rays the extreme rays of `0⁺P ∩ L⊥`, lines an orthogonal basis
/// of the lineality space `L`. Errors on an empty set.
pub fn h_to_v(h: &HRep) -> Result<VRep> {
    let n = h.dim;
    let homog = |hs: &Halfspace| -> Vector {
        std::iter::once(hs.rhs.clone()).chain(hs.normal.iter().map(|x| -x)).collect()
    };
    let mut ineqs: Vec<Vector> = vec![crate::linalg::unit(n + 1, 0)];
    ineqs.extend(h.ineqs.iter().map(homog));
    let eqs: Vec<Vector> = h.eqs.iter().map(homog).collect();
    let (lin, rays) = cone_generators(n + 1, &ineqs, &eqs);

    let lines = orthogonal_basis(&lin.iter().map(|l| l[1..].to_vec()).collect::<Vec<_>>());
    let mut points = Vec::new();
    let mut dirs = Vec::new();
    for r in rays {
        let t = r[0].clone();
        let x = project_out(&r[1..], &lines);
        if t.is_positive() {
            points.push(scale(&x, &t.inverse().unwrap()));
        } else if !is_zero_vec(&x) {
            dirs.push(normalize_direction(&x));
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    lex_sort_dedup(&mut points);
    lex_sort_dedup(&mut dirs);
    let mut lines: Vec<Vector> = lines.iter().map(|l| normalize_line(l)).collect();
    lines.sort();
    Ok(VRep { dim: n, points, rays: dirs, lines })
}

/// Irredundant inequality system (plus equations for the affine hull).
pub fn v_to_h(v: &VRep) -> HRep {
    let n = v.dim;
    if v.is_empty() {
        return HRep::infeasible(n);
    }
    let mut gens: Vec<Vector> = v
        .points
        .iter()
        .map(|p| std::iter::once(Scalar::one()).chain(p.iter().cloned()).collect())
        .collect();
    gens.extend(v.rays.iter().map(|r| std::iter::once(Scalar::zero()).chain(r.iter().cloned()).collect()));
    let eqs: Vec<Vector> =
        v.lines.iter().map(|l| std::iter::once(Scalar::zero()).chain(l.iter().cloned()).collect()).collect();
    let (lin, rays) = cone_generators(n + 1, &gens, &eqs);

    // functional (beta, a) >= 0 on generators reads  -a . x <= beta
    let lin = orthogonal_basis(&lin);
    let mut eq_rows: Vec<Halfspace> = Vec::new();
    for l in &lin {
        let l = normalize_line(l);
        let normal: Vector = l[1..].iter().map(|x| -x).collect();
        if !is_zero_vec(&normal) {
            eq_rows.push(Halfspace::new(normal, l[0].clone()));
        }
    }
    let mut ineq_rows: Vec<Halfspace> = Vec::new();
    for r in rays {
        let r = project_out(&r, &lin);
        let normal: Vector = r[1..].iter().map(|x| -x).collect();
        if is_zero_vec(&normal) {
            continue;
        }
        let s = normal.iter().find(|x| !x.is_zero()).unwrap().abs().inverse().unwrap();
        ineq_rows.push(Halfspace::new(scale(&normal, &s), &r[0] * &s));
    }
    ineq_rows.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.rhs.cmp(&b.rhs)));
    ineq_rows.dedup();
    HRep { dim: n, ineqs: ineq_rows, eqs: eq_rows }
}

/// A polyhedron with both representations filled in at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polyhedron {
    domain: Domain,
    h: HRep,
    v: VRep,
    dim: Option<usize>,
}

impl Polyhedron {
    pub fn from_h(h: HRep) -> Result<Self> {
        let domain = h.domain();
        let n = h.dim;
        match h_to_v(&h) {
            Ok(v) => Ok(Self::from_minimal_v(v, domain)),
            Err(Error::EmptyPolyhedron) => Ok(Self::empty_with(n, domain)),
            Err(e) => Err(e),
        }
    }

    pub fn from_v(v: VRep) -> Result<Self> {
        let domain = v.domain();
        if v.is_empty() {
            return Ok(Self::empty_with(v.dim, domain));
        }
        let h = v_to_h(&v);
        let v = h_to_v(&h)?;
        Ok(Self::from_minimal_v(v, domain))
    }

    fn from_minimal_v(v: VRep, domain: Domain) -> Self {
        let h = v_to_h(&v);
        let dim = Some(v.homogeneous_rank() - 1);
        Polyhedron { domain, h, v, dim }
    }

    pub fn empty(n: usize) -> Self {
        Self::empty_with(n, Domain::Rational)
    }

    fn empty_with(n: usize, domain: Domain) -> Self {
        Polyhedron { domain, h: HRep::infeasible(n), v: VRep { dim: n, ..Default::default() }, dim: None }
    }

    pub fn hrep(&self) -> &HRep {
        &self.h
    }

    pub fn vrep(&self) -> &VRep {
        &self.v
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ambient_dim(&self) -> usize {
        self.v.dim
    }

    /// Dimension of the affine hull; `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim.is_none()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == Some(self.ambient_dim())
    }

    pub fn has_lines(&self) -> bool {
        !self.v.lines.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.v.rays.is_empty() && self.v.lines.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.v.points
    }

    pub fn rays(&self) -> &[Vector] {
        &self.v.rays
    }

    pub fn lines(&self) -> &[Vector] {
        &self.v.lines
    }

    pub fn contains_point(&self, x: &[Scalar]) -> bool {
        !self.is_empty() && self.h.contains(x)
    }

    pub fn contains_direction(&self, r: &[Scalar]) -> bool {
        self.is_empty() || self.h.contains_direction(r)
    }

    pub fn contains_line(&self, l: &[Scalar]) -> bool {
        let neg: Vector = l.iter().map(|x| -x).collect();
        self.contains_direction(l) && self.contains_direction(&neg)
    }

    /// `{x : ineq . x <= 0, eq . x = 0}`, generated by the rays and lines.
    pub fn recession_cone(&self) -> Result<Polyhedron> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let n = self.ambient_dim();
        Polyhedron::from_v(VRep {
            dim: n,
            points: vec![crate::linalg::zeros(n)],
            rays: self.v.rays.clone(),
            lines: self.v.lines.clone(),
        })
    }

    /// Orthogonal basis of `0⁺P ∩ -0⁺P`.
    pub fn lineality_space(&self) -> Vec<Vector> {
        self.v.lines.clone()
    }

    /// `P = C0 + span(L1)` with `C0 = P ∩ L1⊥` line-free.
    pub fn decompose_lines(&self) -> Result<(Polyhedron, Vec<Vector>)> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let c0 = Polyhedron::from_v(VRep {
            dim: self.ambient_dim(),
            points: self.v.points.clone(),
            rays: self.v.rays.clone(),
            lines: Vec::new(),
        })?;
        Ok((c0, self.v.lines.clone()))
    }

    /// The apex when `P = x + 0⁺P`, i.e. when `P` has exactly one extreme point.
    pub fn is_translated_cone(&self) -> Result<Option<Vector>> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        if self.has_lines() {
            return Err(Error::LinesPresent);
        }
        Ok((self.v.points.len() == 1).then(|| self.v.points[0].clone()))
    }

    /// Image under `x -> m x`.
    pub fn linear_image(&self, m: &Matrix) -> Result<Polyhedron> {
        if m.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} columns, polyhedron lives in R^{}",
                m.ncols(),
                self.ambient_dim()
            )));
        }
        let k = m.nrows();
        if self.is_empty() {
            return Ok(Polyhedron::empty_with(k, self.domain));
        }
        let nonzero = |vs: &[Vector]| -> Vec<Vector> {
            vs.iter().map(|v| m.mul_vec(v)).filter(|v| !is_zero_vec(v)).collect()
        };
        let points = self.v.points.iter().map(|p| m.mul_vec(p)).collect();
        Polyhedron::from_v(VRep { dim: k, points, rays: nonzero(&self.v.rays), lines: nonzero(&self.v.lines) })
    }

    pub fn translate(&self, b: &[Scalar]) -> Result<Polyhedron> {
        let points = self.v.points.iter().map(|p| crate::linalg::add(p, b)).collect();
        Polyhedron::from_v(VRep { dim: self.ambient_dim(), points, rays: self.v.rays.clone(), lines: self.v.lines.clone() })
    }
}

/// Same point set: equal dimension and mutual containment of generators.
pub fn polyhedra_equal(p: &Polyhedron, q: &Polyhedron) -> Result<bool> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "polyhedra in R^{} and R^{}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    if p.is_empty() || q.is_empty() {
        return Ok(p.is_empty() && q.is_empty());
    }
    let inside = |a: &Polyhedron, b: &Polyhedron| {
        a.points().iter().all(|x| b.contains_point(x))
            && a.rays().iter().all(|r| b.contains_direction(r))
            && a.lines().iter().all(|l| b.contains_line(l))
    };
    Ok(p.dim() == q.dim() && inside(p, q) && inside(q, p))
}
