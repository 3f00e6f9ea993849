//! Slack matrices of polyhedra and their identification.
//!
//! For `C = {x : <a_i,x> <= b_i}` with generators `c_j` (points) and `r_j`
//! (rays), the slack matrix has entries `b_i - <a_i,c_j>` on point columns and
//! `-<a_i,r_j>` on ray columns. Rows are tagged by the sign of `b_i`: `S1`
//! (positive), `S2` (zero), `S3` (negative).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, is_zero_vec, scale, Matrix, Vector};
use crate::polar::PolarData;
use crate::polyhedron::{cone_generators, Halfspace, HRep, Polyhedron, VRep};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    S1,
    S2,
    S3,
}

impl Block {
    pub fn of(rhs: &Scalar) -> Block {
        if rhs.is_positive() {
            Block::S1
        } else if rhs.is_zero() {
            Block::S2
        } else {
            Block::S3
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLabel {
    pub block: Block,
    pub normal: Vector,
    pub rhs: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColKind {
    Point,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColLabel {
    pub kind: ColKind,
    pub generator: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackMatrix {
    pub matrix: Matrix,
    pub rows: Vec<RowLabel>,
    pub cols: Vec<ColLabel>,
}

impl SlackMatrix {
    /// Slack of arbitrary rows `<a,x> <= b` against labeled columns.
    pub fn from_rows(rows: &[(Vector, Scalar)], cols: Vec<ColLabel>) -> Result<SlackMatrix> {
        let mut data = Vec::with_capacity(rows.len());
        for (i, (a, b)) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(cols.len());
            for (j, c) in cols.iter().enumerate() {
                let s = match c.kind {
                    ColKind::Point => b - &dot(a, &c.generator),
                    ColKind::Ray => -dot(a, &c.generator),
                };
                if s.is_negative() {
                    return Err(Error::RepresentationMismatch(format!("negative slack {s} at row {i}, column {j}")));
                }
                row.push(s);
            }
            data.push(row);
        }
        let labels = rows
            .iter()
            .map(|(a, b)| RowLabel { block: Block::of(b), normal: a.clone(), rhs: b.clone() })
            .collect();
        Ok(SlackMatrix { matrix: Matrix::from_rows_with_cols(&data, cols.len()), rows: labels, cols })
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// `U = [b | -A]` and `V = [1..1 0..0 ; c.. r..]` with `S = U V`.
    pub fn factors(&self) -> (Matrix, Matrix) {
        let u: Vec<Vector> = self
            .rows
            .iter()
            .map(|r| std::iter::once(r.rhs.clone()).chain(r.normal.iter().map(|x| -x)).collect())
            .collect();
        let v: Vec<Vector> = self
            .cols
            .iter()
            .map(|c| {
                let head = if c.kind == ColKind::Point { Scalar::one() } else { Scalar::zero() };
                std::iter::once(head).chain(c.generator.iter().cloned()).collect()
            })
            .collect();
        let n = self.rows.first().map(|r| r.normal.len()).or(self.cols.first().map(|c| c.generator.len())).unwrap_or(0);
        (Matrix::from_rows_with_cols(&u, n + 1), Matrix::from_cols(&v))
    }

    /// Indicator of the point columns.
    pub fn point_indicator(&self) -> Vector {
        self.cols.iter().map(|c| Scalar::int((c.kind == ColKind::Point) as i64)).collect()
    }
}

impl fmt::Display for SlackMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.nrows(), self.ncols())?;
        let dom = self.matrix.domain();
        if dom != crate::Domain::Rational {
            writeln!(f, "domain {dom}")?;
        }
        for (j, c) in self.cols.iter().enumerate() {
            let kind = if c.kind == ColKind::Point { "point" } else { "ray" };
            writeln!(f, "# col {j}: {kind} {}", join(&c.generator))?;
        }
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(f, "# row {i}: {:?} {} {}", r.block, r.rhs, join(&r.normal))?;
            writeln!(f, "{}", join(self.matrix.row(i)))?;
        }
        Ok(())
    }
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn generator_columns(v: &VRep) -> Vec<ColLabel> {
    let mut cols: Vec<ColLabel> =
        v.points.iter().map(|c| ColLabel { kind: ColKind::Point, generator: c.clone() }).collect();
    cols.extend(v.rays.iter().map(|r| ColLabel { kind: ColKind::Ray, generator: r.clone() }));
    cols
}

/// Rows in the order of `h`, columns points then rays of `v`. Lines of `v`
/// contribute no columns but must be orthogonal to every row.
pub fn build_slack(h: &HRep, v: &VRep) -> Result<SlackMatrix> {
    if h.dim != v.dim {
        return Err(Error::DimensionMismatch(format!("system in R^{} and generators in R^{}", h.dim, v.dim)));
    }
    for e in &h.eqs {
        let bad = v.points.iter().any(|c| !e.slack(c).is_zero())
            || v.rays.iter().chain(&v.lines).any(|r| !dot(&e.normal, r).is_zero());
        if bad {
            return Err(Error::RepresentationMismatch("a generator violates an equation".into()));
        }
    }
    for a in &h.ineqs {
        if v.lines.iter().any(|l| !dot(&a.normal, l).is_zero()) {
            return Err(Error::RepresentationMismatch("an inequality is unbounded along a line".into()));
        }
    }
    let rows: Vec<(Vector, Scalar)> = h.ineqs.iter().map(|a| (a.normal.clone(), a.rhs.clone())).collect();
    SlackMatrix::from_rows(&rows, generator_columns(v))
}

fn canonical_row(a: &Halfspace) -> (Vector, Scalar) {
    if a.rhs.is_zero() {
        let lead = a.normal.iter().find(|x| !x.is_zero()).unwrap().abs().inverse().unwrap();
        (scale(&a.normal, &lead), Scalar::zero())
    } else {
        let s = a.rhs.abs().inverse().unwrap();
        (scale(&a.normal, &s), &a.rhs * &s)
    }
}

/// Facets scaled to right-hand side `1`, `0` or `-1`, ordered by block and
/// then lexicographically by inward normal; columns are vertices then
/// extreme rays.
pub fn canonical_slack(p: &Polyhedron) -> Result<SlackMatrix> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if p.has_lines() {
        return Err(Error::LinesPresent);
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let mut rows: Vec<(Vector, Scalar)> = p.hrep().ineqs.iter().map(canonical_row).collect();
    rows.sort_by(|x, y| Block::of(&x.1).cmp(&Block::of(&y.1)).then_with(|| y.0.cmp(&x.0)));
    SlackMatrix::from_rows(&rows, generator_columns(p.vrep()))
}

/// Rows `D1`, `D2`, `D3` (right-hand sides 1, 0, -1) against the vertices
/// and extreme rays of `p`.
pub fn dset_slack(p: &Polyhedron, pd: &PolarData) -> Result<SlackMatrix> {
    SlackMatrix::from_rows(&pd.rows(), generator_columns(p.vrep()))
}

/// Facets against extreme rays of a pointed cone with apex at the origin.
pub fn cone_slack(p: &Polyhedron) -> Result<SlackMatrix> {
    if !p.lines().is_empty() || p.points().len() != 1 || !is_zero_vec(&p.points()[0]) {
        return Err(Error::NotPointedCone);
    }
    let rows: Vec<(Vector, Scalar)> = p.hrep().ineqs.iter().map(canonical_row).collect();
    let cols = p.rays().iter().map(|r| ColLabel { kind: ColKind::Ray, generator: r.clone() }).collect();
    SlackMatrix::from_rows(&rows, cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    /// `dim(C0) + 1`, the predicted rank.
    pub expected: usize,
    /// The prediction does not cover translated cones.
    pub translated_cone: bool,
}

impl RankReport {
    pub fn holds(&self) -> Option<bool> {
        (!self.translated_cone).then_some(self.rank == self.expected)
    }
}

/// Rank of the slack matrix against `dim(C0) + 1`.
pub fn check_rank_theorem(p: &Polyhedron) -> Result<RankReport> {
    let (c0, _) = p.decompose_lines()?;
    let s = build_slack(p.hrep(), p.vrep())?;
    Ok(RankReport {
        rank: s.matrix.rank(),
        expected: c0.dim().unwrap() + 1,
        translated_cone: c0.is_translated_cone()?.is_some(),
    })
}

/// Moves the factors `S = U V` into the coordinates of `L1⊥` spanned by the
/// pairwise orthogonal columns of `q`: `U' = U diag(1, Q D⁻¹)`,
/// `V' = diag(1, Qᵀ) V` with `D = QᵀQ`, so `V'` holds the generators of `QᵀC0`.
pub fn pointed_reduction(s: &Matrix, u: &Matrix, v: &Matrix, q: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = q.nrows();
    let k = q.ncols();
    if u.ncols() != n + 1 || v.nrows() != n + 1 {
        return Err(Error::DimensionMismatch(format!("factors do not match Q with {n} rows")));
    }
    let cols = q.col_vecs();
    for i in 0..k {
        if is_zero_vec(&cols[i]) {
            return Err(Error::QNotOrthogonal);
        }
        for j in i + 1..k {
            if !dot(&cols[i], &cols[j]).is_zero() {
                return Err(Error::QNotOrthogonal);
            }
        }
    }
    let mut right = Matrix::zeros(n + 1, k + 1);
    let mut left = Matrix::zeros(k + 1, n + 1);
    right[(0, 0)] = Scalar::one();
    left[(0, 0)] = Scalar::one();
    for (j, c) in cols.iter().enumerate() {
        let inv = dot(c, c).inverse().unwrap();
        for i in 0..n {
            right[(i + 1, j + 1)] = &c[i] * &inv;
            left[(j + 1, i + 1)] = c[i].clone();
        }
    }
    let u2 = u.mul(&right)?;
    let v2 = left.mul(v)?;
    if &u2.mul(&v2)? != s {
        return Err(Error::FactorizationMismatch("generators are not orthogonal to the lineality space".into()));
    }
    Ok((u2, v2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackIdentification {
    pub accepted: bool,
    /// 0/1 row-space vector marking point columns (1) and ray columns (0).
    pub zero_one: Option<Vector>,
    /// Whether `rowspace ∩ R₊^q = cone(rows)` holds for the rows alone.
    pub literal_cone_criterion: bool,
    /// A nonnegative row-space vector outside the cone of the rows, if any.
    pub literal_witness: Option<Vector>,
    /// Rejection witness when no candidate row completes the cone.
    pub witness: Option<Vector>,
}

/// Largest number of columns the 0/1 search accepts.
pub const MAX_IDENTIFY_COLS: usize = 24;

/// Decides whether `m` is the slack matrix of a polyhedron.
///
/// A slack matrix is the facet part of the slack matrix of the homogenized
/// cone `cone{(1,c_j), (0,r_j)}`; the facet `t >= 0` of that cone contributes
/// the point indicator as a further row. So `m` is accepted when some 0/1
/// vector `u` in its row space makes `rowspace ∩ R₊^q = cone(rows ∪ {u})`.
/// For polytopes, `u` is redundant and the plain cone criterion holds; for
/// unbounded polyhedra with a full-dimensional recession cone it does not,
/// and `literal_cone_criterion` records that difference.
pub fn is_slack_matrix(m: &Matrix) -> Result<SlackIdentification> {
    if !m.is_nonneg() {
        return Err(Error::parse("slack matrices are nonnegative"));
    }
    let q = m.ncols();
    if q > MAX_IDENTIFY_COLS {
        return Err(Error::SizeCap(format!("{q} columns, at most {MAX_IDENTIFY_COLS} supported")));
    }
    let (rref, pivots) = m.rref();
    let r = pivots.len();
    if r < 2 {
        return Err(Error::RankTooSmall(r));
    }
    let basis: Vec<Vector> = (0..r).map(|i| rref.row(i).to_vec()).collect();
    let coords = |y: &[Scalar]| -> Vector { pivots.iter().map(|&p| y[p].clone()).collect() };
    let lift = |t: &[Scalar]| -> Vector {
        (0..q).map(|j| basis.iter().zip(t).map(|(b, x)| &b[j] * x).sum()).collect()
    };

    // extreme rays of rowspace ∩ R₊^q, in pivot coordinates
    let col_ineqs: Vec<Vector> = (0..q).map(|j| basis.iter().map(|b| b[j].clone()).collect()).collect();
    let (_, nonneg_rays) = cone_generators(r, &col_ineqs, &[]);

    let rows: Vec<Vector> = m.row_vecs().iter().map(|y| coords(y)).collect();
    let outside = |gens: &[Vector]| -> Option<Vector> {
        let (lin, facets) = cone_generators(r, gens, &[]);
        nonneg_rays
            .iter()
            .find(|t| lin.iter().any(|l| !dot(l, t).is_zero()) || facets.iter().any(|h| dot(h, t).is_negative()))
            .map(|t| lift(t))
    };

    let literal_witness = outside(&rows);
    let mut candidates = zero_one_vectors(r, &lift);
    // lexicographically greatest first, all-ones last
    candidates.sort();
    candidates.reverse();
    if let Some(pos) = candidates.iter().position(|u| u.iter().all(Scalar::is_one)) {
        let ones = candidates.remove(pos);
        candidates.push(ones);
    }

    let mut witness = literal_witness.clone();
    for u in &candidates {
        let mut gens = rows.clone();
        gens.push(coords(u));
        match outside(&gens) {
            None => {
                return Ok(SlackIdentification {
                    accepted: true,
                    zero_one: Some(u.clone()),
                    literal_cone_criterion: literal_witness.is_none(),
                    literal_witness,
                    witness: None,
                })
            }
            Some(w) => {
                witness.get_or_insert(w);
            }
        }
    }
    Ok(SlackIdentification {
        accepted: false,
        zero_one: candidates.into_iter().next(),
        literal_cone_criterion: literal_witness.is_none(),
        literal_witness,
        witness,
    })
}

/// Nonzero row-space vectors with entries in {0,1}. A row-space vector is
/// fixed by its pivot entries, so only `2^rank` patterns are tried.
fn zero_one_vectors(r: usize, lift: &dyn Fn(&[Scalar]) -> Vector) -> Vec<Vector> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << r) {
        let t: Vector = (0..r).map(|i| Scalar::int((mask >> i & 1) as i64)).collect();
        let y = lift(&t);
        if y.iter().all(|x| x.is_zero() || x.is_one()) {
            out.push(y);
        }
    }
    out
}
