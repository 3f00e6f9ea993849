//! Cone lifts `C = b + π(K ∩ L)` built from factorizations of slack
//! matrices, and their exact verification.
//!
//! A lift is assembled from rows `rhs - <normal, x> = <z, factor>`. Rows
//! marked `dual` carry a factor in `K*` and certify `π(K ∩ L) ⊆ C`; the
//! other rows pin down the lineality component of `x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::factorization::{is_psd, unflatten, verify_factorization, ConeKind, Factorization};
use crate::linalg::{add, dot, is_zero_vec, solve_affine, zeros, AffineSubspace, Matrix, Vector};
use crate::polar::PolarData;
use crate::polyhedron::{h_to_v, polyhedra_equal, HRep, Halfspace, Polyhedron, VRep};
use crate::scalar::Scalar;
use crate::slack::{cone_slack, dset_slack, ColKind, SlackMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: ColKind,
    pub generator: Vector,
    /// Element of the cone, flattened for psd cones.
    pub point: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRow {
    pub normal: Vector,
    pub rhs: Scalar,
    pub factor: Vector,
    pub dual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub cone: ConeKind,
    /// `L` inside the cone's coordinate space.
    pub slice: AffineSubspace,
    /// `π`, an `n x m` matrix.
    pub projection: Matrix,
    /// `b`; zero unless the source is a translated cone.
    pub shift: Vector,
    pub witnesses: Vec<Witness>,
    pub rows: Vec<LiftRow>,
}

impl Lift {
    pub fn target_dim(&self) -> usize {
        self.projection.nrows()
    }

    /// `b + π z`.
    pub fn image(&self, z: &[Scalar]) -> Vector {
        add(&self.projection.mul_vec(z), &self.shift)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.cone.ambient_dim();
        let n = self.shift.len();
        let bad = self.slice.ambient_dim() != m
            || self.projection.ncols() != m
            || self.projection.nrows() != n
            || self.witnesses.iter().any(|w| w.point.len() != m || w.generator.len() != n)
            || self.rows.iter().any(|r| r.factor.len() != m || r.normal.len() != n);
        if bad {
            return Err(Error::DimensionMismatch(format!("lift data does not fit {} -> R^{n}", self.cone)));
        }
        Ok(())
    }
}

fn cols_matrix(cols: &[Vector], rows: usize) -> Matrix {
    Matrix::from_rows_with_cols(cols, rows).transpose()
}

fn left_inverse(phi: &Matrix) -> Matrix {
    // invert a maximal nonsingular set of rows, zero elsewhere
    let (_, rows) = phi.transpose().rref();
    let c = phi.ncols();
    let all: Vec<usize> = (0..c).collect();
    let inv = phi.submatrix(&rows, &all).inverse().expect("pivot rows are independent");
    let mut out = Matrix::zeros(c, phi.nrows());
    for (t, &r) in rows.iter().enumerate() {
        for i in 0..c {
            out[(i, r)] = inv[(i, t)].clone();
        }
    }
    out
}

/// Solves the lift system and reads off `L`, `π` and `b`.
pub fn assemble_lift(cone: ConeKind, n: usize, rows: Vec<LiftRow>, witnesses: Vec<Witness>) -> Result<Lift> {
    let m = cone.ambient_dim();
    let w = cone.weights();
    let system: Vec<Vector> = rows
        .iter()
        .map(|r| {
            let mut row = r.normal.clone();
            row.extend(r.factor.iter().zip(&w).map(|(f, c)| f * c));
            row
        })
        .collect();
    let a = Matrix::from_rows_with_cols(&system, n + m);
    let rhs: Vector = rows.iter().map(|r| r.rhs.clone()).collect();
    let normals = Matrix::from_rows_with_cols(&rows.iter().map(|r| r.normal.clone()).collect::<Vec<_>>(), n);
    let r = normals.rank();
    if r < n {
        return Err(Error::DegenerateSystem(format!("row normals span {r} of {n} dimensions")));
    }
    let sol = solve_affine(&a, &rhs)?.ok_or(Error::InconsistentSystem)?;
    let x0 = sol.offset[..n].to_vec();
    let z0 = sol.offset[n..].to_vec();
    let xb: Vec<Vector> = sol.basis.iter().map(|v| v[..n].to_vec()).collect();
    let zb: Vec<Vector> = sol.basis.iter().map(|v| v[n..].to_vec()).collect();
    let d = zb.len();

    let zmat = cols_matrix(&zb, m);
    let xmat = cols_matrix(&xb, n);
    let through_origin = solve_affine(&zmat, &z0.iter().map(|x| -x).collect::<Vec<_>>())?;
    let (slice, projection, shift) = match through_origin {
        Some(mu) => {
            let shift = add(&x0, &xmat.mul_vec(&mu.offset));
            let proj = if d == 0 { Matrix::zeros(n, m) } else { xmat.mul(&left_inverse(&zmat))? };
            (AffineSubspace::linear(zb, m), proj, shift)
        }
        None => {
            let mut phi_cols = vec![z0.clone()];
            phi_cols.extend(zb.iter().cloned());
            let mut x_cols = vec![x0];
            x_cols.extend(xb);
            let phi = cols_matrix(&phi_cols, m);
            let proj = cols_matrix(&x_cols, n).mul(&left_inverse(&phi))?;
            (AffineSubspace::new(z0, zb), proj, zeros(n))
        }
    };
    Ok(Lift { cone, slice, projection, shift, witnesses, rows })
}

fn slack_rows(s: &SlackMatrix, f: &Factorization) -> Result<(Vec<LiftRow>, Vec<Witness>)> {
    let v = verify_factorization(&s.matrix, f)?;
    if !v.ok {
        return Err(Error::FactorizationMismatch(v.violation.unwrap_or_default()));
    }
    let rows = s
        .rows
        .iter()
        .zip(&f.row_factors)
        .map(|(r, b)| LiftRow { normal: r.normal.clone(), rhs: r.rhs.clone(), factor: b.clone(), dual: true })
        .collect();
    let witnesses = s
        .cols
        .iter()
        .zip(&f.col_factors)
        .map(|(c, a)| Witness { kind: c.kind, generator: c.generator.clone(), point: a.clone() })
        .collect();
    Ok((rows, witnesses))
}

fn slack_dim(s: &SlackMatrix) -> usize {
    s.rows.first().map(|r| r.normal.len()).or(s.cols.first().map(|c| c.generator.len())).unwrap_or(0)
}

/// Lift from a slack matrix whose rows carry `(normal, rhs)` labels and
/// whose columns carry generators; row factors become dual factors, column
/// factors become witnesses.
pub fn build_lift_from_slack(s: &SlackMatrix, f: &Factorization) -> Result<Lift> {
    let (rows, witnesses) = slack_rows(s, f)?;
    assemble_lift(f.cone, slack_dim(s), rows, witnesses)
}

fn require_line_free_full(p: &Polyhedron) -> Result<()> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if p.has_lines() {
        return Err(Error::LinesPresent);
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(())
}

/// `f` factorizes the D-set slack matrix of `p` (rows D1, D2, D3; columns
/// vertices then extreme rays).
pub fn build_lift(p: &Polyhedron, pd: &PolarData, f: &Factorization) -> Result<Lift> {
    require_line_free_full(p)?;
    if p.is_translated_cone()?.is_some() {
        return Err(Error::TranslatedCone);
    }
    let lift = build_lift_from_slack(&dset_slack(p, pd)?, f)?;
    if lift.slice.contains_origin() {
        return Err(Error::DegenerateSystem("the slice passes through the origin".into()));
    }
    Ok(lift)
}

/// `f` factorizes the facet-by-extreme-ray slack of a pointed cone.
pub fn build_cone_lift(p: &Polyhedron, f: &Factorization) -> Result<Lift> {
    let s = cone_slack(p)?;
    let (rows, mut witnesses) = slack_rows(&s, f)?;
    let n = p.ambient_dim();
    witnesses.insert(0, Witness { kind: ColKind::Point, generator: zeros(n), point: zeros(f.cone.ambient_dim()) });
    assemble_lift(f.cone, n, rows, witnesses)
}

/// `p = b + C0`: lifts `C0` and records the shift `b`. `f` factorizes the
/// cone slack of `C0`.
pub fn build_translated_cone_lift(p: &Polyhedron, f: &Factorization) -> Result<Lift> {
    let apex = p.is_translated_cone()?.ok_or(Error::NotPointedCone)?;
    let minus: Vector = apex.iter().map(|x| -x).collect();
    let c0 = p.translate(&minus)?;
    let (mut rows, mut witnesses) = slack_rows(&cone_slack(&c0)?, f)?;
    for r in &mut rows {
        r.rhs = dot(&r.normal, &apex);
    }
    // the apex is witnessed by the origin of the cone
    witnesses.insert(0, Witness { kind: ColKind::Point, generator: apex, point: zeros(f.cone.ambient_dim()) });
    assemble_lift(f.cone, p.ambient_dim(), rows, witnesses)
}

/// `p = C0 + span(lines)`. The factorization covers the D-set slack of `p`
/// and carries lineality factors: `a3` / `a3_neg` witness `+l` / `-l` and
/// `f` realizes `<x, l> = <z, f(l)>`.
pub fn build_lift_with_lines(p: &Polyhedron, pd: &PolarData, f: &Factorization) -> Result<Lift> {
    if !p.has_lines() {
        return build_lift(p, pd, f);
    }
    let (c0, _) = p.decompose_lines()?;
    if c0.is_translated_cone()?.is_some() {
        return Err(Error::TranslatedComponent);
    }
    let lf = f.lineality.as_ref().ok_or(Error::MissingLinealityFactors)?;
    let n = p.ambient_dim();
    let k = lf.lines.len();
    if lf.a3.len() != k || lf.a3_neg.len() != k || lf.f.len() != k {
        return Err(Error::MissingLinealityFactors);
    }
    let given = Matrix::from_rows_with_cols(&lf.lines, n);
    let ours = Matrix::from_rows_with_cols(p.lines(), n);
    if given.rank() != k || k != ours.rank() || given.vstack(&ours).rank() != k {
        return Err(Error::DimensionMismatch("lineality factors do not match the lines of the polyhedron".into()));
    }
    let s = dset_slack(p, pd)?;
    let (mut rows, mut witnesses) = slack_rows(&s, f)?;

    // the remaining factorization conditions on the lineality part
    let cone = f.cone;
    for (i, l) in lf.lines.iter().enumerate() {
        for (sign, a) in [(1, &lf.a3[i]), (-1, &lf.a3_neg[i])] {
            if !cone.contains(a) {
                return Err(Error::FactorizationMismatch(format!("line witness {i} is outside the cone")));
            }
            if f.row_factors.iter().any(|b| !cone.inner(a, b).is_zero()) {
                return Err(Error::FactorizationMismatch(format!("line witness {i} has nonzero slack")));
            }
            for (j, lj) in lf.lines.iter().enumerate() {
                if cone.inner(a, &lf.f[j]) != &Scalar::int(sign) * &dot(l, lj) {
                    return Err(Error::FactorizationMismatch(format!("line witness {i} against F({j})")));
                }
            }
        }
        for w in &witnesses {
            if cone.inner(&w.point, &lf.f[i]) != dot(&w.generator, l) {
                return Err(Error::FactorizationMismatch(format!("generator witness against F({i})")));
            }
        }
    }

    for (l, fl) in lf.lines.iter().zip(&lf.f) {
        rows.push(LiftRow { normal: l.iter().map(|x| -x).collect(), rhs: Scalar::zero(), factor: fl.clone(), dual: false });
    }
    for (i, l) in lf.lines.iter().enumerate() {
        witnesses.push(Witness { kind: ColKind::Ray, generator: l.clone(), point: lf.a3[i].clone() });
        let neg: Vector = l.iter().map(|x| -x).collect();
        witnesses.push(Witness { kind: ColKind::Ray, generator: neg, point: lf.a3_neg[i].clone() });
    }
    assemble_lift(cone, n, rows, witnesses)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    /// `false` when only witnesses were checked.
    pub exact: bool,
    pub detail: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check { passed: true, exact: true, detail: None }
    }
    fn fail(msg: impl Into<String>) -> Self {
        Check { passed: false, exact: true, detail: Some(msg.into()) }
    }
    fn loose(mut self) -> Self {
        self.exact = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    /// Every vertex has a witness in `K ∩ L` mapping onto it.
    pub generators: Check,
    /// Dual identities vanish on `L`, so `π(K ∩ L) ⊆ C`.
    pub dual: Check,
    /// `π(K ∩ 0⁺L) = 0⁺C`.
    pub recession: Check,
    /// `L` meets the interior of `K`; `None` when undecided.
    pub proper: Option<bool>,
    pub origin_in_slice: bool,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.generators.passed && self.dual.passed && self.recession.passed
    }
}

fn fmt_vec(v: &[Scalar]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for LiftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, tag: &str, c: &Check| {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let level = if c.exact { "" } else { " (witness level)" };
            match &c.detail {
                Some(d) => writeln!(f, "{tag} {verdict}{level}: {d}"),
                None => writeln!(f, "{tag} {verdict}{level}"),
            }
        };
        line(f, "(a) generators", &self.generators)?;
        line(f, "(b) dual", &self.dual)?;
        line(f, "(c) recession", &self.recession)?;
        let proper = match self.proper {
            Some(true) => "yes",
            Some(false) => "no",
            None => "undecided",
        };
        writeln!(f, "proper {proper}")?;
        writeln!(f, "origin in slice {}", if self.origin_in_slice { "yes" } else { "no" })
    }
}

/// Exact check of conditions (a), (b) and (c) plus properness.
pub fn verify_lift(p: &Polyhedron, lift: &Lift) -> Result<LiftReport> {
    lift.validate()?;
    if lift.target_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "lift maps to R^{} but the polyhedron lives in R^{}",
            lift.target_dim(),
            p.ambient_dim()
        )));
    }
    Ok(LiftReport {
        generators: check_points(p, lift),
        dual: check_dual(p, lift),
        recession: check_recession(p, lift)?,
        proper: properness(lift)?,
        origin_in_slice: lift.slice.contains_origin(),
    })
}

fn point_witness_ok(lift: &Lift, w: &Witness) -> bool {
    lift.cone.contains(&w.point) && lift.slice.contains_point(&w.point) && lift.image(&w.point) == w.generator
}

fn ray_witness_ok(lift: &Lift, w: &Witness) -> bool {
    lift.cone.contains(&w.point)
        && lift.slice.contains_direction(&w.point)
        && lift.projection.mul_vec(&w.point) == w.generator
}

fn check_points(p: &Polyhedron, lift: &Lift) -> Check {
    for x in p.points() {
        let mut found = lift.witnesses.iter().filter(|w| w.kind == ColKind::Point && &w.generator == x);
        match found.next() {
            None => return Check::fail(format!("no witness for vertex {}", fmt_vec(x))),
            Some(w) if !point_witness_ok(lift, w) => {
                return Check::fail(format!("witness for vertex {} is not in K ∩ L over it", fmt_vec(x)))
            }
            Some(_) => {}
        }
    }
    Check::pass()
}

fn check_dual(p: &Polyhedron, lift: &Lift) -> Check {
    let cone = lift.cone;
    let z0 = &lift.slice.offset;
    for (i, r) in lift.rows.iter().enumerate().filter(|(_, r)| r.dual) {
        if !cone.contains(&r.factor) {
            return Check::fail(format!("dual factor {i} is outside the dual cone"));
        }
        let at_offset = &(&r.rhs - &dot(&r.normal, &lift.image(z0))) - &cone.inner(z0, &r.factor);
        let along = lift
            .slice
            .basis
            .iter()
            .all(|d| (-dot(&r.normal, &lift.projection.mul_vec(d)) - cone.inner(d, &r.factor)).is_zero());
        if !at_offset.is_zero() || !along {
            return Check::fail(format!("dual identity {i} does not vanish on the slice"));
        }
    }
    let n = p.ambient_dim();
    let halfspaces: Vec<Halfspace> =
        lift.rows.iter().filter(|r| r.dual).map(|r| Halfspace::new(r.normal.clone(), r.rhs.clone())).collect();
    let described = HRep::new(n, halfspaces, Vec::new()).and_then(Polyhedron::from_h);
    match described.and_then(|q| polyhedra_equal(&q, p)) {
        Ok(true) => Check::pass(),
        Ok(false) => Check::fail("the dual rows cut out a different set"),
        Err(Error::EmptyPolyhedron) => Check::fail("the dual rows cut out the empty set"),
        Err(e) => Check::fail(e.to_string()),
    }
}

/// Generators of `{ offset + B mu >= 0 }` mapped back to the cone's coordinates.
fn orthant_section(slice: &AffineSubspace) -> Result<Option<VRep>> {
    let m = slice.ambient_dim();
    let d = slice.dim();
    if d == 0 {
        let feasible = slice.offset.iter().all(Scalar::is_nonneg);
        return Ok(feasible.then(|| VRep { dim: m, points: vec![slice.offset.clone()], rays: vec![], lines: vec![] }));
    }
    let ineqs = (0..m)
        .map(|t| Halfspace::new(slice.basis.iter().map(|b| -&b[t]).collect(), slice.offset[t].clone()))
        .collect();
    let h = HRep::new(d, ineqs, Vec::new())?;
    let v = match h_to_v(&h) {
        Ok(v) => v,
        Err(Error::EmptyPolyhedron) => return Ok(None),
        Err(e) => return Err(e),
    };
    let to_z = |mu: &Vector, with_offset: bool| {
        let mut z = if with_offset { slice.offset.clone() } else { zeros(m) };
        for (c, b) in mu.iter().zip(&slice.basis) {
            z = crate::linalg::axpy(&z, c, b);
        }
        z
    };
    Ok(Some(VRep {
        dim: m,
        points: v.points.iter().map(|mu| to_z(mu, true)).collect(),
        rays: v.rays.iter().map(|mu| to_z(mu, false)).collect(),
        lines: v.lines.iter().map(|mu| to_z(mu, false)).collect(),
    }))
}

/// `π(K ∩ L) + b` for an orthant lift, by double description.
pub fn orthant_image(lift: &Lift) -> Result<Polyhedron> {
    if !matches!(lift.cone, ConeKind::Orthant(_)) {
        return Err(Error::DimensionMismatch("images are computed for orthant lifts only".into()));
    }
    let n = lift.target_dim();
    let Some(v) = orthant_section(&lift.slice)? else {
        return Ok(Polyhedron::empty(n));
    };
    let q = Polyhedron::from_v(v)?;
    q.linear_image(&lift.projection)?.translate(&lift.shift)
}

fn recession_directions(p: &Polyhedron) -> Vec<Vector> {
    let mut dirs: Vec<Vector> = p.rays().to_vec();
    for l in p.lines() {
        dirs.push(l.clone());
        dirs.push(l.iter().map(|x| -x).collect());
    }
    dirs
}

fn check_recession(p: &Polyhedron, lift: &Lift) -> Result<Check> {
    let rec = p.recession_cone()?;
    match lift.cone {
        ConeKind::Orthant(m) => {
            let dirs = AffineSubspace::linear(lift.slice.basis.clone(), m);
            let v = orthant_section(&dirs)?.expect("a cone section contains the origin");
            let image = Polyhedron::from_v(v)?.linear_image(&lift.projection)?;
            if polyhedra_equal(&image, &rec)? {
                Ok(Check::pass())
            } else {
                Ok(Check::fail(format!("π(K ∩ 0⁺L) = {} but 0⁺C = {}", describe_cone(&image), describe_cone(&rec))))
            }
        }
        ConeKind::Psd(k) => {
            let outer = facial_outer_bound(k, &lift.slice.basis);
            let image: Vec<Vector> = outer.iter().map(|d| lift.projection.mul_vec(d)).collect();
            let span = AffineSubspace::linear(image.clone(), p.ambient_dim());
            if let Some(r) = recession_directions(p).into_iter().find(|r| !span.contains_direction(r)) {
                let what = if span.dim() == 0 {
                    "π(K ∩ 0⁺L) = {0}".to_string()
                } else {
                    format!("π(K ∩ 0⁺L) lies in a {}-dimensional subspace", span.dim())
                };
                return Ok(Check::fail(format!("{what}, missing the direction {} of 0⁺C", fmt_vec(&r))));
            }
            for r in recession_directions(p) {
                let ok = lift.witnesses.iter().any(|w| w.kind == ColKind::Ray && w.generator == r && ray_witness_ok(lift, w));
                if !ok {
                    return Ok(Check::fail(format!("no witness for the direction {}", fmt_vec(&r))).loose());
                }
            }
            Ok(Check::pass().loose())
        }
    }
}

fn describe_cone(c: &Polyhedron) -> String {
    if c.rays().is_empty() && c.lines().is_empty() {
        return "{0}".into();
    }
    let mut parts: Vec<String> = c.rays().iter().map(|r| fmt_vec(r)).collect();
    parts.extend(c.lines().iter().map(|l| format!("±{}", fmt_vec(l))));
    format!("cone{{{}}}", parts.join(", "))
}

/// Subspace containing `S₊ᵏ ∩ span(basis)`: a diagonal entry that vanishes
/// on the span forces its whole row and column to vanish on the psd part.
fn facial_outer_bound(k: usize, basis: &[Vector]) -> Vec<Vector> {
    let dim = k * (k + 1) / 2;
    let mut span: Vec<Vector> = basis.to_vec();
    loop {
        let mut forced: Vec<usize> = Vec::new();
        for i in 0..k {
            if span.iter().all(|b| b[i].is_zero()) {
                for j in 0..k {
                    if j != i {
                        let t = crate::factorization::psd_index(k, i.min(j), i.max(j));
                        if span.iter().any(|b| !b[t].is_zero()) {
                            forced.push(t);
                        }
                    }
                }
            }
        }
        if forced.is_empty() || span.is_empty() {
            return span;
        }
        // combinations of the span with the forced coordinates zero
        let coeffs: Vec<Vector> = forced.iter().map(|&t| span.iter().map(|b| b[t].clone()).collect()).collect();
        let kernel = Matrix::from_rows_with_cols(&coeffs, span.len()).nullspace();
        span = kernel
            .iter()
            .map(|c| c.iter().zip(&span).fold(zeros(dim), |acc, (x, b)| crate::linalg::axpy(&acc, x, b)))
            .collect();
    }
}

fn properness(lift: &Lift) -> Result<Option<bool>> {
    match lift.cone {
        ConeKind::Orthant(m) => {
            let Some(v) = orthant_section(&lift.slice)? else {
                return Ok(Some(false));
            };
            let reaches = |t: usize| {
                v.points.iter().chain(&v.rays).any(|g| g[t].is_positive()) || v.lines.iter().any(|g| !g[t].is_zero())
            };
            Ok(Some((0..m).all(reaches)))
        }
        ConeKind::Psd(k) => {
            let pts: Vec<&Witness> = lift.witnesses.iter().filter(|w| w.kind == ColKind::Point).collect();
            if pts.is_empty() || !pts.iter().all(|w| lift.cone.contains(&w.point) && lift.slice.contains_point(&w.point)) {
                return Ok(None);
            }
            let sum = pts.iter().fold(zeros(lift.cone.ambient_dim()), |acc, w| add(&acc, &w.point));
            let mean = unflatten(k, &sum);
            // a psd matrix of full rank is positive definite
            Ok((is_psd(&mean) && mean.rank() == k).then_some(true))
        }
    }
}

/// The slice of `Hx + Uy = d` in `y` alone, with `x` eliminated.
pub fn eliminate_presentation(h: &Matrix, u: &Matrix, d: &[Scalar]) -> Result<AffineSubspace> {
    if h.nrows() != u.nrows() || h.nrows() != d.len() {
        return Err(Error::DimensionMismatch(format!(
            "H has {} rows, U has {}, d has {}",
            h.nrows(),
            u.nrows(),
            d.len()
        )));
    }
    let n = h.ncols();
    let m = u.ncols();
    let sol = solve_affine(&h.hstack(u), d)?.ok_or(Error::InconsistentSystem)?;
    let basis: Vec<Vector> = sol.basis.iter().map(|v| v[n..].to_vec()).filter(|v| !is_zero_vec(v)).collect();
    let offset = sol.offset[n..].to_vec();
    debug_assert_eq!(offset.len(), m);
    Ok(if basis.is_empty() { AffineSubspace::point(offset) } else { AffineSubspace::new(offset, basis) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::LinealityFactors;
    use crate::linalg::unit;
    use crate::polar::compute_d_sets;
    use crate::slack::canonical_slack;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn poly_h(rows: &[(&[i64], i64)]) -> Polyhedron {
        let n = rows[0].0.len();
        let ineqs = rows.iter().map(|(a, b)| Halfspace::new(v(a), Scalar::int(*b))).collect();
        Polyhedron::from_h(HRep::new(n, ineqs, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn simplex_identity_lift() {
        // x >= 0, y >= 0, x + y <= 1
        let p = poly_h(&[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)]);
        let pd = compute_d_sets(&p).unwrap();
        let s = dset_slack(&p, &pd).unwrap();
        let f = Factorization::trivial(&s.matrix);
        let lift = build_lift(&p, &pd, &f).unwrap();
        let r = verify_lift(&p, &lift).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.proper, Some(true));
        assert!(!r.origin_in_slice);
        assert!(polyhedra_equal(&orthant_image(&lift).unwrap(), &p).unwrap());
    }

    #[test]
    fn translated_cone_is_rejected() {
        let p = poly_h(&[(&[-1, 0], 1), (&[0, -1], 0)]);
        let pd = compute_d_sets(&p).unwrap();
        let s = dset_slack(&p, &pd).unwrap();
        assert_eq!(build_lift(&p, &pd, &Factorization::trivial(&s.matrix)), Err(Error::TranslatedCone));
    }

    #[test]
    fn cone_lifts() {
        let quadrant = poly_h(&[(&[-1, 0], 0), (&[0, -1], 0)]);
        let s = cone_slack(&quadrant).unwrap();
        let lift = build_cone_lift(&quadrant, &Factorization::trivial(&s.matrix)).unwrap();
        assert!(verify_lift(&quadrant, &lift).unwrap().passed());
        assert!(lift.slice.contains_origin());

        // cone{(1,0),(1,1)}: y >= 0, y <= x
        let wedge = poly_h(&[(&[0, -1], 0), (&[-1, 1], 0)]);
        let s = cone_slack(&wedge).unwrap();
        let lift = build_cone_lift(&wedge, &Factorization::trivial(&s.matrix)).unwrap();
        let r = verify_lift(&wedge, &lift).unwrap();
        assert!(r.passed(), "{r}");
        assert!(polyhedra_equal(&orthant_image(&lift).unwrap(), &wedge).unwrap());

        // x >= -1 shifted to R₊
        let ray = poly_h(&[(&[-1], 1)]);
        let s = cone_slack(&ray.translate(&v(&[1])).unwrap()).unwrap();
        let lift = build_translated_cone_lift(&ray, &Factorization::trivial(&s.matrix)).unwrap();
        assert_eq!(lift.shift, v(&[-1]));
        assert!(verify_lift(&ray, &lift).unwrap().passed());
    }

    #[test]
    fn wrong_factorization() {
        let p = poly_h(&[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)]);
        let pd = compute_d_sets(&p).unwrap();
        let s = dset_slack(&p, &pd).unwrap();
        let mut f = Factorization::trivial(&s.matrix);
        f.row_factors[0][0] = Scalar::int(7);
        assert!(matches!(build_lift(&p, &pd, &f), Err(Error::FactorizationMismatch(_))));
    }

    #[test]
    fn slab_with_lines() {
        // 0 <= y <= 1 in R², lineality along x
        let p = poly_h(&[(&[0, 1], 1), (&[0, -1], 0)]);
        let pd = compute_d_sets(&p).unwrap();
        let s = dset_slack(&p, &pd).unwrap();
        assert_eq!(s.matrix, Matrix::from_i64(&[&[1, 0], &[0, 1]]));
        let e = |i| unit(4, i);
        let f = Factorization {
            cone: ConeKind::Orthant(4),
            row_factors: vec![e(0), e(1)],
            col_factors: vec![e(0), e(1)],
            lineality: Some(LinealityFactors {
                lines: vec![v(&[1, 0])],
                a3: vec![e(2)],
                a3_neg: vec![e(3)],
                f: vec![v(&[0, 0, 1, -1])],
            }),
        };
        let lift = build_lift_with_lines(&p, &pd, &f).unwrap();
        assert_eq!(lift.image(&v(&[0, 1, 5, 2])), v(&[3, 1]));
        let r = verify_lift(&p, &lift).unwrap();
        assert!(r.passed(), "{r}");
        assert!(polyhedra_equal(&orthant_image(&lift).unwrap(), &p).unwrap());

        let mut no_lines = f.clone();
        no_lines.lineality = None;
        assert_eq!(build_lift_with_lines(&p, &pd, &no_lines), Err(Error::MissingLinealityFactors));
    }

    #[test]
    fn full_line_rejected() {
        let line = Polyhedron::from_v(VRep::new(1, vec![v(&[0])], vec![], vec![v(&[1])]).unwrap()).unwrap();
        let pd = compute_d_sets(&line).unwrap();
        let f = Factorization {
            cone: ConeKind::Orthant(1),
            row_factors: vec![],
            col_factors: vec![v(&[0])],
            lineality: None,
        };
        assert_eq!(build_lift_with_lines(&line, &pd, &f), Err(Error::TranslatedComponent));
    }

    #[test]
    fn psd_lift_missing_recession() {
        // C = {x >= -1}, L = {a11 = 1, a13 = a23 = 0, a33 = a12 + 1}, π reads a12
        let c = poly_h(&[(&[-1], 1)]);
        let slice = AffineSubspace::new(v(&[1, 0, 1, 0, 0, 0]), vec![v(&[0, 1, 0, 0, 0, 0]), v(&[0, 0, 1, 1, 0, 0])]);
        let lift = Lift {
            cone: ConeKind::Psd(3),
            slice,
            projection: Matrix::from_i64(&[&[0, 0, 0, 1, 0, 0]]),
            shift: v(&[0]),
            witnesses: vec![Witness { kind: ColKind::Point, generator: v(&[-1]), point: v(&[1, 1, 0, -1, 0, 0]) }],
            rows: vec![LiftRow { normal: v(&[-1]), rhs: Scalar::one(), factor: v(&[0, 0, 1, 0, 0, 0]), dual: true }],
        };
        let r = verify_lift(&c, &lift).unwrap();
        assert!(r.generators.passed && r.dual.passed, "{r}");
        assert!(!r.recession.passed && r.recession.exact);
        assert!(r.recession.detail.as_deref().unwrap().contains("π(K ∩ 0⁺L) = {0}"));
    }

    #[test]
    fn elimination() {
        // simplex: y = d - Hx with x free is a 2-dimensional slice of R³
        let h = Matrix::from_i64(&[&[-1, 0], &[0, -1], &[1, 1]]);
        let s = eliminate_presentation(&h, &Matrix::identity(3), &v(&[0, 0, 1])).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(!s.contains_point(&v(&[1, 1, 1])));
        assert!(s.contains_point(&v(&[0, 0, 1])) && s.contains_point(&v(&[1, 0, 0])));
        let pt = eliminate_presentation(&Matrix::zeros(2, 0), &Matrix::identity(2), &v(&[3, 4])).unwrap();
        assert_eq!(pt, AffineSubspace::point(v(&[3, 4])));
        assert_eq!(
            eliminate_presentation(&Matrix::zeros(2, 0), &Matrix::from_i64(&[&[1], &[1]]), &v(&[1, 2])),
            Err(Error::InconsistentSystem)
        );
    }

    #[test]
    fn canonical_factorization_lift_of_square() {
        let p = poly_h(&[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]);
        let pd = compute_d_sets(&p).unwrap();
        let s = dset_slack(&p, &pd).unwrap();
        assert_eq!(s.matrix.nrows(), canonical_slack(&p).unwrap().matrix.nrows());
        let lift = build_lift(&p, &pd, &Factorization::trivial(&s.matrix)).unwrap();
        assert!(verify_lift(&p, &lift).unwrap().passed());
    }
}
