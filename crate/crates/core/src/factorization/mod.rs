//! Cone factorizations `M_ij = <a_i, b_j>` over the nonnegative orthant and
//! the psd cone, with exact verification and rank bounds.
//!
//! Symmetric `k x k` matrices are stored flattened: the diagonal first, then
//! the strict upper triangle row by row, off-diagonal entries unscaled. The
//! trace inner product therefore weights off-diagonal coordinates by 2.

mod bounds;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, Matrix, Vector};
use crate::polyhedron::Polyhedron;
use crate::scalar::Scalar;
use crate::{Error, Result};

pub use bounds::{block_augmentation_bound, rectangle_cover_bound, Bound, BoundRule, RankKind, MAX_BLOCK_DIM, MAX_RECT_DIM};
pub use search::{nn_rank_decide, nn_search, Decision, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeKind {
    /// `R₊^m`.
    Orthant(usize),
    /// `k x k` positive semidefinite matrices.
    Psd(usize),
}

impl ConeKind {
    /// Number of coordinates of an element.
    pub fn ambient_dim(self) -> usize {
        match self {
            ConeKind::Orthant(m) => m,
            ConeKind::Psd(k) => k * (k + 1) / 2,
        }
    }

    pub fn inner(self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        match self {
            ConeKind::Orthant(_) => dot(a, b),
            ConeKind::Psd(k) => {
                let diag: Scalar = dot(&a[..k], &b[..k]);
                let off: Scalar = dot(&a[k..], &b[k..]);
                &diag + &(&off + &off)
            }
        }
    }

    /// Coefficients `w` with `<a,b> = sum w_t a_t b_t`.
    pub fn weights(self) -> Vector {
        match self {
            ConeKind::Orthant(m) => vec![Scalar::one(); m],
            ConeKind::Psd(k) => (0..self.ambient_dim()).map(|t| Scalar::int(if t < k { 1 } else { 2 })).collect(),
        }
    }

    pub fn contains(self, x: &[Scalar]) -> bool {
        match self {
            ConeKind::Orthant(_) => x.iter().all(Scalar::is_nonneg),
            ConeKind::Psd(k) => is_psd(&unflatten(k, x)),
        }
    }
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeKind::Orthant(m) => write!(f, "orthant {m}"),
            ConeKind::Psd(k) => write!(f, "psd {k}"),
        }
    }
}

impl FromStr for ConeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let kind = it.next().unwrap_or_default();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(format!("bad cone `{s}`")))?;
        if it.next().is_some() {
            return Err(Error::parse(format!("bad cone `{s}`")));
        }
        match kind {
            "orthant" => Ok(ConeKind::Orthant(n)),
            "psd" => Ok(ConeKind::Psd(n)),
            _ => Err(Error::parse(format!("unknown cone `{kind}`"))),
        }
    }
}

/// Position of entry `(i, j)` in the flattened layout.
pub fn psd_index(k: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return i;
    }
    // rows 0..i of the strict upper triangle hold (k-1) + ... + (k-i) entries
    k + i * (2 * k - i - 1) / 2 + (j - i - 1)
}

pub fn unflatten(k: usize, x: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = x[psd_index(k, i, j)].clone();
        }
    }
    m
}

pub fn flatten(m: &Matrix) -> Vector {
    let k = m.nrows();
    let mut x = vec![Scalar::zero(); k * (k + 1) / 2];
    for i in 0..k {
        for j in i..k {
            x[psd_index(k, i, j)] = m[(i, j)].clone();
        }
    }
    x
}

/// Exact semidefiniteness of a symmetric matrix by symmetric elimination.
/// A zero pivot forces the rest of its row to vanish.
pub fn is_psd(m: &Matrix) -> bool {
    let k = m.nrows();
    if m.ncols() != k {
        return false;
    }
    let mut a = m.clone();
    for i in 0..k {
        for j in 0..k {
            if a[(i, j)] != a[(j, i)] {
                return false;
            }
        }
    }
    for p in 0..k {
        let d = a[(p, p)].clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            if (p + 1..k).any(|j| !a[(p, j)].is_zero()) {
                return false;
            }
            continue;
        }
        let inv = d.inverse().unwrap();
        for i in p + 1..k {
            if a[(p, i)].is_zero() {
                continue;
            }
            let f = &a[(p, i)] * &inv;
            for j in p + 1..k {
                let v = &f * &a[(p, j)];
                a[(i, j)] -= v;
            }
        }
    }
    true
}

/// Extra data for sets with lines: `a3` and `a3_neg` witness `+l` and `-l`
/// for each basis vector `l` of the lineality space, `f` realizes
/// `<l_i, l_j> = <a3_i, f_j>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinealityFactors {
    pub lines: Vec<Vector>,
    pub a3: Vec<Vector>,
    pub a3_neg: Vec<Vector>,
    pub f: Vec<Vector>,
}

/// `row_factors[i]` and `col_factors[j]` with `<row_i, col_j> = M_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub cone: ConeKind,
    pub row_factors: Vec<Vector>,
    pub col_factors: Vec<Vector>,
    pub lineality: Option<LinealityFactors>,
}

impl Factorization {
    /// Orthant factorization from `M = U V`: rows of `U`, columns of `V`.
    pub fn from_matrices(u: &Matrix, v: &Matrix) -> Result<Self> {
        if u.ncols() != v.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "U has {} columns but V has {} rows",
                u.ncols(),
                v.nrows()
            )));
        }
        Ok(Factorization {
            cone: ConeKind::Orthant(u.ncols()),
            row_factors: u.row_vecs(),
            col_factors: v.col_vecs(),
            lineality: None,
        })
    }

    pub fn to_matrices(&self) -> (Matrix, Matrix) {
        let m = self.cone.ambient_dim();
        (Matrix::from_rows_with_cols(&self.row_factors, m), Matrix::from_rows_with_cols(&self.col_factors, m).transpose())
    }

    /// `<row_i, col_j>` for all pairs.
    pub fn product(&self) -> Matrix {
        let rows: Vec<Vector> = self
            .row_factors
            .iter()
            .map(|a| self.col_factors.iter().map(|b| self.cone.inner(a, b)).collect())
            .collect();
        Matrix::from_rows_with_cols(&rows, self.col_factors.len())
    }

    /// The same factorization inside a larger orthant (zero padding).
    pub fn padded(&self, m: usize) -> Result<Self> {
        let ConeKind::Orthant(k) = self.cone else {
            return Err(Error::DimensionMismatch("only orthant factorizations are padded".into()));
        };
        if m < k {
            return Err(Error::DimensionMismatch(format!("cannot shrink R^{k} to R^{m}")));
        }
        let pad = |v: &Vector| {
            let mut v = v.clone();
            v.resize(m, Scalar::zero());
            v
        };
        Ok(Factorization {
            cone: ConeKind::Orthant(m),
            row_factors: self.row_factors.iter().map(pad).collect(),
            col_factors: self.col_factors.iter().map(pad).collect(),
            lineality: None,
        })
    }

    /// Trivial factorizations `M = M I` or `M = I M` through `R₊^min(p,q)`.
    pub fn trivial(m: &Matrix) -> Self {
        let (p, q) = (m.nrows(), m.ncols());
        if q <= p {
            Factorization { cone: ConeKind::Orthant(q), row_factors: m.row_vecs(), col_factors: Matrix::identity(q).col_vecs(), lineality: None }
        } else {
            Factorization { cone: ConeKind::Orthant(p), row_factors: Matrix::identity(p).row_vecs(), col_factors: m.col_vecs(), lineality: None }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub violation: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { ok: true, violation: None }
    }

    pub fn fail(msg: impl Into<String>) -> Self {
        Verdict { ok: false, violation: Some(msg.into()) }
    }
}

pub fn verify_factorization(m: &Matrix, f: &Factorization) -> Result<Verdict> {
    if f.row_factors.len() != m.nrows() || f.col_factors.len() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} factors for a {}x{} matrix",
            f.row_factors.len(),
            f.col_factors.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    let d = f.cone.ambient_dim();
    if let Some(bad) = f.row_factors.iter().chain(&f.col_factors).find(|x| x.len() != d) {
        return Err(Error::DimensionMismatch(format!("factor of length {} for a cone in R^{d}", bad.len())));
    }
    for (i, a) in f.row_factors.iter().enumerate() {
        if !f.cone.contains(a) {
            return Ok(Verdict::fail(format!("row factor {i} is not in the cone")));
        }
    }
    for (j, b) in f.col_factors.iter().enumerate() {
        if !f.cone.contains(b) {
            return Ok(Verdict::fail(format!("column factor {j} is not in the cone")));
        }
    }
    for (i, a) in f.row_factors.iter().enumerate() {
        for (j, b) in f.col_factors.iter().enumerate() {
            let got = f.cone.inner(a, b);
            if got != m[(i, j)] {
                return Ok(Verdict::fail(format!("entry ({i},{j}): product {got}, expected {}", m[(i, j)])));
            }
        }
    }
    Ok(Verdict::pass())
}

/// Polynomial in one variable, lowest degree first.
pub type Poly = Vec<Scalar>;

pub fn poly_eval(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

fn poly_degree(p: &[Scalar]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// A symmetric `k x k` matrix whose flattened entries are polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdFamily {
    pub k: usize,
    pub entries: Vec<Poly>,
}

impl PsdFamily {
    pub fn eval(&self, x: &Scalar) -> Vector {
        self.entries.iter().map(|p| poly_eval(p, x)).collect()
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|p| poly_degree(p)).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub ok: bool,
    pub samples_checked: usize,
    pub failures: Vec<String>,
}

/// Checks `<A(x), B> = target(x)` at distinct samples, enough of them to force
/// the polynomial identity, and `A(x)` psd at every sample accepted by `in_c`.
pub fn psd_verify_family(
    a: &PsdFamily,
    b: &[Scalar],
    target: &[Scalar],
    samples: &[Scalar],
    in_c: &dyn Fn(&Scalar) -> bool,
) -> Result<FamilyReport> {
    let cone = ConeKind::Psd(a.k);
    if a.entries.len() != cone.ambient_dim() || b.len() != cone.ambient_dim() {
        return Err(Error::DimensionMismatch(format!("family or B does not match psd {}", a.k)));
    }
    let mut distinct = samples.to_vec();
    distinct.sort();
    distinct.dedup();
    let needed = a.degree().max(poly_degree(target)) + 1;
    if distinct.len() < needed {
        return Err(Error::TooFewSamples { needed, got: distinct.len() });
    }
    let mut failures = Vec::new();
    if !cone.contains(b) {
        failures.push("B is not psd".to_string());
    }
    for x in &distinct {
        let ax = a.eval(x);
        let lhs = cone.inner(&ax, b);
        let rhs = poly_eval(target, x);
        if lhs != rhs {
            failures.push(format!("x = {x}: <A(x),B> = {lhs}, target {rhs}"));
        }
        if in_c(x) && !cone.contains(&ax) {
            failures.push(format!("x = {x}: A(x) is not psd"));
        }
    }
    Ok(FamilyReport { ok: failures.is_empty(), samples_checked: distinct.len(), failures })
}

/// `dim(P)` lower-bounds the psd rank of a full-dimensional line-free polyhedron.
pub fn psd_rank_lower_bound(p: &Polyhedron) -> Result<usize> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if p.has_lines() {
        return Err(Error::LinesPresent);
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(p.ambient_dim())
}

/// `ceil(6 min(m,n) / 7)`, a known upper bound on the nonnegative rank of
/// rank-three nonnegative matrices; `None` for other ranks.
pub fn shitov_report(m: &Matrix) -> Option<usize> {
    (m.rank() == 3).then(|| (6 * m.nrows().min(m.ncols())).div_ceil(7))
}
