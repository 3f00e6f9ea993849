//! Exact dense linear algebra over [`Scalar`].
//!
//! Pivoting always takes the first nonzero entry by index, so echelon forms,
//! ranks and bases are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{Domain, Scalar};
use crate::Error;

pub type Vector = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn zeros(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + c * b`
pub fn axpy(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + &(c * y)).collect()
}

/// Divide by the absolute value of the first nonzero coordinate, so the
/// direction is kept and that coordinate becomes +-1.
pub fn normalize_direction(v: &[Scalar]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(p) => {
            let inv = p.abs().inverse().unwrap();
            scale(v, &inv)
        }
    }
}

/// Scale so that the first nonzero coordinate is exactly 1 (sign may flip).
pub fn normalize_line(v: &[Scalar]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(p) => {
            let inv = p.inverse().unwrap();
            scale(v, &inv)
        }
    }
}

pub fn domain_of<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Domain {
    xs.into_iter()
        .filter_map(Scalar::radicand)
        .next()
        .map(Domain::Quadratic)
        .unwrap_or(Domain::Rational)
}

/// Pairwise-orthogonal basis of the span of `vs` (Gram-Schmidt without
/// normalization, so it stays inside the field).
pub fn orthogonal_basis(vs: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c = dot(&w, u) / dot(u, u);
            w = axpy(&w, &-c, u);
        }
        if !is_zero_vec(&w) {
            out.push(normalize_line(&w));
        }
    }
    out
}

/// Orthogonal projection of `v` onto the orthogonal complement of the span of
/// the pairwise-orthogonal vectors `basis`.
pub fn project_out(v: &[Scalar], basis: &[Vector]) -> Vector {
    let mut w = v.to_vec();
    for u in basis {
        let c = dot(&w, u) / dot(u, u);
        w = axpy(&w, &-c, u);
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self, Error> {
        let rows = r
            .entries
            .iter()
            .map(|row| row.iter().map(|s| s.parse()).collect::<Result<Vec<Scalar>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let m = if rows.is_empty() { Matrix::zeros(r.rows, r.cols) } else { Matrix::from_rows(&rows) };
        if m.rows != r.rows || m.cols != r.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix declared {}x{} but has {}x{}",
                r.rows, r.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so an
    /// empty row list still has a shape.
    pub fn from_rows_with_cols(rows: &[Vector], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_cols(cols: &[Vector]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn domain(&self) -> Domain {
        domain_of(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let rows: Vec<Vector> = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
            .collect();
        Matrix::from_rows_with_cols(&rows, self.cols + other.cols)
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_nonneg(&self) -> bool {
        self.data.iter().all(Scalar::is_nonneg)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Scalar::to_f64).collect()).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().unwrap();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&idx, &cols))
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zeros(self.cols);
                v[f] = Scalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn exact_rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn row_space_basis(m: &Matrix) -> Vec<Vector> {
    m.row_space_basis()
}

/// `offset + span(basis)`; the basis is linearly independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSubspace {
    pub offset: Vector,
    pub basis: Vec<Vector>,
}

impl AffineSubspace {
    pub fn new(offset: Vector, basis: Vec<Vector>) -> Self {
        let n = offset.len();
        let basis = if basis.is_empty() { basis } else { Matrix::from_rows_with_cols(&basis, n).row_space_basis() };
        AffineSubspace { offset, basis }
    }

    pub fn linear(basis: Vec<Vector>, ambient: usize) -> Self {
        Self::new(zeros(ambient), basis)
    }

    pub fn point(p: Vector) -> Self {
        AffineSubspace { offset: p, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn direction_matrix(&self) -> Matrix {
        Matrix::from_rows_with_cols(&self.basis, self.ambient_dim())
    }

    pub fn contains_direction(&self, v: &[Scalar]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let m = self.direction_matrix();
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows_with_cols(&rows, self.ambient_dim()).rank() == m.rank()
    }

    pub fn contains_point(&self, p: &[Scalar]) -> bool {
        self.contains_direction(&sub(p, &self.offset))
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_point(&zeros(self.ambient_dim()))
    }

    /// Linear equations `E x = f` cutting out this subspace.
    pub fn equations(&self) -> (Matrix, Vector) {
        let n = self.ambient_dim();
        let normals = self.direction_matrix().nullspace();
        let e = Matrix::from_rows_with_cols(&normals, n);
        let f = e.mul_vec(&self.offset);
        (e, f)
    }
}

/// Full solution set of `a x = b`; `None` when infeasible.
pub fn solve_affine(a: &Matrix, b: &[Scalar]) -> Result<Option<AffineSubspace>, Error> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} rows but right-hand side has {} entries",
            a.nrows(),
            b.len()
        )));
    }
    let n = a.ncols();
    let aug = a.hstack(&Matrix::from_rows_with_cols(&b.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1));
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut offset = zeros(n);
    for (i, &p) in pivots.iter().enumerate() {
        offset[p] = r[(i, n)].clone();
    }
    let basis = a.nullspace();
    Ok(Some(AffineSubspace { offset, basis }))
}

pub fn subspace_equal(s1: &AffineSubspace, s2: &AffineSubspace) -> Result<bool, Error> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in R^{} and R^{}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    Ok(s1.dim() == s2.dim()
        && s1.contains_point(&s2.offset)
        && s2.basis.iter().all(|v| s1.contains_direction(v))
        && s1.basis.iter().all(|v| s2.contains_direction(v)))
}
