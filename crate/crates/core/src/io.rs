//! Plain-text formats. Every scalar uses the canonical syntax of
//! [`Scalar`]; `#` starts a comment.
//!
//! Polyhedra:
//! ```text
//! H
//! Q(sqrt 3)
//! ineq a1 ... an | b
//! eq a1 ... an | b
//! ```
//! or `V` followed by `point`, `ray` and `line` rows. A `dim n` line is
//! only needed when there are no rows.
//!
//! Matrices: `rows cols`, optionally `domain Q(sqrt d)`, then the rows.
//!
//! Lifts: a cone line (`orthant m` or `psd k`) and then `target n`,
//! `offset`, `basis`, `projection`, `shift`, `witness` and `row` lines.
//! Psd coordinates are the diagonal followed by the strict upper triangle
//! row by row.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::factorization::ConeKind;
use crate::lift::{Lift, LiftRow, Witness};
use crate::linalg::{AffineSubspace, Matrix, Vector};
use crate::polyhedron::{HRep, Halfspace, Polyhedron, VRep};
use crate::scalar::{Domain, Scalar};
use crate::slack::ColKind;
use crate::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn scalars(words: &str, domain: Domain, line: usize) -> Result<Vector> {
    words
        .split_whitespace()
        .map(|w| {
            let x = Scalar::from_str(w).map_err(|e| at_line(line, e))?;
            if !domain.contains(&x) {
                return Err(Error::parse(format!("line {line}: {w} is outside {domain}")));
            }
            Ok(x)
        })
        .collect()
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::parse(format!("line {line}: {m}")),
        e => Error::parse(format!("line {line}: {e}")),
    }
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// A polyhedron file as written, with rows in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyFile {
    H { domain: Domain, rep: HRep },
    V { domain: Domain, rep: VRep },
}

impl PolyFile {
    pub fn domain(&self) -> Domain {
        match self {
            PolyFile::H { domain, .. } | PolyFile::V { domain, .. } => *domain,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PolyFile::H { rep, .. } => rep.dim,
            PolyFile::V { rep, .. } => rep.dim,
        }
    }

    pub fn polyhedron(&self) -> Result<Polyhedron> {
        match self {
            PolyFile::H { rep, .. } => Polyhedron::from_h(rep.clone()),
            PolyFile::V { rep, .. } => Polyhedron::from_v(rep.clone()),
        }
    }
}

pub fn parse_poly_file(text: &str) -> Result<PolyFile> {
    let mut lines = content_lines(text);
    let (_, header) = lines.next().ok_or_else(|| Error::parse("empty polyhedron file"))?;
    let is_h = match header {
        "H" => true,
        "V" => false,
        other => return Err(Error::parse(format!("line 1: expected `H` or `V`, found `{other}`"))),
    };
    let (dl, dline) = lines.next().ok_or_else(|| Error::parse("missing domain line"))?;
    let domain = Domain::from_str(dline).map_err(|e| at_line(dl, e))?;

    let mut dim: Option<usize> = None;
    let mut set_dim = |n: usize, line: usize| -> Result<()> {
        match dim {
            Some(d) if d != n => Err(Error::parse(format!("line {line}: length {n}, expected {d}"))),
            _ => {
                dim = Some(n);
                Ok(())
            }
        }
    };
    let (mut ineqs, mut eqs) = (Vec::new(), Vec::new());
    let (mut points, mut rays, mut lns) = (Vec::new(), Vec::new(), Vec::new());
    for (ln, line) in lines {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match (is_h, tag) {
            (_, "dim") => {
                let n = rest.trim().parse().map_err(|_| Error::parse(format!("line {ln}: bad dimension")))?;
                set_dim(n, ln)?;
            }
            (true, "ineq" | "eq") => {
                let (lhs, rhs) =
                    rest.split_once('|').ok_or_else(|| Error::parse(format!("line {ln}: missing `|`")))?;
                let a = scalars(lhs, domain, ln)?;
                let b = scalars(rhs, domain, ln)?;
                if b.len() != 1 {
                    return Err(Error::parse(format!("line {ln}: expected one right-hand side")));
                }
                set_dim(a.len(), ln)?;
                let h = Halfspace::new(a, b.into_iter().next().unwrap());
                if tag == "ineq" {
                    ineqs.push(h)
                } else {
                    eqs.push(h)
                }
            }
            (false, "point" | "ray" | "line") => {
                let v = scalars(rest, domain, ln)?;
                set_dim(v.len(), ln)?;
                match tag {
                    "point" => points.push(v),
                    "ray" => rays.push(v),
                    _ => lns.push(v),
                }
            }
            _ => return Err(Error::parse(format!("line {ln}: unexpected `{tag}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::parse("no rows and no `dim` line"))?;
    Ok(if is_h {
        PolyFile::H { domain, rep: HRep::new(dim, ineqs, eqs)? }
    } else {
        PolyFile::V { domain, rep: VRep::new(dim, points, rays, lns)? }
    })
}

pub fn parse_polyhedron(text: &str) -> Result<Polyhedron> {
    parse_poly_file(text)?.polyhedron()
}

pub fn write_hrep(h: &HRep, domain: Domain) -> String {
    let mut s = format!("H\n{domain}\n");
    if h.ineqs.is_empty() && h.eqs.is_empty() {
        writeln!(s, "dim {}", h.dim).unwrap();
    }
    for a in &h.ineqs {
        writeln!(s, "ineq {} | {}", join(&a.normal), a.rhs).unwrap();
    }
    for a in &h.eqs {
        writeln!(s, "eq {} | {}", join(&a.normal), a.rhs).unwrap();
    }
    s
}

pub fn write_vrep(v: &VRep, domain: Domain) -> String {
    let mut s = format!("V\n{domain}\n");
    if v.points.is_empty() && v.rays.is_empty() && v.lines.is_empty() {
        writeln!(s, "dim {}", v.dim).unwrap();
    }
    for (tag, vs) in [("point", &v.points), ("ray", &v.rays), ("line", &v.lines)] {
        for x in vs {
            writeln!(s, "{tag} {}", join(x)).unwrap();
        }
    }
    s
}

pub fn write_poly_file(p: &PolyFile) -> String {
    match p {
        PolyFile::H { domain, rep } => write_hrep(rep, *domain),
        PolyFile::V { domain, rep } => write_vrep(rep, *domain),
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = content_lines(text).peekable();
    let (_, shape) = lines.next().ok_or_else(|| Error::parse("empty matrix file"))?;
    let dims: Vec<usize> = shape
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| Error::parse(format!("line 1: bad shape `{shape}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::parse(format!("line 1: expected `rows cols`, found `{shape}`")));
    };
    let mut domain = Domain::Rational;
    if let Some((ln, l)) = lines.peek().copied() {
        if let Some(d) = l.strip_prefix("domain") {
            domain = Domain::from_str(d.trim()).map_err(|e| at_line(ln, e))?;
            lines.next();
        }
    }
    let mut data = Vec::with_capacity(rows);
    for (ln, l) in lines {
        let row = scalars(l, domain, ln)?;
        if row.len() != cols {
            return Err(Error::parse(format!("line {ln}: {} entries, expected {cols}", row.len())));
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(Error::parse(format!("{} rows, expected {rows}", data.len())));
    }
    Ok(Matrix::from_rows_with_cols(&data, cols))
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut s = format!("{} {}\n", m.nrows(), m.ncols());
    let dom = m.domain();
    if dom != Domain::Rational {
        writeln!(s, "domain {dom}").unwrap();
    }
    for i in 0..m.nrows() {
        writeln!(s, "{}", join(m.row(i))).unwrap();
    }
    s
}

/// `offset` and `basis` lines, optionally after a `domain` line.
pub fn parse_affine(text: &str) -> Result<AffineSubspace> {
    let mut domain = Domain::Rational;
    let mut offset: Option<Vector> = None;
    let mut basis = Vec::new();
    for (ln, line) in content_lines(text) {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match tag {
            "domain" => domain = Domain::from_str(rest).map_err(|e| at_line(ln, e))?,
            "offset" => offset = Some(scalars(rest, domain, ln)?),
            "basis" => basis.push(scalars(rest, domain, ln)?),
            t => return Err(Error::parse(format!("line {ln}: unexpected `{t}`"))),
        }
    }
    let offset = offset.ok_or_else(|| Error::parse("missing `offset` line"))?;
    if let Some(b) = basis.iter().find(|b| b.len() != offset.len()) {
        return Err(Error::parse(format!("basis vector of length {}, offset has {}", b.len(), offset.len())));
    }
    Ok(AffineSubspace::new(offset, basis))
}

pub fn write_affine(a: &AffineSubspace) -> String {
    let mut s = String::new();
    let dom = crate::linalg::domain_of(a.offset.iter().chain(a.basis.iter().flatten()));
    if dom != Domain::Rational {
        writeln!(s, "domain {dom}").unwrap();
    }
    writeln!(s, "offset {}", join(&a.offset)).unwrap();
    for b in &a.basis {
        writeln!(s, "basis {}", join(b)).unwrap();
    }
    s
}

fn lift_domain(l: &Lift) -> Domain {
    let all = l
        .slice
        .offset
        .iter()
        .chain(l.slice.basis.iter().flatten())
        .chain(l.projection.entries())
        .chain(&l.shift)
        .chain(l.witnesses.iter().flat_map(|w| w.generator.iter().chain(&w.point)))
        .chain(l.rows.iter().flat_map(|r| r.normal.iter().chain(std::iter::once(&r.rhs)).chain(&r.factor)));
    crate::linalg::domain_of(all)
}

pub fn write_lift(l: &Lift) -> String {
    let mut s = format!("{}\n", l.cone);
    let dom = lift_domain(l);
    if dom != Domain::Rational {
        writeln!(s, "domain {dom}").unwrap();
    }
    writeln!(s, "target {}", l.target_dim()).unwrap();
    writeln!(s, "offset {}", join(&l.slice.offset)).unwrap();
    for b in &l.slice.basis {
        writeln!(s, "basis {}", join(b)).unwrap();
    }
    for i in 0..l.projection.nrows() {
        writeln!(s, "projection {}", join(l.projection.row(i))).unwrap();
    }
    writeln!(s, "shift {}", join(&l.shift)).unwrap();
    for w in &l.witnesses {
        let kind = if w.kind == ColKind::Point { "point" } else { "ray" };
        writeln!(s, "witness {kind} {} | {}", join(&w.generator), join(&w.point)).unwrap();
    }
    for r in &l.rows {
        let kind = if r.dual { "dual" } else { "line" };
        writeln!(s, "row {kind} {} | {} | {}", join(&r.normal), r.rhs, join(&r.factor)).unwrap();
    }
    s
}

pub fn parse_lift(text: &str) -> Result<Lift> {
    let mut lines = content_lines(text).peekable();
    let (_, cl) = lines.next().ok_or_else(|| Error::parse("empty lift file"))?;
    let cone = ConeKind::from_str(cl)?;
    let m = cone.ambient_dim();
    let mut domain = Domain::Rational;
    let mut target: Option<usize> = None;
    let mut offset: Option<Vector> = None;
    let mut basis = Vec::new();
    let mut proj = Vec::new();
    let mut shift: Option<Vector> = None;
    let mut witnesses = Vec::new();
    let mut rows = Vec::new();

    let sized = |v: Vector, n: usize, what: &str, ln: usize| -> Result<Vector> {
        if v.len() != n {
            return Err(Error::parse(format!("line {ln}: {what} has {} entries, expected {n}", v.len())));
        }
        Ok(v)
    };
    for (ln, line) in lines {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let need_target = || target.ok_or_else(|| Error::parse(format!("line {ln}: `target` must come first")));
        match tag {
            "domain" => domain = Domain::from_str(rest).map_err(|e| at_line(ln, e))?,
            "target" => {
                target = Some(rest.trim().parse().map_err(|_| Error::parse(format!("line {ln}: bad target")))?)
            }
            "offset" => offset = Some(sized(scalars(rest, domain, ln)?, m, "offset", ln)?),
            "basis" => basis.push(sized(scalars(rest, domain, ln)?, m, "basis vector", ln)?),
            "projection" => proj.push(sized(scalars(rest, domain, ln)?, m, "projection row", ln)?),
            "shift" => shift = Some(sized(scalars(rest, domain, ln)?, need_target()?, "shift", ln)?),
            "witness" => {
                let (kind, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let kind = match kind {
                    "point" => ColKind::Point,
                    "ray" => ColKind::Ray,
                    k => return Err(Error::parse(format!("line {ln}: unknown witness kind `{k}`"))),
                };
                let (g, z) = rest.split_once('|').ok_or_else(|| Error::parse(format!("line {ln}: missing `|`")))?;
                witnesses.push(Witness {
                    kind,
                    generator: sized(scalars(g, domain, ln)?, need_target()?, "generator", ln)?,
                    point: sized(scalars(z, domain, ln)?, m, "witness", ln)?,
                });
            }
            "row" => {
                let (kind, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let dual = match kind {
                    "dual" => true,
                    "line" => false,
                    k => return Err(Error::parse(format!("line {ln}: unknown row kind `{k}`"))),
                };
                let parts: Vec<&str> = rest.split('|').collect();
                let [a, b, f] = parts[..] else {
                    return Err(Error::parse(format!("line {ln}: expected `normal | rhs | factor`")));
                };
                let b = sized(scalars(b, domain, ln)?, 1, "rhs", ln)?;
                rows.push(LiftRow {
                    normal: sized(scalars(a, domain, ln)?, need_target()?, "normal", ln)?,
                    rhs: b.into_iter().next().unwrap(),
                    factor: sized(scalars(f, domain, ln)?, m, "factor", ln)?,
                    dual,
                });
            }
            t => return Err(Error::parse(format!("line {ln}: unexpected `{t}`"))),
        }
    }
    let n = target.ok_or_else(|| Error::parse("missing `target` line"))?;
    if proj.len() != n {
        return Err(Error::parse(format!("{} projection rows, expected {n}", proj.len())));
    }
    let offset = offset.ok_or_else(|| Error::parse("missing `offset` line"))?;
    let lift = Lift {
        cone,
        slice: AffineSubspace::new(offset, basis),
        projection: Matrix::from_rows_with_cols(&proj, m),
        shift: shift.unwrap_or_else(|| crate::linalg::zeros(n)),
        witnesses,
        rows,
    };
    lift.validate()?;
    Ok(lift)
}
