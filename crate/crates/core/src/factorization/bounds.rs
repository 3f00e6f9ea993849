//! Lower bounds on nonnegative and psd rank.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Largest support (rows and columns) handled by the rectangle cover search.
pub const MAX_RECT_DIM: usize = 12;
/// Largest matrix side on which block peeling is searched.
pub const MAX_BLOCK_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Cells([u64; 3]);

impl Cells {
    fn empty() -> Self {
        Cells([0; 3])
    }
    fn set(&mut self, c: usize) {
        self.0[c / 64] |= 1 << (c % 64);
    }
    fn has(&self, c: usize) -> bool {
        self.0[c / 64] >> (c % 64) & 1 == 1
    }
    fn minus(&self, o: &Cells) -> Cells {
        Cells([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2]])
    }
    fn and(&self, o: &Cells) -> Cells {
        Cells([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2]])
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_empty(&self) -> bool {
        self.0 == [0; 3]
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..192).filter(|&c| self.has(c))
    }
}

/// Minimum number of all-positive combinatorial rectangles covering the
/// support of `m`: the boolean rank of the support pattern.
pub fn rectangle_cover_bound(m: &Matrix) -> Result<usize> {
    if !m.is_nonneg() {
        return Err(Error::parse("rectangle covers need a nonnegative matrix"));
    }
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| m.row(i).iter().any(|x| !x.is_zero())).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| (0..m.nrows()).any(|i| !m[(i, j)].is_zero())).collect();
    if rows.len() > MAX_RECT_DIM || cols.len() > MAX_RECT_DIM {
        return Err(Error::SizeCap(format!(
            "support is {}x{}, rectangle covers are searched up to {MAX_RECT_DIM}x{MAX_RECT_DIM}",
            rows.len(),
            cols.len()
        )));
    }
    let (p, q) = (rows.len(), cols.len());
    if p == 0 {
        return Ok(0);
    }
    let pos: Vec<Vec<bool>> = rows.iter().map(|&i| cols.iter().map(|&j| !m[(i, j)].is_zero()).collect()).collect();
    let row_mask: Vec<u32> =
        pos.iter().map(|r| r.iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (j, _)| acc | 1 << j)).collect();

    // maximal rectangles: close every row subset under (rows -> common columns -> rows)
    let mut rects: Vec<Cells> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for s in 1u32..(1 << p) {
        let common = (0..p).filter(|i| s >> i & 1 == 1).fold(u32::MAX >> (32 - q), |acc, i| acc & row_mask[i]);
        if common == 0 || !seen.insert(common) {
            continue;
        }
        let mut cells = Cells::empty();
        for i in 0..p {
            if row_mask[i] & common == common {
                for j in 0..q {
                    if common >> j & 1 == 1 {
                        cells.set(i * q + j);
                    }
                }
            }
        }
        rects.push(cells);
    }

    let mut support = Cells::empty();
    for i in 0..p {
        for j in 0..q {
            if pos[i][j] {
                support.set(i * q + j);
            }
        }
    }
    // two cells share a rectangle iff the crossing entries are positive
    let compatible = |a: usize, b: usize| pos[a / q][b % q] && pos[b / q][a % q];

    let mut best = p.min(q);
    cover(support, 0, &mut best, &rects, &compatible);
    Ok(best)
}

fn fooling_bound(uncovered: &Cells, compatible: &dyn Fn(usize, usize) -> bool) -> usize {
    let mut chosen: Vec<usize> = Vec::new();
    for c in uncovered.iter() {
        if chosen.iter().all(|&d| !compatible(c, d)) {
            chosen.push(c);
        }
    }
    chosen.len()
}

fn cover(uncovered: Cells, depth: usize, best: &mut usize, rects: &[Cells], compatible: &dyn Fn(usize, usize) -> bool) {
    if uncovered.is_empty() {
        *best = (*best).min(depth);
        return;
    }
    if depth + fooling_bound(&uncovered, compatible) >= *best {
        return;
    }
    // branch on the uncovered cell with the fewest covering rectangles
    let mut pick: Option<(usize, Vec<usize>)> = None;
    for c in uncovered.iter() {
        let opts: Vec<usize> = (0..rects.len()).filter(|&r| rects[r].has(c)).collect();
        if pick.as_ref().is_none_or(|(_, o)| opts.len() < o.len()) {
            pick = Some((c, opts));
        }
    }
    let (_, mut opts) = pick.unwrap();
    opts.sort_by_key(|&r| std::cmp::Reverse(rects[r].and(&uncovered).count()));
    for r in opts {
        cover(uncovered.minus(&rects[r]), depth + 1, best, rects, compatible);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankKind {
    Nonnegative,
    Psd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundRule {
    /// Linear rank (nonnegative), or the smallest `k` with `k(k+1)/2 >= rank` (psd).
    Rank,
    Rectangle,
    /// `[[A, w], [0, c]]` with `c > 0` needs one more than `A`.
    Block,
    Trivial,
}

/// A lower bound together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: usize,
    pub rule: BoundRule,
    /// For `Block`: the peeled row and column in the original indexing.
    pub peeled: Option<(usize, usize)>,
    pub children: Vec<Bound>,
}

impl Bound {
    fn leaf(value: usize, rule: BoundRule) -> Self {
        Bound { value, rule, peeled: None, children: Vec::new() }
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let name = match self.rule {
            BoundRule::Rank => "rank",
            BoundRule::Rectangle => "rectangle",
            BoundRule::Block => "block",
            BoundRule::Trivial => "empty",
        };
        write!(f, "{:indent$}{name} >= {}", "", self.value, indent = 2 * depth)?;
        if let Some((i, j)) = self.peeled {
            write!(f, " (row {i}, column {j})")?;
        }
        writeln!(f)?;
        for c in &self.children {
            c.write_tree(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

fn psd_from_rank(r: usize) -> usize {
    (0..).find(|k| k * (k + 1) / 2 >= r).unwrap()
}

/// Peels rows (or columns) with a single positive entry: a matrix of shape
/// `[[A, w], [0, c]]` with `c > 0` has rank bound one more than `A`, for any
/// `w >= 0`. The base bound is the rank bound and, for nonnegative rank on
/// supports up to `MAX_RECT_DIM`, the rectangle cover.
pub fn block_augmentation_bound(m: &Matrix, kind: RankKind) -> Bound {
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let cols: Vec<usize> = (0..m.ncols()).collect();
    if m.nrows() > MAX_BLOCK_DIM || m.ncols() > MAX_BLOCK_DIM {
        return base_bound(m, &rows, &cols, kind);
    }
    let mut memo = HashMap::new();
    peel(m, rows_mask(&rows), rows_mask(&cols), kind, &mut memo)
}

fn rows_mask(idx: &[usize]) -> u32 {
    idx.iter().fold(0, |acc, &i| acc | 1 << i)
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn base_bound(m: &Matrix, rows: &[usize], cols: &[usize], kind: RankKind) -> Bound {
    if rows.is_empty() || cols.is_empty() {
        return Bound::leaf(0, BoundRule::Trivial);
    }
    let sub = m.submatrix(rows, cols);
    let r = sub.rank();
    match kind {
        RankKind::Psd => Bound::leaf(psd_from_rank(r), BoundRule::Rank),
        RankKind::Nonnegative => {
            let rect = rectangle_cover_bound(&sub).unwrap_or(0);
            if rect > r {
                Bound::leaf(rect, BoundRule::Rectangle)
            } else {
                Bound::leaf(r, BoundRule::Rank)
            }
        }
    }
}

fn peel(m: &Matrix, rmask: u32, cmask: u32, kind: RankKind, memo: &mut HashMap<(u32, u32), Bound>) -> Bound {
    if let Some(b) = memo.get(&(rmask, cmask)) {
        return b.clone();
    }
    let rows = members(rmask);
    let cols = members(cmask);
    let mut best = base_bound(m, &rows, &cols, kind);
    let try_peel = |i: usize, j: usize, best: &mut Bound, memo: &mut HashMap<(u32, u32), Bound>| {
        let child = peel(m, rmask & !(1 << i), cmask & !(1 << j), kind, memo);
        // ties go to the peeled derivation, it explains more of the matrix
        if child.value + 1 > best.value || (child.value + 1 == best.value && best.rule != BoundRule::Block) {
            *best = Bound { value: child.value + 1, rule: BoundRule::Block, peeled: Some((i, j)), children: vec![child] };
        }
    };
    for &i in &rows {
        let nz: Vec<usize> = cols.iter().copied().filter(|&j| !m[(i, j)].is_zero()).collect();
        if nz.len() == 1 {
            try_peel(i, nz[0], &mut best, memo);
        }
    }
    for &j in &cols {
        let nz: Vec<usize> = rows.iter().copied().filter(|&i| !m[(i, j)].is_zero()).collect();
        if nz.len() == 1 {
            try_peel(nz[0], j, &mut best, memo);
        }
    }
    memo.insert((rmask, cmask), best.clone());
    best
}
