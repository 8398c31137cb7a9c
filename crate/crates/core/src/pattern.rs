//! Zero patterns on a grid and the exact maximum rank of their subspaces.
//!
//! The largest rank reached by matrices supported on a mask equals the size of
//! a maximum matching in the bipartite graph (rows, cols, mask cells).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Boolean mask over a `rows x cols` grid; `true` marks a cell that may be
/// nonzero. Serialized as one string per row, `*` for allowed and `0` for
/// forced zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl SupportPattern {
    pub fn new(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                found: mask.len(),
            });
        }
        Ok(Self { rows, cols, mask })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            mask: vec![false; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mask = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self { rows, cols, mask }
    }

    pub fn from_cells(rows: usize, cols: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut p = Self::empty(rows, cols);
        for (r, c) in cells {
            p.mask[r * cols + c] = true;
        }
        p
    }

    /// Block `[r0, r1) x [c0, c1)`.
    pub fn block(rows: usize, cols: usize, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows, cols, |i, j| r.contains(&i) && c.contains(&j))
    }

    /// The last `tail_rows` rows together with the last `tail_cols` columns.
    pub fn trailing(rows: usize, cols: usize, tail_rows: usize, tail_cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| i + tail_rows >= rows || j + tail_cols >= cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.mask[r * self.cols + c]
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i / self.cols, i % self.cols))
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !(a & b))
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| a | b).collect(),
        }
    }

    /// True if `other`'s cells are all inside `self`.
    pub fn contains(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| *a || !*b)
    }

    /// True if every entry of `m` outside the mask has modulus at most `tol`.
    pub fn admits(&self, m: &ComplexMatrix, tol: f64) -> bool {
        m.shape() == (self.rows, self.cols)
            && m.entries()
                .iter()
                .zip(&self.mask)
                .all(|(z, &allowed)| allowed || z.norm() <= tol)
    }

    pub fn max_rank(&self) -> usize {
        pattern_max_rank(self)
    }
}

impl TryFrom<Vec<String>> for SupportPattern {
    type Error = Error;

    fn try_from(lines: Vec<String>) -> Result<Self> {
        let rows = lines.len();
        let cols = lines.first().map_or(0, |l| l.chars().count());
        let mut mask = Vec::with_capacity(rows * cols);
        for line in &lines {
            if line.chars().count() != cols {
                return Err(Error::InvalidParameters("ragged support pattern".into()));
            }
            for ch in line.chars() {
                match ch {
                    '*' => mask.push(true),
                    '0' => mask.push(false),
                    other => {
                        return Err(Error::InvalidParameters(format!(
                            "unexpected character {other:?} in support pattern"
                        )))
                    }
                }
            }
        }
        Self::new(rows, cols, mask)
    }
}

impl From<SupportPattern> for Vec<String> {
    fn from(p: SupportPattern) -> Self {
        p.mask
            .chunks(p.cols.max(1))
            .map(|row| row.iter().map(|&b| if b { '*' } else { '0' }).collect())
            .collect()
    }
}

/// Size of a maximum matching between rows and columns along allowed cells,
/// found with augmenting paths (Kuhn).
pub fn pattern_max_rank(p: &SupportPattern) -> usize {
    let adj: Vec<Vec<usize>> = (0..p.rows)
        .map(|r| (0..p.cols).filter(|&c| p.get(r, c)).collect())
        .collect();
    let mut match_of_col: Vec<Option<usize>> = vec![None; p.cols];
    let mut size = 0;
    for r in 0..p.rows {
        let mut seen = vec![false; p.cols];
        if augment(r, &adj, &mut seen, &mut match_of_col) {
            size += 1;
        }
    }
    size
}

fn augment(r: usize, adj: &[Vec<usize>], seen: &mut [bool], match_of_col: &mut [Option<usize>]) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        let free = match match_of_col[c] {
            None => true,
            Some(other) => augment(other, adj, seen, match_of_col),
        };
        if free {
            match_of_col[c] = Some(r);
            return true;
        }
    }
    false
}
