//! Complete `k`-singular-value-1 bases on rectangular grids.
//!
//! The grid is cut into generalized diagonals of length `k`. Putting the
//! rows of a complex Hadamard matrix of order `k` on each diagonal gives `k`
//! mutually orthogonal `k`-singular-value-1 matrices per diagonal, and
//! diagonals are disjoint, so the whole family is an orthogonal basis of the
//! grid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, BasisSet, Provenance};
use crate::error::{invalid, Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};

pub type Cell = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalPartition {
    rows: usize,
    cols: usize,
    k: usize,
    diagonals: Vec<Vec<Cell>>,
}

impl DiagonalPartition {
    /// Validating constructor for externally supplied partitions.
    pub fn new(rows: usize, cols: usize, k: usize, diagonals: Vec<Vec<Cell>>) -> Result<Self> {
        let p = Self {
            rows,
            cols,
            k,
            diagonals,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn diagonals(&self) -> &[Vec<Cell>] {
        &self.diagonals
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || !(self.rows * self.cols).is_multiple_of(self.k) {
            return Err(invalid(format!(
                "k={} does not divide {}x{}",
                self.k, self.rows, self.cols
            )));
        }
        if self.diagonals.len() != self.rows * self.cols / self.k {
            return Err(invalid(format!(
                "expected {} diagonals, found {}",
                self.rows * self.cols / self.k,
                self.diagonals.len()
            )));
        }
        let mut seen = vec![false; self.rows * self.cols];
        for (n, diag) in self.diagonals.iter().enumerate() {
            if diag.len() != self.k {
                return Err(invalid(format!("diagonal {n} has {} cells", diag.len())));
            }
            let mut rows_used = vec![false; self.rows];
            let mut cols_used = vec![false; self.cols];
            for &(r, c) in diag {
                if r >= self.rows || c >= self.cols {
                    return Err(invalid(format!("cell ({r}, {c}) outside the grid")));
                }
                if std::mem::replace(&mut rows_used[r], true) || std::mem::replace(&mut cols_used[c], true) {
                    return Err(invalid(format!("diagonal {n} repeats a row or column")));
                }
                if std::mem::replace(&mut seen[r * self.cols + c], true) {
                    return Err(invalid(format!("cell ({r}, {c}) covered twice")));
                }
            }
        }
        Ok(())
    }
}

/// Partition of a `rows x cols` grid into generalized diagonals of length `k`.
///
/// With `k | rows` the rows are cut into bands of height `k` and each band
/// into the wrapped diagonals `(b*k + m, (m + t) mod cols)`; with `k | cols`
/// the same is done column-wise. Otherwise the cyclic colouring of the grid
/// is rebalanced into `rows*cols/k` classes of size exactly `k`.
pub fn diagonal_partition(rows: usize, cols: usize, k: usize) -> Result<DiagonalPartition> {
    if rows == 0 || cols == 0 || k == 0 {
        return Err(invalid("rows, cols and k must be positive"));
    }
    if !(rows * cols).is_multiple_of(k) {
        return Err(invalid(format!("k={k} does not divide {rows}*{cols}")));
    }
    if k > rows.min(cols) {
        return Err(invalid(format!("k={k} exceeds min({rows}, {cols})")));
    }
    let diagonals = if rows.is_multiple_of(k) {
        (0..rows / k)
            .flat_map(|b| (0..cols).map(move |t| (0..k).map(|m| (b * k + m, (m + t) % cols)).collect()))
            .collect()
    } else if cols.is_multiple_of(k) {
        (0..cols / k)
            .flat_map(|b| (0..rows).map(move |t| (0..k).map(|m| ((m + t) % rows, b * k + m)).collect()))
            .collect()
    } else {
        rebalanced_partition(rows, cols, k).ok_or(Error::PartitionNotFound { rows, cols, k })?
    };
    DiagonalPartition::new(rows, cols, k, diagonals)
}

/// Equitable edge colouring of the complete bipartite graph `K_{rows,cols}`.
///
/// Starts from the `max(rows, cols)` cyclic matchings, adds empty classes up
/// to `rows*cols/k`, then repeatedly moves one cell from an oversized class
/// to an undersized one by swapping along an alternating path of the two
/// classes that begins and ends in the larger one.
fn rebalanced_partition(rows: usize, cols: usize, k: usize) -> Option<Vec<Vec<Cell>>> {
    let total = rows * cols / k;
    let mut classes: Vec<Vec<Cell>> = if rows <= cols {
        (0..cols).map(|t| (0..rows).map(|i| (i, (i + t) % cols)).collect()).collect()
    } else {
        (0..rows).map(|t| (0..cols).map(|j| ((j + t) % rows, j)).collect()).collect()
    };
    if classes.len() > total {
        return None;
    }
    classes.resize(total, Vec::new());

    let budget = rows * cols;
    for _ in 0..budget {
        let Some(big) = classes.iter().position(|c| c.len() > k) else {
            break;
        };
        let small = classes.iter().position(|c| c.len() < k)?;
        let (moved_big, moved_small) = swap_alternating_path(&classes[big], &classes[small], rows, cols)?;
        classes[big] = moved_big;
        classes[small] = moved_small;
    }
    if classes.iter().any(|c| c.len() != k) {
        return None;
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    Some(classes)
}

fn swap_alternating_path(big: &[Cell], small: &[Cell], rows: usize, cols: usize) -> Option<(Vec<Cell>, Vec<Cell>)> {
    // Each class is a matching, so every vertex has at most one edge of each.
    let mut big_at_row = vec![None; rows];
    let mut big_at_col = vec![None; cols];
    let mut small_at_row = vec![None; rows];
    let mut small_at_col = vec![None; cols];
    for &(r, c) in big {
        big_at_row[r] = Some(c);
        big_at_col[c] = Some(r);
    }
    for &(r, c) in small {
        small_at_row[r] = Some(c);
        small_at_col[c] = Some(r);
    }

    // Walk from a vertex touched only by `big`; alternate big/small edges.
    let walk = |start_is_row: bool, start: usize| -> (Vec<Cell>, Vec<Cell>) {
        let mut path_big = Vec::new();
        let mut path_small = Vec::new();
        let (mut on_row, mut v) = (start_is_row, start);
        let mut take_big = true;
        loop {
            let next = match (on_row, take_big) {
                (true, true) => big_at_row[v],
                (false, true) => big_at_col[v],
                (true, false) => small_at_row[v],
                (false, false) => small_at_col[v],
            };
            let Some(w) = next else { break };
            let cell = if on_row { (v, w) } else { (w, v) };
            if take_big {
                path_big.push(cell);
            } else {
                path_small.push(cell);
            }
            on_row = !on_row;
            v = w;
            take_big = !take_big;
        }
        (path_big, path_small)
    };

    let starts = (0..rows)
        .filter(|&r| big_at_row[r].is_some() && small_at_row[r].is_none())
        .map(|r| (true, r))
        .chain(
            (0..cols)
                .filter(|&c| big_at_col[c].is_some() && small_at_col[c].is_none())
                .map(|c| (false, c)),
        );
    for (is_row, v) in starts {
        let (pb, ps) = walk(is_row, v);
        if pb.len() > ps.len() {
            let new_big: Vec<Cell> = big
                .iter()
                .filter(|c| !pb.contains(c))
                .chain(ps.iter())
                .copied()
                .collect();
            let new_small: Vec<Cell> = small
                .iter()
                .filter(|c| !ps.contains(c))
                .chain(pb.iter())
                .copied()
                .collect();
            return Some((new_big, new_small));
        }
    }
    None
}

/// A complex Hadamard matrix of order `k`; row `a` gives the phases placed
/// along a diagonal for the `a`-th matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSystem {
    k: usize,
    rows: ComplexMatrix,
}

impl PhaseSystem {
    pub fn new(rows: ComplexMatrix, tol: f64) -> Result<Self> {
        let k = rows.rows();
        if rows.cols() != k {
            return Err(invalid(format!("phase system must be square, got {:?}", rows.shape())));
        }
        if rows.entries().iter().any(|z| (z.norm() - 1.0).abs() > tol) {
            return Err(invalid("phase system entries must be unimodular"));
        }
        let gram = rows.matmul(&rows.adjoint())?;
        for a in 0..k {
            for b in 0..k {
                let expected = if a == b { k as f64 } else { 0.0 };
                if (gram[(a, b)] - Complex64::new(expected, 0.0)).norm() > tol {
                    return Err(invalid(format!("phase rows {a} and {b} are not orthogonal")));
                }
            }
        }
        Ok(Self { k, rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &ComplexMatrix {
        &self.rows
    }

    pub fn phase(&self, a: usize, m: usize) -> Complex64 {
        self.rows[(a, m)]
    }
}

/// `rows[a][m] = exp(2 pi i a m / k)`.
pub fn fourier_phases(k: usize) -> Result<PhaseSystem> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let rows = ComplexMatrix::from_fn(k, k, |a, m| root_of_unity(k, a * m));
    Ok(PhaseSystem { k, rows })
}

/// Sylvester Hadamard matrix `H_2^{(x) n}` for `k = 2^n`.
pub fn tensor_hadamard_phases(k: usize) -> Result<PhaseSystem> {
    if !k.is_power_of_two() {
        return Err(invalid(format!("tensor Hadamard phases need a power of two, got {k}")));
    }
    let rows = ComplexMatrix::from_fn(k, k, |a, m| {
        if (a & m).count_ones() % 2 == 0 {
            ONE
        } else {
            -ONE
        }
    });
    Ok(PhaseSystem { k, rows })
}

/// `exp(2 pi i e / n)`, exact for the quarter turns.
pub(crate) fn root_of_unity(n: usize, e: usize) -> Complex64 {
    let e = e % n;
    if (4 * e).is_multiple_of(n) {
        match 4 * e / n {
            0 => ONE,
            1 => Complex64::new(0.0, 1.0),
            2 => -ONE,
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * e as f64 / n as f64)
    }
}

/// Named phase-system choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseChoice {
    #[default]
    Fourier,
    TensorHadamard,
}

impl PhaseChoice {
    pub fn system(self, k: usize) -> Result<PhaseSystem> {
        match self {
            Self::Fourier => fourier_phases(k),
            Self::TensorHadamard => tensor_hadamard_phases(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Fourier => "fourier",
            Self::TensorHadamard => "tensor-hadamard",
        }
    }
}

impl std::str::FromStr for PhaseChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Self::Fourier),
            "tensor-hadamard" => Ok(Self::TensorHadamard),
            other => Err(invalid(format!("unknown phase system {other:?}"))),
        }
    }
}

/// Matrices of a partition/phase pair, ordered by phase row first and
/// diagonal second.
pub fn sv1b_matrices(partition: &DiagonalPartition, phases: &PhaseSystem) -> Result<Vec<ComplexMatrix>> {
    if phases.k() != partition.k() {
        return Err(invalid(format!(
            "phase system order {} does not match partition k={}",
            phases.k(),
            partition.k()
        )));
    }
    let mut out = Vec::with_capacity(partition.rows() * partition.cols());
    for a in 0..phases.k() {
        for diag in partition.diagonals() {
            let mut m = ComplexMatrix::zeros(partition.rows(), partition.cols());
            for (idx, &(r, c)) in diag.iter().enumerate() {
                m[(r, c)] = phases.phase(a, idx);
            }
            out.push(m);
        }
    }
    debug_assert!(out.iter().all(|m| m.entries().iter().filter(|z| **z != ZERO).count() == partition.k()));
    Ok(out)
}

pub fn build_sv1bk(partition: &DiagonalPartition, phases: &PhaseSystem) -> Result<BasisSet> {
    let matrices = sv1b_matrices(partition, phases)?;
    BasisSet::new(
        partition.rows(),
        partition.cols(),
        partition.k(),
        matrices,
        BasisKind::Sv1b,
        Provenance::new("diagonal-sv1b")
            .param("rows", partition.rows())
            .param("cols", partition.cols())
            .param("k", partition.k()),
    )
}

/// Fourier SV1B`k` on the full `d x d'` grid.
pub fn default_sv1bk(d: usize, dprime: usize, k: usize) -> Result<BasisSet> {
    build_sv1bk(&diagonal_partition(d, dprime, k)?, &fourier_phases(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hs_inner, schmidt_profile};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn band_partition_4x7() {
        let p = diagonal_partition(4, 7, 4).unwrap();
        assert_eq!(p.diagonals().len(), 7);
        for (t, diag) in p.diagonals().iter().enumerate() {
            let expected: Vec<Cell> = (0..4).map(|m| (m, (m + t) % 7)).collect();
            assert_eq!(diag, &expected);
        }
    }

    #[test]
    fn two_by_two_has_main_and_anti_diagonal() {
        let p = diagonal_partition(2, 2, 2).unwrap();
        assert_eq!(p.diagonals(), &[vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);
    }

    #[test]
    fn rebalanced_partition_6x10_k4() {
        let p = diagonal_partition(6, 10, 4).unwrap();
        assert_eq!(p.diagonals().len(), 15);
        p.validate().unwrap();
    }

    #[test]
    fn preconditions() {
        assert!(diagonal_partition(3, 3, 2).is_err());
        assert!(diagonal_partition(2, 6, 3).is_err());
        assert!(diagonal_partition(0, 6, 1).is_err());
    }

    #[test]
    fn every_small_grid_partitions() {
        for rows in 1..=10 {
            for cols in 1..=10 {
                for k in 1..=rows.min(cols) {
                    if rows * cols % k == 0 {
                        let p = diagonal_partition(rows, cols, k)
                            .unwrap_or_else(|e| panic!("{rows}x{cols} k={k}: {e}"));
                        p.validate().unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn validate_catches_bad_partitions() {
        assert!(DiagonalPartition::new(2, 2, 2, vec![vec![(0, 0), (0, 1)], vec![(1, 0), (1, 1)]]).is_err());
        assert!(DiagonalPartition::new(2, 2, 2, vec![vec![(0, 0), (1, 1)], vec![(0, 0), (1, 1)]]).is_err());
        assert!(DiagonalPartition::new(2, 2, 2, vec![vec![(0, 0), (1, 1)]]).is_err());
    }

    #[test]
    fn fourier_small_orders() {
        assert_eq!(fourier_phases(1).unwrap().rows(), &ComplexMatrix::identity(1));
        let f2 = fourier_phases(2).unwrap();
        assert_eq!(f2.rows(), &ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]));
        let f4 = fourier_phases(4).unwrap();
        let row1: Vec<_> = (0..4).map(|m| f4.phase(1, m)).collect();
        assert_eq!(row1, vec![ONE, c(0.0, 1.0), -ONE, c(0.0, -1.0)]);
        PhaseSystem::new(f4.rows().clone(), 1e-12).unwrap();
        for k in 1..=9 {
            PhaseSystem::new(fourier_phases(k).unwrap().rows().clone(), 1e-10).unwrap();
        }
    }

    #[test]
    fn tensor_hadamard_matches_sign_patterns() {
        let h4 = tensor_hadamard_phases(4).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 1.0, 1.0, 1.0],
            &[1.0, -1.0, 1.0, -1.0],
            &[1.0, 1.0, -1.0, -1.0],
            &[1.0, -1.0, -1.0, 1.0],
        ]);
        assert_eq!(h4.rows(), &expected);
        let h8 = tensor_hadamard_phases(8).unwrap();
        let gram = h8.rows().matmul(&h8.rows().adjoint()).unwrap();
        assert_eq!(gram, ComplexMatrix::identity(8).scale(c(8.0, 0.0)));
        assert!(tensor_hadamard_phases(6).is_err());
    }

    #[test]
    fn phase_system_rejects_non_hadamard() {
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(PhaseSystem::new(bad, 1e-9).is_err());
    }

    #[test]
    fn sv1b_on_2x2() {
        let set = build_sv1bk(&diagonal_partition(2, 2, 2).unwrap(), &fourier_phases(2).unwrap()).unwrap();
        let expected = [
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]),
        ];
        assert_eq!(set.matrices(), &expected);
    }

    #[test]
    fn phase_k_mismatch_is_an_error() {
        let p = diagonal_partition(2, 2, 2).unwrap();
        assert!(build_sv1bk(&p, &fourier_phases(3).unwrap()).is_err());
    }

    #[test]
    fn every_output_matrix_is_k_singular_value_one() {
        for (rows, cols, k) in [(3, 3, 3), (4, 4, 4), (6, 10, 4), (5, 6, 3)] {
            let set = build_sv1bk(&diagonal_partition(rows, cols, k).unwrap(), &fourier_phases(k).unwrap()).unwrap();
            assert_eq!(set.len(), rows * cols);
            for (i, a) in set.matrices().iter().enumerate() {
                let p = schmidt_profile(a, 1e-9).unwrap();
                assert!(p.is_k_singular_value_one(k, 1e-10), "{rows}x{cols} k={k}");
                for (j, b) in set.matrices().iter().enumerate() {
                    let expected = if i == j { k as f64 } else { 0.0 };
                    assert!((hs_inner(a, b).unwrap() - c(expected, 0.0)).norm() < 1e-10);
                }
            }
        }
    }
}
