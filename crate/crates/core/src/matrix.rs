//! Dense complex matrices and the state/matrix correspondence.
//!
//! A bipartite pure state `sum a_{r,c} |r>|c'>` in `C^d (x) C^d'` is identified
//! with the `d x d'` coefficient matrix `(a_{r,c})`. Under this map the inner
//! product of states becomes the Hilbert-Schmidt product `Tr(A^dagger B)` and
//! the Schmidt number becomes the matrix rank.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for rank and orthogonality decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities that should hold to rounding error.
pub const IDENTITY_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameters(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.entries[r * cols + c] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    /// The coordinate matrix `E_{r,c}`.
    pub fn coordinate(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(r, c)] = ONE;
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Option<Complex64> {
        (r < self.rows && c < self.cols).then(|| self.entries[r * self.cols + c])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = self[(r, m)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.entries[r * rhs.cols + c] += a * rhs[(m, c)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (br, bc) = rhs.shape();
        let mut out = Self::zeros(self.rows * br, self.cols * bc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s = self[(i, j)];
                if s == ZERO {
                    continue;
                }
                for r in 0..br {
                    for c in 0..bc {
                        out[(i * br + r, j * bc + c)] = s * rhs[(r, c)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Cells holding an entry with modulus above `tol`.
    pub fn support(&self, tol: f64) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol)
            .map(|(i, _)| (i / self.cols, i % self.cols))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub(crate) fn from_flat_unchecked(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.entries[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pure state of `C^d (x) C^d'` in the computational product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d: usize,
    dprime: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartiteState {
    pub fn new(d: usize, dprime: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != d * dprime {
            return Err(Error::EntryCount {
                rows: d,
                cols: dprime,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            d,
            dprime,
            amplitudes,
        })
    }

    /// Product basis ket `|r>|c'>`.
    pub fn ket(d: usize, dprime: usize, r: usize, c: usize) -> Self {
        let mut amplitudes = vec![ZERO; d * dprime];
        amplitudes[r * dprime + c] = ONE;
        Self {
            d,
            dprime,
            amplitudes,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of `|r>|c'>`.
    pub fn amplitude(&self, r: usize, c: usize) -> Complex64 {
        self.amplitudes[r * self.dprime + c]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!((self.d, self.dprime), (other.d, other.dprime));
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() < tol
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            d: self.d,
            dprime: self.dprime,
            amplitudes: self.amplitudes.iter().map(|z| z / n).collect(),
        }
    }
}

impl Add for &BipartiteState {
    type Output = BipartiteState;

    fn add(self, rhs: &BipartiteState) -> BipartiteState {
        assert_eq!((self.d, self.dprime), (rhs.d, rhs.dprime));
        BipartiteState {
            d: self.d,
            dprime: self.dprime,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&rhs.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

pub fn state_from_matrix(a: &ComplexMatrix) -> BipartiteState {
    BipartiteState {
        d: a.rows,
        dprime: a.cols,
        amplitudes: a.entries.clone(),
    }
}

pub fn matrix_from_state(psi: &BipartiteState) -> ComplexMatrix {
    ComplexMatrix::from_flat_unchecked(psi.d, psi.dprime, psi.amplitudes.clone())
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(dot(&a.entries, &b.entries))
}

#[inline]
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Singular values with their numerical rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtProfile {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub schmidt_number: usize,
}

impl SchmidtProfile {
    /// True when exactly `k` singular values lie within `tol` of 1 and the rest
    /// are below `tol`.
    pub fn is_k_singular_value_one(&self, k: usize, tol: f64) -> bool {
        self.max_deviation_from(k) < tol
    }

    /// Largest deviation from the profile `{1,...,1}_k` followed by zeros.
    pub fn max_deviation_from(&self, k: usize) -> f64 {
        if self.singular_values.len() < k {
            return f64::INFINITY;
        }
        self.singular_values
            .iter()
            .enumerate()
            .map(|(i, s)| if i < k { (s - 1.0).abs() } else { s.abs() })
            .fold(0.0, f64::max)
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = a
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::SvdNotConverged)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn schmidt_profile(a: &ComplexMatrix, tol: f64) -> Result<SchmidtProfile> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameters(format!("tolerance must be positive, got {tol}")));
    }
    let singular_values = singular_values(a)?;
    let schmidt_number = singular_values.iter().filter(|&&s| s > tol).count();
    Ok(SchmidtProfile {
        singular_values,
        schmidt_number,
    })
}

pub fn numerical_rank(a: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(schmidt_profile(a, tol)?.schmidt_number)
}

/// Orthonormal vectors with a per-coordinate index of which vectors touch it.
struct SparseOrthoBasis {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    touching: Vec<Vec<usize>>,
}

impl SparseOrthoBasis {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
            touching: vec![Vec::new(); dim],
        }
    }

    /// Two rounds of classical Gram-Schmidt restricted to the vectors sharing
    /// support with `v`. Returns the residual norm.
    fn project_out(&self, v: &mut [Complex64]) -> f64 {
        let mut mark = vec![false; self.vectors.len()];
        for _ in 0..2 {
            let mut hits = Vec::new();
            for (i, z) in v.iter().enumerate() {
                if *z != ZERO {
                    for &q in &self.touching[i] {
                        if !mark[q] {
                            mark[q] = true;
                            hits.push(q);
                        }
                    }
                }
            }
            let coeffs: Vec<(usize, Complex64)> =
                hits.iter().map(|&q| (q, dot(&self.vectors[q], v))).collect();
            for (q, c) in coeffs {
                mark[q] = false;
                if c == ZERO {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(&self.vectors[q]) {
                    *x -= c * y;
                }
            }
        }
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn push_normalized(&mut self, mut v: Vec<Complex64>, norm: f64) {
        let idx = self.vectors.len();
        for (i, z) in v.iter_mut().enumerate() {
            *z /= norm;
            if *z != ZERO {
                self.touching[i].push(idx);
            }
        }
        debug_assert_eq!(v.len(), self.dim);
        self.vectors.push(v);
    }
}

/// Orthonormal basis of the HS-orthogonal complement of `span(matrices)`.
///
/// Coordinate matrices `E_{u,v}` are visited in row-major order, projected
/// against the span and the complement found so far, and kept when the
/// residual norm exceeds `tol`.
pub fn complement_basis(matrices: &[ComplexMatrix], rows: usize, cols: usize, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let dim = rows * cols;
    let mut basis = SparseOrthoBasis::new(dim);
    for (index, m) in matrices.iter().enumerate() {
        if m.shape() != (rows, cols) {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: m.shape(),
            });
        }
        let scale = m.frobenius_norm_sqr().sqrt();
        let mut v = m.entries.clone();
        let res = basis.project_out(&mut v);
        if scale == 0.0 || res <= tol * scale.max(1.0) {
            return Err(Error::LinearlyDependent { index });
        }
        basis.push_normalized(v, res);
    }
    let target = dim - matrices.len();
    let mut out = Vec::with_capacity(target);
    for idx in 0..dim {
        if out.len() == target {
            break;
        }
        let mut v = vec![ZERO; dim];
        v[idx] = ONE;
        let res = basis.project_out(&mut v);
        if res > tol {
            basis.push_normalized(v, res);
            let stored = basis.vectors.last().expect("just pushed").clone();
            out.push(ComplexMatrix::from_flat_unchecked(rows, cols, stored));
        }
    }
    Ok(out)
}
