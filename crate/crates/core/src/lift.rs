//! Lifting an unextendible set from `C^d (x) C^d'` to `C^{pd} (x) C^{qd'}`.
//!
//! `J_{p x q}` is split into `q` rectangular permutation matrices `P_l`.
//! Every `p x q` phase matrix `Q_l^a` (the pattern of `P_l` with row `i`
//! weighted by `xi_p^{a i}`) is tensored with a complete SV1B`k` for
//! `l >= 1`, and with the unextendible inner set for `l = 0`. A complement
//! element `D` inside the `P_0` slot has diagonal blocks `D_i` that are all
//! orthogonal to the inner set (the Vandermonde system in `a` is
//! invertible), so the rank of `D` is bounded by `p` times the inner bound.

use crate::basis::{BasisKind, BasisSet, Provenance};
use crate::certificate::{Certificate, CertificateKind};
use crate::error::{invalid, Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOL};
use crate::special_basis::root_of_unity;
use crate::verify::generic_max_rank;

/// `q` permutation matrices of shape `p x q` summing to the all-ones matrix.
/// Each is stored as the column index of the single 1 in every row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationDecomposition {
    p: usize,
    q: usize,
    perms: Vec<Vec<usize>>,
}

impl PermutationDecomposition {
    /// `perms[l][i]` is the column of the 1 in row `i` of `P_l`.
    pub fn new(p: usize, q: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if p == 0 || p > q {
            return Err(invalid(format!("need 1 <= p <= q, got p={p}, q={q}")));
        }
        if perms.len() != q {
            return Err(invalid(format!("need {q} permutation matrices, found {}", perms.len())));
        }
        let mut covered = vec![false; p * q];
        for (l, perm) in perms.iter().enumerate() {
            if perm.len() != p {
                return Err(invalid(format!("P_{l} has {} rows, expected {p}", perm.len())));
            }
            let mut used = vec![false; q];
            for (i, &j) in perm.iter().enumerate() {
                if j >= q || std::mem::replace(&mut used[j], true) {
                    return Err(invalid(format!("P_{l} is not a permutation matrix")));
                }
                if std::mem::replace(&mut covered[i * q + j], true) {
                    return Err(invalid(format!("cell ({i}, {j}) appears in two permutation matrices")));
                }
            }
        }
        Ok(Self { p, q, perms })
    }

    /// Accepts explicit 0/1 matrices.
    pub fn from_matrices(p: usize, q: usize, matrices: &[Vec<Vec<u8>>]) -> Result<Self> {
        let mut perms = Vec::with_capacity(matrices.len());
        for (l, m) in matrices.iter().enumerate() {
            if m.len() != p || m.iter().any(|row| row.len() != q) {
                return Err(invalid(format!("P_{l} must be {p}x{q}")));
            }
            let mut perm = Vec::with_capacity(p);
            for row in m {
                if row.iter().any(|&x| x > 1) {
                    return Err(invalid(format!("P_{l} has entries other than 0 and 1")));
                }
                let ones: Vec<usize> = row.iter().enumerate().filter(|(_, &x)| x == 1).map(|(j, _)| j).collect();
                if ones.len() != 1 {
                    return Err(invalid(format!("every row of P_{l} needs exactly one 1")));
                }
                perm.push(ones[0]);
            }
            perms.push(perm);
        }
        Self::new(p, q, perms)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn perm(&self, l: usize) -> &[usize] {
        &self.perms[l]
    }

    pub fn to_matrices(&self) -> Vec<Vec<Vec<u8>>> {
        self.perms
            .iter()
            .map(|perm| {
                perm.iter()
                    .map(|&j| (0..self.q).map(|c| u8::from(c == j)).collect())
                    .collect()
            })
            .collect()
    }
}

/// `P_l = P_0 T^l` with `P_0 = [I_p | 0]` and `T` the cyclic shift of order `q`,
/// so row `i` of `P_l` has its 1 in column `(i + l) mod q`.
pub fn cyclic_decomposition(p: usize, q: usize) -> Result<PermutationDecomposition> {
    if p == 0 || p > q {
        return Err(invalid(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    let perms = (0..q).map(|l| (0..p).map(|i| (i + l) % q).collect()).collect();
    PermutationDecomposition::new(p, q, perms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    pub l: usize,
    pub a: usize,
    matrix: ComplexMatrix,
}

impl PhaseMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// `Q_l^a`: the pattern of `P_l` with the entry in row `i` set to `xi_p^{a i}`.
pub fn phase_matrix(decomposition: &PermutationDecomposition, l: usize, a: usize) -> Result<PhaseMatrix> {
    let (p, q) = (decomposition.p, decomposition.q);
    if l >= q || a >= p {
        return Err(Error::IndexOutOfRange(format!("l={l} (q={q}), a={a} (p={p})")));
    }
    let mut matrix = ComplexMatrix::zeros(p, q);
    for (i, &j) in decomposition.perm(l).iter().enumerate() {
        matrix[(i, j)] = root_of_unity(p, a * i);
    }
    Ok(PhaseMatrix { l, a, matrix })
}

/// Randomized rank estimate settings for the output certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            trials: 8,
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

/// Lifts an unextendible set whose complement has rank below `k`.
///
/// `inner` must carry a certificate bounding its complement rank below `k`
/// (pattern bound or randomized rank bound). `filler` must be a complete
/// SV1B`k` of the same space.
pub fn lift_suebk(
    inner: &BasisSet,
    filler: &BasisSet,
    decomposition: &PermutationDecomposition,
    options: &LiftOptions,
) -> Result<BasisSet> {
    let bound = inner
        .certificate()
        .and_then(|c| c.rank_bound())
        .ok_or_else(|| Error::Certificate("inner set carries no complement rank bound".into()))?;
    if bound >= inner.k() {
        return Err(Error::Certificate(format!(
            "inner complement rank bound {bound} is not below k={}",
            inner.k()
        )));
    }
    let matrices = assemble(inner, filler, decomposition)?;
    finish(inner, decomposition, matrices, options, "lift-suebk")
}

/// Lifts a UMEB; no certificate on `inner` is required.
pub fn lift_umeb(
    inner: &BasisSet,
    filler: &BasisSet,
    decomposition: &PermutationDecomposition,
    options: &LiftOptions,
) -> Result<BasisSet> {
    if inner.kind() != BasisKind::Umeb || inner.k() != inner.d() || inner.d() > inner.dprime() {
        return Err(invalid(format!(
            "inner set must be a UMEB with k = d <= d', got {} with k={}, d={}, d'={}",
            inner.kind(),
            inner.k(),
            inner.d(),
            inner.dprime()
        )));
    }
    let matrices = assemble(inner, filler, decomposition)?;
    finish(inner, decomposition, matrices, options, "lift-umeb")
}

/// Output order: `l` ascending, then `a`, then the inner or filler index.
fn assemble(inner: &BasisSet, filler: &BasisSet, decomposition: &PermutationDecomposition) -> Result<Vec<ComplexMatrix>> {
    if (filler.d(), filler.dprime(), filler.k()) != (inner.d(), inner.dprime(), inner.k()) {
        return Err(invalid(format!(
            "filler space ({}, {}, k={}) differs from inner ({}, {}, k={})",
            filler.d(),
            filler.dprime(),
            filler.k(),
            inner.d(),
            inner.dprime(),
            inner.k()
        )));
    }
    if filler.len() != filler.space_dim() {
        return Err(invalid(format!(
            "filler must be a complete basis of {} matrices, found {}",
            filler.space_dim(),
            filler.len()
        )));
    }
    let (p, q) = (decomposition.p(), decomposition.q());
    let count = p * (q - 1) * inner.space_dim() + p * inner.len();
    let mut out = Vec::with_capacity(count);
    for l in 0..q {
        let source = if l == 0 { inner } else { filler };
        for a in 0..p {
            let phases = phase_matrix(decomposition, l, a)?;
            out.extend(source.matrices().iter().map(|m| phases.matrix().kron(m)));
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn finish(
    inner: &BasisSet,
    decomposition: &PermutationDecomposition,
    matrices: Vec<ComplexMatrix>,
    options: &LiftOptions,
    construction: &str,
) -> Result<BasisSet> {
    let (p, q) = (decomposition.p(), decomposition.q());
    let (d, dprime, k) = (p * inner.d(), q * inner.dprime(), p * inner.k());
    let kind = if k == d { BasisKind::Umeb } else { BasisKind::Usv1b };
    let provenance = Provenance::new(construction)
        .param("p", p)
        .param("q", q)
        .param("inner_count", inner.len())
        .param("inner_construction", &inner.provenance().construction)
        .with_seed(options.seed);
    let set = BasisSet::new(d, dprime, k, matrices, kind, provenance)?;
    let complement = set.complement(options.tol)?;
    let max_rank = generic_max_rank(&complement, options.trials, options.seed, options.tol)?;
    let certificate = if max_rank < k {
        Certificate::new(
            CertificateKind::ComplementRankDeficient {
                max_rank,
                trials: options.trials,
                seed: options.seed,
            },
            options.tol,
        )
    } else {
        Certificate::inconclusive(
            format!("complement reaches rank {max_rank} >= {k}; unextendibility rests on the inner set"),
            options.tol,
        )
    };
    Ok(set.with_certificate(certificate))
}

/// Diagonal blocks `D_i` of `m` sitting on the support of `P_0`.
pub fn p0_blocks(m: &ComplexMatrix, decomposition: &PermutationDecomposition, d: usize, dprime: usize) -> Vec<ComplexMatrix> {
    decomposition
        .perm(0)
        .iter()
        .enumerate()
        .map(|(i, &j)| ComplexMatrix::from_fn(d, dprime, |r, c| m[(i * d + r, j * dprime + c)]))
        .collect()
}
