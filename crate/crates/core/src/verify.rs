//! Independent checks of a [`BasisSet`]: Gram matrix, singular-value
//! profile, cardinality and an unextendibility certificate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSet;
use crate::certificate::{Certificate, CertificateKind};
use crate::error::{invalid, Result};
use crate::hadamard::{unimodular_search, ExtensionSearch};
use crate::matrix::{complement_basis, hs_inner, numerical_rank, schmidt_profile, ComplexMatrix, DEFAULT_TOL, ZERO};
use crate::pattern::{pattern_max_rank, SupportPattern};
use crate::rng::{complex_uniform, seeded};

/// Returns whether `max |Tr(A_i^† A_j) - k δ_ij| < tol`, and that maximum.
pub fn verify_gram(set: &BasisSet, tol: f64) -> (bool, f64) {
    let k = set.k() as f64;
    let m = set.matrices();
    let mut worst = 0.0f64;
    for i in 0..m.len() {
        for j in i..m.len() {
            let g = hs_inner(&m[i], &m[j]).expect("basis matrices share a shape");
            let target = if i == j { k } else { 0.0 };
            worst = worst.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    (worst < tol, worst)
}

/// Returns whether every matrix has exactly `k` singular values within `tol`
/// of 1 and the rest below `tol`, and the largest deviation.
pub fn verify_singular_profile(set: &BasisSet, tol: f64) -> Result<(bool, f64)> {
    let mut worst = 0.0f64;
    for m in set.matrices() {
        worst = worst.max(schmidt_profile(m, tol)?.max_deviation_from(set.k()));
    }
    Ok((worst < tol, worst))
}

/// Maximum numerical rank over `trials` seeded random combinations of `basis`.
/// Each combination is scaled to unit Frobenius norm before the rank test.
pub fn generic_max_rank(basis: &[ComplexMatrix], trials: usize, seed: u64, tol: f64) -> Result<usize> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let Some(first) = basis.first() else {
        return Ok(0);
    };
    let (rows, cols) = first.shape();
    let mut rng = seeded(seed);
    let mut best = 0;
    for _ in 0..trials {
        let mut acc = vec![ZERO; rows * cols];
        for m in basis {
            let c = complex_uniform(&mut rng);
            for (x, y) in acc.iter_mut().zip(m.entries()) {
                *x += c * y;
            }
        }
        let norm = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        acc.iter_mut().for_each(|z| *z /= norm);
        let m = ComplexMatrix::new(rows, cols, acc)?;
        best = best.max(numerical_rank(&m, tol)?);
        if best == rows.min(cols) {
            break;
        }
    }
    Ok(best)
}

/// Settings for [`certify_unextendible`] and [`verify_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Gram and singular-profile tolerance.
    pub tol: f64,
    /// Rank, support and linear-dependence tolerance.
    pub rank_tol: f64,
    pub trials: usize,
    pub seed: u64,
    pub search: ExtensionSearch,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            rank_tol: DEFAULT_TOL,
            trials: 8,
            seed: 0,
            search: ExtensionSearch::default(),
        }
    }
}

impl VerifyOptions {
    pub fn new(tol: f64, seed: u64) -> Self {
        Self {
            tol,
            seed,
            search: ExtensionSearch::default().with_seed(seed),
            ..Self::default()
        }
    }
}

/// Union of the supports of `matrices`.
fn joint_support(matrices: &[ComplexMatrix], rows: usize, cols: usize, tol: f64) -> SupportPattern {
    let mut mask = vec![false; rows * cols];
    for m in matrices {
        for (slot, z) in mask.iter_mut().zip(m.entries()) {
            *slot |= z.norm() > tol;
        }
    }
    SupportPattern::new(rows, cols, mask).expect("mask has rows * cols entries")
}

/// Smallest-matching pattern of trailing rows and trailing columns covering
/// `support`.
fn trailing_cover(support: &SupportPattern) -> (SupportPattern, usize) {
    let (rows, cols) = (support.rows(), support.cols());
    let mut best: Option<(SupportPattern, usize)> = None;
    for tail_rows in 0..=rows {
        let tail_cols = support
            .cells()
            .filter(|&(r, _)| r < rows - tail_rows)
            .map(|(_, c)| cols - c)
            .max()
            .unwrap_or(0);
        let pattern = SupportPattern::trailing(rows, cols, tail_rows, tail_cols);
        let matching = pattern_max_rank(&pattern);
        if best.as_ref().is_none_or(|(_, m)| matching < *m) {
            best = Some((pattern, matching));
        }
    }
    best.expect("at least one cover is tried")
}

/// Cells of `support` if they form a generalized diagonal (distinct rows and
/// distinct columns).
fn generalized_diagonal(support: &SupportPattern) -> Option<Vec<(usize, usize)>> {
    let cells: Vec<_> = support.cells().collect();
    let mut rows = vec![false; support.rows()];
    let mut cols = vec![false; support.cols()];
    for &(r, c) in &cells {
        if std::mem::replace(&mut rows[r], true) || std::mem::replace(&mut cols[c], true) {
            return None;
        }
    }
    Some(cells)
}

/// Builds a certificate that no `k`-singular-value-1 matrix lies in the
/// orthogonal complement of `set`. Tried in order: a trailing row/column
/// pattern with small matching, a randomized rank bound, and a unimodular
/// search when the complement sits on a generalized diagonal of length `k`.
pub fn certify_unextendible(set: &BasisSet, options: &VerifyOptions) -> Result<Certificate> {
    let tol = options.rank_tol;
    let k = set.k();
    let complement = match set.complement(tol) {
        Ok(c) => c,
        Err(e) => return Ok(Certificate::inconclusive(format!("complement unavailable: {e}"), tol)),
    };
    if complement.is_empty() {
        return Ok(Certificate::new(
            CertificateKind::ComplementRankDeficient {
                max_rank: 0,
                trials: options.trials,
                seed: options.seed,
            },
            tol,
        ));
    }
    let support = joint_support(&complement, set.d(), set.dprime(), tol);

    let (pattern, matching) = trailing_cover(&support);
    if matching < k {
        return Ok(Certificate::new(CertificateKind::PatternBound { pattern, matching }, tol));
    }

    let max_rank = generic_max_rank(&complement, options.trials, options.seed, tol)?;
    if max_rank < k {
        return Ok(Certificate::new(
            CertificateKind::ComplementRankDeficient {
                max_rank,
                trials: options.trials,
                seed: options.seed,
            },
            tol,
        ));
    }

    if let Some(cells) = generalized_diagonal(&support).filter(|c| c.len() == k) {
        let restricted: Vec<ComplexMatrix> = complement
            .iter()
            .map(|m| ComplexMatrix::from_fn(1, k, |_, i| m[cells[i]]))
            .collect();
        let constraints: Vec<Vec<Complex64>> = complement_basis(&restricted, 1, k, tol)?
            .into_iter()
            .map(ComplexMatrix::into_entries)
            .collect();
        let verdict = unimodular_search(&constraints, &constraints, k, &options.search);
        return Ok(Certificate::new(CertificateKind::HadamardNoExtension { verdict }, options.search.tol));
    }

    Ok(Certificate::inconclusive(
        format!("complement reaches rank {max_rank} >= k = {k}"),
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overall {
    Certified,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub orthonormal: bool,
    pub gram_deviation: f64,
    pub schmidt_ok: bool,
    pub profile_deviation: f64,
    /// Set when the element count or kind label is inconsistent.
    pub cardinality: Option<String>,
    pub certificate: Certificate,
    pub overall: Overall,
}

pub fn verify(set: &BasisSet, tol: f64, seed: u64) -> Result<VerificationReport> {
    verify_with(set, &VerifyOptions::new(tol, seed))
}

pub fn verify_with(set: &BasisSet, options: &VerifyOptions) -> Result<VerificationReport> {
    let (orthonormal, gram_deviation) = verify_gram(set, options.tol);
    let (schmidt_ok, profile_deviation) = verify_singular_profile(set, options.tol)?;
    let cardinality = set.kind_violation();
    let certificate = certify_unextendible(set, options)?;
    let checks = orthonormal && schmidt_ok && cardinality.is_none();
    let overall = if !checks || certificate.refutes() {
        Overall::Failed
    } else if certificate.establishes_unextendible(set.k()) {
        Overall::Certified
    } else {
        Overall::Inconclusive
    };
    Ok(VerificationReport {
        orthonormal,
        gram_deviation,
        schmidt_ok,
        profile_deviation,
        cardinality,
        certificate,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisKind, Provenance};
    use crate::hadamard::{build_umeb_from_hadamard, PartialHadamard};
    use crate::special_basis::{default_sv1bk, tensor_hadamard_phases};
    use crate::zero_pattern::{construct_sec3, Sec3Case, Sec3Plan};

    fn example_28() -> BasisSet {
        let plan = Sec3Plan::new(4, 6, 7, Sec3Case::C2, 0).unwrap();
        construct_sec3(&plan, &tensor_hadamard_phases(4).unwrap()).unwrap()
    }

    #[test]
    fn gram_of_example_is_exact() {
        let (ok, dev) = verify_gram(&example_28(), 1e-12);
        assert!(ok);
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn repeated_matrix_fails_gram() {
        let s = example_28();
        let mut m = s.matrices().to_vec();
        m[1] = m[0].clone();
        let dup = BasisSet::new(6, 7, 4, m, BasisKind::Usv1b, Provenance::new("test")).unwrap();
        assert!(!verify_gram(&dup, 1e-9).0);
    }

    #[test]
    fn low_rank_matrix_fails_profile() {
        let m = ComplexMatrix::from_fn(3, 3, |r, c| Complex64::new(f64::from(u8::from(r == c && r < 2)), 0.0));
        let s = BasisSet::new(3, 3, 3, vec![m], BasisKind::Usv1b, Provenance::new("test")).unwrap();
        assert!(!verify_singular_profile(&s, 1e-9).unwrap().0);
    }

    #[test]
    fn example_28_gets_pattern_bound() {
        let s = example_28();
        let cert = certify_unextendible(&s, &VerifyOptions::default()).unwrap();
        match cert.kind {
            CertificateKind::PatternBound { pattern, matching } => {
                assert_eq!(matching, 2);
                assert_eq!(pattern, SupportPattern::trailing(6, 7, 2, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
        let complement = s.complement(1e-9).unwrap();
        assert_eq!(generic_max_rank(&complement, 16, 3, 1e-9).unwrap(), 2);
        let report = verify(&s, 1e-10, 0).unwrap();
        assert_eq!(report.overall, Overall::Certified);
    }

    #[test]
    fn empty_basis_has_rank_zero() {
        assert_eq!(generic_max_rank(&[], 8, 0, 1e-9).unwrap(), 0);
        assert!(generic_max_rank(&[], 0, 0, 1e-9).is_err());
    }

    #[test]
    fn complete_basis_tagged_unextendible_fails() {
        let full = default_sv1bk(4, 6, 2).unwrap();
        assert_eq!(verify(&full, 1e-10, 0).unwrap().overall, Overall::Certified);
        let wrong = full.relabeled(BasisKind::Usv1b);
        let report = verify(&wrong, 1e-10, 0).unwrap();
        assert!(report.cardinality.is_some());
        assert_eq!(report.overall, Overall::Failed);
    }

    #[test]
    fn deletion_breaks_certificate() {
        let s = example_28().without(5);
        let complement = s.complement(1e-9).unwrap();
        assert!(generic_max_rank(&complement, 8, 0, 1e-9).unwrap() >= 4);
        assert_ne!(verify(&s, 1e-10, 0).unwrap().overall, Overall::Certified);
    }

    #[test]
    fn hadamard_route() {
        let h = PartialHadamard::fourier_rows(3, 5).unwrap();
        let search = ExtensionSearch {
            attempts: 5,
            ..ExtensionSearch::default()
        };
        let s = build_umeb_from_hadamard(&h, 5, &search).unwrap();
        let cert = certify_unextendible(&s, &VerifyOptions::default()).unwrap();
        assert!(matches!(cert.kind, CertificateKind::HadamardNoExtension { .. }));
        assert!(cert.refutes());
        assert_eq!(verify(&s, 1e-10, 0).unwrap().overall, Overall::Failed);
    }

    #[test]
    fn deterministic() {
        let s = example_28().without(3);
        assert_eq!(verify(&s, 1e-10, 7).unwrap(), verify(&s, 1e-10, 7).unwrap());
    }
}
