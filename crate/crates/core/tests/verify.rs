use proptest::prelude::*;
use rand::Rng;
use ueb_core::hadamard::{build_umeb_from_hadamard, builtin_h3x5, check_extension, ExtensionSearch, PartialHadamard};
use ueb_core::pattern::{pattern_max_rank, SupportPattern};
use ueb_core::rng::{complex_uniform, seeded};
use ueb_core::special_basis::{fourier_phases, tensor_hadamard_phases};
use ueb_core::verify::{certify_unextendible, generic_max_rank, verify, verify_gram, Overall, VerifyOptions};
use ueb_core::zero_pattern::{construct_sec3, enumerate_constructions, Sec3Case, Sec3Plan};
use ueb_core::{BasisKind, CertificateKind, ComplexMatrix};

fn random_subspace(seed: u64, n: usize) -> Vec<ComplexMatrix> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| {
            // low-rank pieces keep the generic rank interesting
            let rank = rng.random_range(1..=2);
            let mut m = ComplexMatrix::zeros(5, 5);
            for _ in 0..rank {
                let u: Vec<_> = (0..5).map(|_| complex_uniform(&mut rng)).collect();
                let v: Vec<_> = (0..5).map(|_| complex_uniform(&mut rng)).collect();
                m = &m + &ComplexMatrix::from_fn(5, 5, |r, c| u[r] * v[c]);
            }
            m
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generic_rank_is_monotone(seed in any::<u64>(), n in 1usize..5) {
        let span = random_subspace(seed, n + 1);
        let smaller = generic_max_rank(&span[..n], 8, seed, 1e-9).unwrap();
        let larger = generic_max_rank(&span, 8, seed, 1e-9).unwrap();
        prop_assert!(smaller <= larger);
    }
}

#[test]
fn generic_rank_agrees_with_matching_on_masks() {
    let mut rng = seeded(2024);
    for _ in 0..100 {
        let rows = rng.random_range(1..=7);
        let cols = rng.random_range(1..=7);
        let density = rng.random_range(0.1..0.9);
        let mask = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
        let pattern = SupportPattern::new(rows, cols, mask).unwrap();
        let basis: Vec<_> = pattern.cells().map(|(r, c)| ComplexMatrix::coordinate(rows, cols, r, c)).collect();
        assert_eq!(
            generic_max_rank(&basis, 8, 0, 1e-9).unwrap(),
            pattern_max_rank(&pattern),
            "{:?}",
            Vec::<String>::from(pattern.clone())
        );
    }
}

#[test]
fn every_small_sec3_output_is_certified() {
    for dprime in 2..=7 {
        for d in 2..=dprime {
            for k in 2..=d {
                for plan in enumerate_constructions(k, d, dprime).unwrap() {
                    let set = construct_sec3(&plan, &fourier_phases(k).unwrap()).unwrap();
                    let report = verify(&set, 1e-10, 0).unwrap();
                    assert_eq!(report.overall, Overall::Certified, "{plan:?}: {report:?}");
                    assert!(matches!(report.certificate.kind, CertificateKind::PatternBound { .. }));
                }
            }
        }
    }
}

#[test]
fn deleting_any_matrix_raises_complement_rank() {
    let mut rng = seeded(5);
    let sets = [
        (4, 6, 7, Sec3Case::C2, 0),
        (3, 5, 7, Sec3Case::C4, 1),
        (2, 4, 5, Sec3Case::C1, 1),
        (3, 6, 6, Sec3Case::C3, 2),
    ];
    for _ in 0..20 {
        let (k, d, dprime, case, param) = sets[rng.random_range(0..sets.len())];
        let plan = Sec3Plan::new(k, d, dprime, case, param).unwrap();
        let set = construct_sec3(&plan, &tensor_hadamard_phases(k).unwrap_or_else(|_| fourier_phases(k).unwrap())).unwrap();
        let index = rng.random_range(0..set.len());
        let smaller = set.without(index);
        let complement = smaller.complement(1e-9).unwrap();
        assert!(generic_max_rank(&complement, 8, 0, 1e-9).unwrap() >= k);
        assert_ne!(verify(&smaller, 1e-10, 0).unwrap().overall, Overall::Certified);
    }
}

#[test]
fn hadamard_sets_have_expected_counts_and_certificates() {
    let search = ExtensionSearch::default();
    let verdict = check_extension(&builtin_h3x5(), &search).unwrap();
    assert!(!verdict.found());
    assert!(verdict.heuristic);
    for (dprime, count) in [(5, 23), (6, 28), (7, 33), (8, 38)] {
        let set = build_umeb_from_hadamard(&builtin_h3x5(), dprime, &search).unwrap();
        assert_eq!(set.len(), count);
        assert_eq!(set.kind(), BasisKind::Umeb);
        assert!(verify_gram(&set, 1e-10).0);
    }
    let set = build_umeb_from_hadamard(&builtin_h3x5(), 5, &search).unwrap();
    let cert = certify_unextendible(&set, &VerifyOptions::default()).unwrap();
    assert!(matches!(cert.kind, CertificateKind::HadamardNoExtension { .. }));
    assert!(cert.is_heuristic() && !cert.refutes());
    assert_eq!(verify(&set, 1e-10, 0).unwrap().overall, Overall::Certified);
}

#[test]
fn fourier_rows_extend() {
    let h = PartialHadamard::fourier_rows(3, 5).unwrap();
    let verdict = check_extension(&h, &ExtensionSearch::default()).unwrap();
    assert!(verdict.found());
    assert!(verdict.residual() < 1e-8);
    let row = verdict.witness().unwrap();
    assert!(row.iter().all(|z| (z.norm() - 1.0).abs() < 1e-8));
    h.extended_with(row).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let plan = Sec3Plan::new(3, 4, 5, Sec3Case::C2, 0).unwrap();
    let set = construct_sec3(&plan, &fourier_phases(3).unwrap()).unwrap().without(0);
    let opts = VerifyOptions::new(1e-10, 42);
    assert_eq!(
        ueb_core::verify::verify_with(&set, &opts).unwrap(),
        ueb_core::verify::verify_with(&set, &opts).unwrap()
    );
}
