//! UMEBs from unextendible partial Hadamard matrices.
//!
//! With `J_{d x d'} = P_0 + ... + P_{d'-1}` the cyclic decomposition, the
//! phase matrices `Q_l^a` for `l >= 1` fill every `P_l` slot completely.
//! The `P_0` slot receives one matrix per row of an `m x d` partial Hadamard
//! matrix `H`, laid along the `P_0` diagonal. The result is unextendible
//! exactly when `H` admits no further unimodular row orthogonal to its rows.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, BasisSet, Provenance};
use crate::certificate::{Certificate, CertificateKind};
use crate::error::{invalid, Result};
use crate::lift::{cyclic_decomposition, phase_matrix};
use crate::matrix::{dot, ComplexMatrix, ZERO};
use crate::rng::{seeded, unit_phase};

const UNIMODULAR_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-9;

/// `m x d` matrix with unimodular entries and rows satisfying
/// `sum_l conj(h_{y,l}) h_{y',l} = d * delta_{y,y'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialHadamard {
    entries: ComplexMatrix,
}

impl PartialHadamard {
    pub fn new(entries: ComplexMatrix) -> Result<Self> {
        let (m, d) = entries.shape();
        if m > d {
            return Err(invalid(format!("partial Hadamard needs m <= d, got {m}x{d}")));
        }
        if let Some(pos) = entries
            .entries()
            .iter()
            .position(|z| (z.norm() - 1.0).abs() > UNIMODULAR_TOL)
        {
            return Err(invalid(format!(
                "entry ({}, {}) is not unimodular",
                pos / d,
                pos % d
            )));
        }
        let gram = entries.matmul(&entries.adjoint())?;
        for y in 0..m {
            for z in 0..m {
                let expected = if y == z { d as f64 } else { 0.0 };
                if (gram[(y, z)] - Complex64::new(expected, 0.0)).norm() > ORTHOGONALITY_TOL {
                    return Err(invalid(format!("rows {y} and {z} violate orthogonality")));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.rows()
    }

    pub fn d(&self) -> usize {
        self.entries.cols()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn row(&self, y: usize) -> Vec<Complex64> {
        (0..self.d()).map(|l| self.entries[(y, l)]).collect()
    }

    /// Appends `row`, validating the result as a partial Hadamard matrix.
    pub fn extended_with(&self, row: &[Complex64]) -> Result<Self> {
        if row.len() != self.d() {
            return Err(invalid("extension row has the wrong length"));
        }
        let mut entries = self.entries.entries().to_vec();
        entries.extend_from_slice(row);
        Self::new(ComplexMatrix::new(self.m() + 1, self.d(), entries)?)
    }

    /// First `m` rows of the order-`d` Fourier matrix.
    pub fn fourier_rows(m: usize, d: usize) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(m, d, |a, l| {
            crate::special_basis::root_of_unity(d, a * l)
        }))
    }
}

/// The `3 x 5` partial Hadamard matrix that admits no fourth row.
pub fn builtin_h3x5() -> PartialHadamard {
    let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let s5 = 5f64.sqrt();
    let s6 = 6f64.sqrt();
    let rows = [
        [one, one, one, one, one],
        [one, -one, one, w, w * w],
        [
            (s5 + i) / s6,
            i,
            (-s5 + i) / s6,
            (s6 * w * w * i + (w - one) * i) / 3.0,
            (s6 * w * i + (w * w - one) * i) / 3.0,
        ],
    ];
    let entries = rows.iter().flatten().copied().collect();
    PartialHadamard::new(ComplexMatrix::new(3, 5, entries).expect("3x5 entries"))
        .expect("built-in H_3x5 is a partial Hadamard matrix")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExtensionOutcome {
    ExtensionFound {
        row: Vec<Complex64>,
        residual: f64,
    },
    NoExtensionFound {
        #[serde(with = "extended_real")]
        best_residual: f64,
        attempts: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionVerdict {
    #[serde(flatten)]
    pub outcome: ExtensionOutcome,
    /// Set when a negative outcome rests on a finite random search.
    pub heuristic: bool,
}

impl ExtensionVerdict {
    pub fn found(&self) -> bool {
        matches!(self.outcome, ExtensionOutcome::ExtensionFound { .. })
    }

    pub fn witness(&self) -> Option<&[Complex64]> {
        match &self.outcome {
            ExtensionOutcome::ExtensionFound { row, .. } => Some(row),
            ExtensionOutcome::NoExtensionFound { .. } => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match &self.outcome {
            ExtensionOutcome::ExtensionFound { residual, .. } => *residual,
            ExtensionOutcome::NoExtensionFound { best_residual, .. } => *best_residual,
        }
    }
}

/// Multi-start alternating-projection settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionSearch {
    pub attempts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ExtensionSearch {
    fn default() -> Self {
        Self {
            attempts: 200,
            iters: 1000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

impl ExtensionSearch {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Searches for a unimodular `g` with `sum_l conj(h_{y,l}) g_l = 0` for every
/// row `y`. A negative answer is heuristic unless `m = d`.
pub fn check_extension(h: &PartialHadamard, search: &ExtensionSearch) -> Result<ExtensionVerdict> {
    if search.attempts == 0 || search.iters == 0 {
        return Err(invalid("attempts and iters must be at least 1"));
    }
    if h.m() == h.d() {
        return Ok(ExtensionVerdict {
            outcome: ExtensionOutcome::NoExtensionFound {
                best_residual: f64::INFINITY,
                attempts: 0,
            },
            heuristic: false,
        });
    }
    let rows: Vec<Vec<Complex64>> = (0..h.m()).map(|y| h.row(y)).collect();
    let scale = 1.0 / (h.d() as f64).sqrt();
    let orthonormal: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|z| z * scale).collect())
        .collect();
    Ok(unimodular_search(&orthonormal, &rows, h.d(), search))
}

/// Alternating projections between the orthogonal complement of
/// `span(constraints)` and the torus of unimodular vectors. `constraints` must
/// be orthonormal; the residual is `max_y |<residual_rows[y], g>|`.
pub(crate) fn unimodular_search(
    constraints: &[Vec<Complex64>],
    residual_rows: &[Vec<Complex64>],
    len: usize,
    search: &ExtensionSearch,
) -> ExtensionVerdict {
    let residual = |g: &[Complex64]| {
        residual_rows
            .iter()
            .map(|r| dot(r, g).norm())
            .fold(0.0, f64::max)
    };
    let mut best = f64::INFINITY;
    for attempt in 0..search.attempts {
        let mut rng: ChaCha8Rng = seeded(search.seed);
        rng.set_stream(attempt as u64);
        let mut g: Vec<Complex64> = (0..len).map(|_| unit_phase(&mut rng)).collect();
        for it in 0..search.iters {
            for u in constraints {
                let c = dot(u, &g);
                for (x, y) in g.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
            for z in g.iter_mut() {
                let n = z.norm();
                *z = if n > 1e-300 { *z / n } else { unit_phase(&mut rng) };
            }
            if it % 16 == 15 && residual(&g) < search.tol {
                break;
            }
        }
        let r = residual(&g);
        if r < search.tol {
            return ExtensionVerdict {
                outcome: ExtensionOutcome::ExtensionFound { row: g, residual: r },
                heuristic: false,
            };
        }
        best = best.min(r);
    }
    ExtensionVerdict {
        outcome: ExtensionOutcome::NoExtensionFound {
            best_residual: best,
            attempts: search.attempts,
        },
        heuristic: true,
    }
}

/// The `d(d'-1) + m` matrices `Z_0 ∪ Z_1`, with the extension search deciding
/// the certificate. When the search finds a row, the certificate carries it
/// as a witness of extendibility.
pub fn build_umeb_from_hadamard(h: &PartialHadamard, dprime: usize, search: &ExtensionSearch) -> Result<BasisSet> {
    let (m, d) = (h.m(), h.d());
    if m >= d {
        return Err(invalid(format!("need m < d, got m={m}, d={d}")));
    }
    if dprime < d {
        return Err(invalid(format!("need d <= d', got d={d}, d'={dprime}")));
    }
    let decomposition = cyclic_decomposition(d, dprime)?;
    let mut matrices = Vec::with_capacity(d * (dprime - 1) + m);
    for l in 1..dprime {
        for a in 0..d {
            matrices.push(phase_matrix(&decomposition, l, a)?.into_matrix());
        }
    }
    let diagonal = decomposition.perm(0);
    for y in 0..m {
        let mut hy = ComplexMatrix::zeros(d, dprime);
        for (i, &j) in diagonal.iter().enumerate() {
            hy[(i, j)] = h.entries()[(y, i)];
        }
        debug_assert!(hy.entries().iter().filter(|z| **z != ZERO).count() == d);
        matrices.push(hy);
    }
    let verdict = check_extension(h, search)?;
    let mut provenance = Provenance::new("partial-hadamard")
        .param("m", m)
        .param("d", d)
        .param("dprime", dprime)
        .param("attempts", search.attempts)
        .param("iters", search.iters)
        .with_seed(search.seed);
    if verdict.heuristic {
        provenance = provenance.note("no extension row found by a finite randomized search; not a proof");
    }
    let certificate = Certificate::new(CertificateKind::HadamardNoExtension { verdict }, search.tol);
    Ok(BasisSet::new(d, dprime, d, matrices, BasisKind::Umeb, provenance)?.with_certificate(certificate))
}

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(f64),
        Special(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            Repr::Finite(*x)
        } else if x.is_nan() {
            Repr::Special("nan".into())
        } else if *x > 0.0 {
            Repr::Special("inf".into())
        } else {
            Repr::Special("-inf".into())
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Finite(x) => Ok(x),
            Repr::Special(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("invalid number {other:?}"))),
            },
        }
    }
}
