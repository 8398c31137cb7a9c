//! Machine-checkable unextendibility verdicts.

use serde::{Deserialize, Serialize};

use crate::hadamard::{ExtensionOutcome, ExtensionVerdict};
use crate::pattern::SupportPattern;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateKind {
    /// Every element of the orthogonal complement has rank at most
    /// `max_rank`, estimated from seeded random combinations.
    ComplementRankDeficient { max_rank: usize, trials: usize, seed: u64 },
    /// The complement lives inside `pattern`, whose maximum matching bounds
    /// the rank of every complement element.
    PatternBound { pattern: SupportPattern, matching: usize },
    /// The complement is a diagonal-supported subspace and the search for a
    /// unimodular vector in it produced `verdict`.
    HadamardNoExtension { verdict: ExtensionVerdict },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub tolerance: f64,
}

impl Certificate {
    pub fn new(kind: CertificateKind, tolerance: f64) -> Self {
        Self { kind, tolerance }
    }

    pub fn inconclusive(reason: impl Into<String>, tolerance: f64) -> Self {
        Self::new(
            CertificateKind::Inconclusive {
                reason: reason.into(),
            },
            tolerance,
        )
    }

    /// Whether the certificate rules out a `k`-singular-value-1 matrix in the
    /// complement. A `HadamardNoExtension` certificate counts only when the
    /// search found nothing; that outcome is heuristic.
    pub fn establishes_unextendible(&self, k: usize) -> bool {
        match &self.kind {
            CertificateKind::ComplementRankDeficient { max_rank, .. } => *max_rank < k,
            CertificateKind::PatternBound { matching, .. } => *matching < k,
            CertificateKind::HadamardNoExtension { verdict } => {
                matches!(verdict.outcome, ExtensionOutcome::NoExtensionFound { .. })
            }
            CertificateKind::Inconclusive { .. } => false,
        }
    }

    /// True when the certificate carries an explicit extension witness.
    pub fn refutes(&self) -> bool {
        matches!(
            &self.kind,
            CertificateKind::HadamardNoExtension { verdict }
                if matches!(verdict.outcome, ExtensionOutcome::ExtensionFound { .. })
        )
    }

    /// Upper bound on the rank of complement elements, if the certificate
    /// provides one.
    pub fn rank_bound(&self) -> Option<usize> {
        match &self.kind {
            CertificateKind::ComplementRankDeficient { max_rank, .. } => Some(*max_rank),
            CertificateKind::PatternBound { matching, .. } => Some(*matching),
            _ => None,
        }
    }

    pub fn is_heuristic(&self) -> bool {
        matches!(&self.kind, CertificateKind::HadamardNoExtension { verdict } if verdict.heuristic)
    }

    pub fn label(&self) -> &'static str {
        match &self.kind {
            CertificateKind::ComplementRankDeficient { .. } => "complement-rank-deficient",
            CertificateKind::PatternBound { .. } => "pattern-bound",
            CertificateKind::HadamardNoExtension { .. } => "hadamard-no-extension",
            CertificateKind::Inconclusive { .. } => "inconclusive",
        }
    }
}
