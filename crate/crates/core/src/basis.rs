use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{invalid, Error, Result};
use crate::matrix::{complement_basis, state_from_matrix, BipartiteState, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    #[serde(rename = "SV1B")]
    Sv1b,
    #[serde(rename = "USV1B")]
    Usv1b,
    #[serde(rename = "MEB")]
    Meb,
    #[serde(rename = "UMEB")]
    Umeb,
}

impl BasisKind {
    /// Kinds that claim unextendibility and therefore must be incomplete.
    pub fn is_unextendible(self) -> bool {
        matches!(self, Self::Usv1b | Self::Umeb)
    }

    pub fn is_maximally_entangled(self) -> bool {
        matches!(self, Self::Meb | Self::Umeb)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sv1b => "SV1B",
            Self::Usv1b => "USV1B",
            Self::Meb => "MEB",
            Self::Umeb => "UMEB",
        })
    }
}

/// Where a basis set came from: a construction name plus its parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(construction: impl Into<String>) -> Self {
        Self {
            construction: construction.into(),
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// An ordered family of `d x d'` matrices, each meant to be a
/// `k`-singular-value-1 matrix, with pairwise HS products `k * delta`.
///
/// The constructor only enforces shapes; whether the family really has the
/// claimed kind is the verifier's job.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    d: usize,
    dprime: usize,
    k: usize,
    matrices: Vec<ComplexMatrix>,
    kind: BasisKind,
    provenance: Provenance,
    certificate: Option<Certificate>,
}

impl BasisSet {
    pub fn new(
        d: usize,
        dprime: usize,
        k: usize,
        matrices: Vec<ComplexMatrix>,
        kind: BasisKind,
        provenance: Provenance,
    ) -> Result<Self> {
        if d == 0 || dprime == 0 {
            return Err(invalid(format!("space dimensions must be positive, got {d}x{dprime}")));
        }
        if k == 0 || k > d.min(dprime) {
            return Err(invalid(format!("Schmidt number {k} out of range for {d}x{dprime}")));
        }
        if matrices.len() > d * dprime {
            return Err(invalid(format!(
                "{} matrices exceed the space dimension {}",
                matrices.len(),
                d * dprime
            )));
        }
        if let Some(m) = matrices.iter().find(|m| m.shape() != (d, dprime)) {
            return Err(Error::ShapeMismatch {
                expected: (d, dprime),
                found: m.shape(),
            });
        }
        Ok(Self {
            d,
            dprime,
            k,
            matrices,
            kind,
            provenance,
            certificate: None,
        })
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn set_certificate(&mut self, certificate: Option<Certificate>) {
        self.certificate = certificate;
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension `d * d'` of the ambient space.
    pub fn space_dim(&self) -> usize {
        self.d * self.dprime
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    /// Copy of the set without the matrix at `index`; the certificate is dropped.
    pub fn without(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.matrices.remove(index);
        out.certificate = None;
        out
    }

    /// Same matrices under a different kind label; the certificate is dropped.
    pub fn relabeled(&self, kind: BasisKind) -> Self {
        let mut out = self.clone();
        out.kind = kind;
        out.certificate = None;
        out
    }

    /// Normalized states `A_i / sqrt(k)`.
    pub fn states(&self) -> Vec<BipartiteState> {
        let s = num_complex::Complex64::new(1.0 / (self.k as f64).sqrt(), 0.0);
        self.matrices
            .iter()
            .map(|m| state_from_matrix(&m.scale(s)))
            .collect()
    }

    pub fn complement(&self, tol: f64) -> Result<Vec<ComplexMatrix>> {
        complement_basis(&self.matrices, self.d, self.dprime, tol)
    }

    /// Describes why the cardinality or kind label is inconsistent, if it is.
    pub fn kind_violation(&self) -> Option<String> {
        let n = self.len();
        let dim = self.space_dim();
        if self.kind.is_unextendible() && n >= dim {
            return Some(format!("{} requires fewer than {dim} elements, found {n}", self.kind));
        }
        if !self.kind.is_unextendible() && n != dim {
            return Some(format!("{} requires exactly {dim} elements, found {n}", self.kind));
        }
        if self.kind.is_maximally_entangled() && self.k != self.d.min(self.dprime) {
            return Some(format!(
                "{} requires k = {} but k = {}",
                self.kind,
                self.d.min(self.dprime),
                self.k
            ));
        }
        None
    }
}
