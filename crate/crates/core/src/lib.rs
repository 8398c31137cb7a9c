//! Constructions of special unextendible entangled bases with fixed Schmidt
//! number and of unextendible maximally entangled bases, together with an
//! independent verifier.
//!
//! States of `C^d (x) C^d'` are handled through their `d x d'` coefficient
//! matrices (see [`matrix`]). The three construction families live in
//! [`zero_pattern`], [`lift`] and [`hadamard`]; [`verify`] certifies any
//! [`BasisSet`] regardless of where it came from.

pub mod basis;
pub mod certificate;
pub mod error;
pub mod hadamard;
pub mod lift;
pub mod matrix;
pub mod pattern;
pub mod rng;
pub mod special_basis;
pub mod verify;
pub mod zero_pattern;

pub use basis::{BasisKind, BasisSet, Provenance};
pub use certificate::{Certificate, CertificateKind};
pub use error::{Error, Result};
pub use matrix::{
    complement_basis, hs_inner, matrix_from_state, schmidt_profile, state_from_matrix, BipartiteState,
    ComplexMatrix, SchmidtProfile, DEFAULT_TOL, IDENTITY_TOL,
};
pub use num_complex::Complex64;
