//! Exact combinatorics of Brill-Noether loci in the moduli space of curves.
//!
//! Everything is integer arithmetic: Brill-Noether numbers, expected maximal
//! loci, chain-curve decompositions with limit linear series, and
//! re-checkable certificates for non-containments and for components of
//! expected dimension.

pub mod arith;
pub mod certificate;
pub mod chains;
pub mod dimension;
pub mod error;
pub mod locus;
pub mod maximal;
pub mod noncontainment;
pub mod prym;

/// Integer width used throughout.
pub type Int = i64;
/// Overflow-free reference width for cross-checks.
pub type WideInt = i128;

pub use certificate::{Certificate, CertificateKind};
pub use chains::{build_chain_prop31, build_chain_search, verify_chain, ChainDecomposition};
pub use dimension::{expected_dim_certificate, verify_dim_certificate, DimCertificate};
pub use error::{Error, Result};
pub use locus::{canonicalize, rho, serre_dual, CanonicalLocus, LocusId};
pub use noncontainment::{build_stratification_graph, consistency_check, StratificationGraph};
