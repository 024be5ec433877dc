//! Exact-arithmetic toolkit for Nijenhuis Lie algebras.
//!
//! The crate verifies Nijenhuis structures and their representation
//! theory, constructs and deconstructs non-abelian extensions through
//! 2-cocycles, computes abelian second cohomology, and decides when
//! automorphism or derivation pairs lift to an extension (Wells-style
//! obstructions and the associated exact sequences). Every computation
//! is exact, over the rationals or a prime field, and the `oracle`
//! module re-derives the key predicates by brute force so theorem-level
//! claims can be cross-checked on small finite-field instances.

// Identity checks here run over basis index ranges (pairs i < j, triples
// i < j < k) that index several tensors at once; the index is the
// mathematical object, so iterator rewrites would obscure the formulas.
#![allow(clippy::needless_range_loop)]

pub mod cohomology;
pub mod error;
pub mod extensions;
pub mod field;
pub mod inducibility;
pub mod lie;
pub mod linalg;
pub mod nijenhuis;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
