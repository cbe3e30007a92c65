//! Projection lattices of finite-dimensional matrix algebras.
//!
//! Everything here works inside a fixed algebra `A = ⊕ₖ M_{n_k}(ℂ)`, represented
//! block-diagonally. The crate provides
//!
//! * spectral calculus for block Hermitian elements ([`algebra`]),
//! * the lattice operations ∧, ∨, ¬ and Murray–von Neumann equivalence on
//!   projections ([`lattice`]),
//! * canonical forms for pairs of projections in generic position, isoclinic
//!   interpolation and halving ([`two_projections`]),
//! * extension of finitely additive projection measures to linear functionals,
//!   density reconstruction, and the 2×2 obstruction ([`measures`]),
//! * extension of lattice morphisms to Jordan maps, with audits and a Wigner-type
//!   unitary reconstruction ([`morphisms`]),
//! * seeded samplers for Haar-random test data ([`sample`]).
//!
//! All operations are deterministic: identical inputs (and seeds) give identical
//! bytes out. Randomness only ever enters through explicit seeds.
//!
//! The crate is `no_std` (with `alloc`); IO and file formats live in the
//! companion crate `projlat-cli`.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod lattice;
pub mod measures;
pub mod morphisms;
pub mod sample;
pub mod tol;
pub mod two_projections;

pub use algebra::{Algebra, Element, Projection, SpectralResolution};
pub use error::CoreError;
