//! Engine for the graded monoid of braid-orbit components over a finite
//! permutation group.
//!
//! Given a group G, a set D of distinguished conjugacy classes, and a
//! multiplicity vector ξ, the degree-n elements are the orbits of product-one
//! tuples with entry-class counts n·ξ under the braid moves
//! σᵢ: (…, gᵢ, gᵢ₊₁, …) ↦ (…, gᵢgᵢ₊₁gᵢ⁻¹, gᵢ, …). Concatenation makes the
//! orbit set a graded commutative monoid; the crate enumerates it, tabulates
//! Hilbert functions per generated subgroup, analyses their growth, and
//! describes the spectrum of the associated monoid algebra. A dedicated fast
//! path covers symmetric groups with the transposition class, where orbits
//! are classified by edge-labelled set partitions.

pub mod config;
pub mod error;
pub mod asymptotics;
pub mod braid;
pub mod group;
pub mod io;
pub mod monoid;
pub mod perm;
pub mod spectrum;
pub mod sym;
pub mod verify;
pub mod subgroups;

pub use config::Caps;
pub use error::{Error, Result};
