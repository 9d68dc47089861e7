//! Exact arithmetic for torsion linking forms on rational homology
//! 3-spheres: the classical pairing `lambda_2`, the triple pairing
//! `lambda_3`, Lagrangian enumeration, the induced rational-homology-ball
//! obstruction, and exhaustive searches over clasper-surgery families.
//!
//! The algebra layer ([`abelian`], [`linking`], [`triple`]) is
//! arbitrary-precision throughout; fixed-width residue arithmetic appears
//! only inside the [`search`] hot loops, where the moduli are tiny primes
//! and every value is bounded by construction.

pub mod abelian;
pub mod clasper;
pub mod linking;
pub mod model;
pub mod obstruct;
pub mod search;
pub mod triple;
