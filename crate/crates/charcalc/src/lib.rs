//! Exact characteristic-class calculus for split vector bundles.
//!
//! The crate models a ring of virtual sums of line classes over a fixed
//! set of `m` base classes, together with the operations that connect it
//! to truncated cohomology:
//!
//! * [`kring`] — the split model itself: lambda and gamma series, Adams
//!   operations (two independently computed routes), and K-theoretic
//!   Chern classes.
//! * [`symfun`] — Newton polynomials `Q_k` in the elementary symmetric
//!   basis, with evaluation into any commutative ring.
//! * [`cohom`] — truncated cohomology with rational coefficients: Chern
//!   classes (a closed form and a projective-bundle route), Newton
//!   classes, the Chern character, the degree-scaling Adams endomorphism
//!   on cohomology, and the mod-2 Stiefel-Whitney character.
//! * [`poly`] — the underlying sparse multivariate polynomial arithmetic
//!   over exact coefficient rings, with weighted-degree truncation.
//! * [`verify`] — a seeded, deterministic suite that checks every
//!   structural identity the library claims, on random inputs.
//! * [`expr`] — the text grammar for bundle expressions used by the CLI.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals,
//! integers, or mod-2 scalars, and every identity check is an equality
//! of normal forms, never a numeric comparison with tolerance.

pub mod cli;
pub mod coeff;
pub mod cohom;
pub mod expr;
pub mod kring;
pub mod poly;
pub mod ring;
pub mod symfun;
pub mod verify;
