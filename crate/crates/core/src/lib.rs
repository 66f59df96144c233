//! Linear algebra over GF(2) for stabilizer codes.
//!
//! This crate computes canonical decompositions `A = L·Π·R` for three
//! families of binary matrices:
//!
//! - unrestricted `m × n` matrices ([`canon::decompose_unrestricted`]),
//! - stabilizer parity check matrices `m × 2n` with `A·Λ·Aᵀ = 0`
//!   ([`canon::decompose_stabilizer`]),
//! - symplectic matrices `2n × 2n` with `Aᵀ·Λ·A = Λ`, i.e. Clifford group
//!   elements modulo Paulis and phases ([`canon::decompose_symplectic`]),
//!
//! together with exact counting and uniform sampling built on the same
//! parameterization ([`sample`]), finite-blocklength achievability and
//! converse bounds for error guessing under Pauli noise ([`bounds`]), and a
//! Monte-Carlo simulator of the error-guessing decoder ([`mc`]).
//!
//! # Conventions
//!
//! All indices are **0-based**. For a `2n`-dimensional symplectic space the
//! coordinates are ordered `(X_0, …, X_{n-1}, Z_{n-1}, …, Z_0)`, so index `i`
//! and its mirror `2n-1-i` act on the same qubit `min(i, 2n-1-i)`, and the
//! symplectic form is given by the reverse-diagonal matrix `Λ`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod bounds;
pub mod canon;
pub mod error;
pub mod gf2;
pub mod mc;
pub mod moves;
pub mod rational;
pub mod rng;
pub mod sample;

pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
