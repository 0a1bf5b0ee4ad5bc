//! Restricted Lie algebras of derivations of truncated polynomial rings
//! over finite fields: the Jacobson-Witt algebras `W_n`, their special
//! subalgebras `S_n`, adjoint quotient invariants, regularity, slices and
//! the automorphism group action.
//!
//! Axes are 0-based in the API (`axis = 0` is `x_1`, `D_1`).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod autgrp;
pub mod derlie;
pub mod error;
pub mod ffield;
pub mod invariants;
pub mod linalg;
pub mod sample;
pub mod slices;
pub mod special;
pub mod truncpoly;

pub use autgrp::{Automorphism, Degeneration};
pub use derlie::Derivation;
pub use error::{Error, Result};
pub use ffield::{Dual, DualRing, DualScalar, Field, Ring, Scalar};
pub use invariants::{InvariantVector, PPolynomial, RegularityFlags, Route};
pub use linalg::{Matrix, RowSpace};
pub use slices::{SliceElement, SliceKind, TangentReport};
pub use special::{Membership, SnContext};
pub use truncpoly::{Ambient, Degree, TruncPoly};
