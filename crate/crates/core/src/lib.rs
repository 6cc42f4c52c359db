//! Exact symbolic engine for degree-`p` graded symplectic supermanifolds
//! `T*[p]T[1]R^d` (optionally `× R[3]`), their homological hamiltonians and
//! the Courant-type algebroids obtained from derived brackets.
//!
//! All arithmetic is over arbitrary-precision rationals; identities are
//! checked by exact equality.

pub mod algebra;
pub mod algebroid;
pub mod cartan;
pub mod error;
pub mod genmetric;
pub mod npq;
pub mod random;
pub mod report;
pub mod symplectic;

pub use error::{Error, Result};
