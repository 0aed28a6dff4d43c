//! Finite geometry over `GF(q^2)`, few-weight projective codes and Massey
//! secret sharing on their duals.
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature only switches
//! the error type to `std::error::Error`; `parallel` spreads the hyperplane
//! loops over a rayon pool.
//!
//! Layout:
//!
//! * [`gf`]: prime-power fields with Conway moduli, the `GF(q)` subfield of
//!   `GF(q^2)`, Frobenius, trace and norm.
//! * [`geom`]: points, hyperplanes, lines and subspaces of `PG(r, q_f)` with a
//!   canonical global point order.
//! * [`variety`]: the degree-`2q` hypersurface, Hermitian and quasi-Hermitian
//!   varieties, and their hyperplane / line spectra.
//! * [`code`]: projective codes, weight distributions, higher weights,
//!   divisibility and minimality.
//! * [`sss`]: Massey schemes on the dual code, access structures and
//!   permutation-group developments.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bitset;
pub mod budget;
pub mod code;
mod conway;
pub mod error;
pub mod geom;
pub mod gf;
pub mod linalg;
pub mod sss;
pub mod variety;

pub use budget::Budget;
pub use error::{Error, Result};
pub use geom::ProjSpace;
pub use gf::{FieldCtx, FieldElem};
