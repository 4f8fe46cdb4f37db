//! Linear-programming bounds on difference-avoiding subsets of finite
//! abelian groups, and their application to mutually unbiased bases.
//!
//! The library has three layers:
//!
//! * [`group`] — finite abelian groups, characters, the normalized Fourier
//!   transform, and forbidden-set bookkeeping; [`lp`] — a small dense
//!   simplex solver used to search for optimal witness functions.
//! * [`delsarte`] — the classical witness-function bound
//!   `|B| <= h(0)/ĥ(1)` for sets `B` whose pairwise differences avoid a
//!   forbidden set, together with brute-force oracles; [`improved`] — the
//!   two-witness refinement that recovers part of the spectral mass the
//!   classical argument discards, and the exclusion test for pinned
//!   configurations.
//! * [`mub`] and [`certificate`] — the application: unimodular vectors,
//!   complex Hadamard matrices, the two-parameter 6x6 Fourier family, and
//!   the machine-checkable certificate that no matrix of that family
//!   extends to a full system of mutually unbiased Hadamard matrices.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature instead of the default `std` feature for `no_std` builds. All
//! operations are pure functions of their inputs and safe to call
//! concurrently.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("delsarte-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod certificate;
pub mod delsarte;
pub mod group;
pub mod improved;
pub mod lp;
pub mod mub;

mod linalg;
mod rng;

/// Absolute tolerance used by default when judging "real", "nonnegative"
/// or "zero"; every check accepting a tolerance can be given another one.
pub const DEFAULT_TOL: f64 = 1e-9;

pub use num_complex::Complex64;
