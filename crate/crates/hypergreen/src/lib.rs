//! Special-function engine and Dirichlet solver for the m-dimensional
//! elliptic equation with n singular coefficients
//!
//! ```text
//!     sum_i u_{x_i x_i} + sum_{k<=n} (2 alpha_k / x_k) u_{x_k} = 0
//! ```
//!
//! on the hyper-hemisphere `{ |x| < R, x_1 > 0, ..., x_n > 0 }`.
//!
//! The crate is organised around the analytic solution of the Dirichlet
//! problem: a Lauricella `F_A` engine ([`hyperfun`]), the fundamental
//! solution `q_n` and the reflected Green's function ([`kernel`]),
//! surface quadrature on the spherical cap and the flat faces
//! ([`domain`]), boundary-integral evaluation of the solution
//! ([`solver`]), and independent finite-difference / brute-force
//! verification oracles ([`oracle`]).
//!
//! The crate is `no_std` (with `alloc`); all floating-point work is
//! `f64`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod domain;
mod error;
pub mod hyperfun;
pub mod kernel;
mod math;
pub mod oracle;
pub mod solver;

pub use error::Error;

/// Convenience result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
