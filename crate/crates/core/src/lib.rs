//! Resonance catalogs, effective quadratic Hamiltonians and small-divisor
//! checks for two- and three-dimensional invariant tori of the quintic
//! nonlinear Schrödinger equation on the circle.
//!
//! Everything in this crate is pure computation over `alloc`; IO, FFT based
//! simulation and the command-line front end live in `quintic-tools`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod error;
pub mod normal_form;
pub mod quoted;
pub mod resonance;
pub mod rho_form;
pub mod small_divisors;
pub mod torus;

pub use error::Error;
pub use torus::{RhoBox, TorusSpec};

/// A Fourier wavenumber on ℤ.
pub type ModeIndex = i64;
