//! The infinite q-boson lattice system.
//!
//! The crate is organised bottom-up:
//!
//! - [`qnum`]: q-integers, q-factorials, q-binomials and Poincaré polynomials over an
//!   exact-rational or complex-float [`Scalar`](qnum::Scalar).
//! - [`fock`]: dominant weights, finitely supported states and the q-boson field algebra.
//! - [`hamiltonians`]: the commuting hierarchy `H_r`, `H*_r`, both from hopping monomials and
//!   in closed form, plus the gauge-transformed operators.
//! - [`hall_littlewood`]: Hall–Littlewood eigenfunctions, the C-function, the orthogonality
//!   density and the flat-gauge wave functions.
//! - [`spectral`]: alcove quadrature, Fourier transform pairs, multiplication operators and
//!   time evolution.
//! - [`scattering`]: regular domains, the scattering matrix and wave-packet asymptotics
//!   against the phase model.
//! - [`verify`] and [`cli`]: the verification suites and the command-line front end.

pub mod error;
pub mod fock;
pub mod hall_littlewood;
pub mod hamiltonians;
pub mod perm;
pub mod qnum;
pub mod scattering;
pub mod spectral;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
pub use fock::{StateFn, Weight};
pub use qnum::{QContext, Scalar};
