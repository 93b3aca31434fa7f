//! Radial Schrödinger resolvent kernels and weighted resolvent norms.
//!
//! The crate builds the fundamental pair `(u0, u1)` for the half-line
//! operator `-h^2 d^2/dr^2 + V(r) + m r^-2` at energy `E + i eps`, assembles
//! the resolvent kernel from it, and estimates weighted operator norms
//! channel by channel. Supporting pieces are a real-order Bessel/Airy
//! library ([`specfun`]), compactly supported radial potentials
//! ([`potential`]), and a log-grid Mellin transform ([`mellin`]).

pub mod error;
pub mod fit;
pub mod mellin;
pub mod potential;
pub mod quadrature;
pub mod radial_solver;
pub mod resolvent;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
