//! High-precision computation of the Taylor coefficients γ(n) of
//! `(-1 + 4z²) Λ(1/2 + z)`, their saddle-point asymptotics, and Jensen
//! polynomials of zeta, partition and modular-form coefficient sequences
//! together with certified hyperbolicity checks.
//!
//! Module map:
//!
//! - [`zeta`]: θ₀, the integral F(n), Λ⁽ⁿ⁾(1/2) and γ(n) by quadrature.
//! - [`asymptotics`]: the saddle point L(n), F̂(n), γ̂(n), the saddle
//!   coefficients A₃…A₆, the normalizations A(n), δ(n) and the I-Bessel
//!   function.
//! - [`sequences`]: the partition function, sequence providers and the
//!   on-disk γ cache.
//! - [`jensen`]: Jensen, Hermite and generalized Hermite polynomials,
//!   renormalization, Hermite's criterion, Sturm chains and the sweeps
//!   built on top of them.

pub mod asymptotics;
pub mod bigreal;
pub mod error;
pub mod interval;
pub mod jensen;
pub mod quadrature;
pub mod sequences;
pub mod zeta;

pub use bigreal::{BigReal, MIN_PREC};
pub use error::{Error, Result};
