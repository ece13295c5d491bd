//! Saddle-point asymptotics of F(n) and γ(n), the normalizing sequences
//! A(n), δ(n) for each sequence family, and the I-Bessel function used by
//! the modular-form coefficient asymptotics.

pub mod bessel;
pub mod normalization;
pub mod saddle;
pub(crate) mod series;

pub use bessel::{bessel_i, bessel_i_asymptotic, bessel_i_series, X_SWITCH};
pub use normalization::{c_of, c_of_with, modular_a_delta, zeta_a_delta, AsymParams, Family};
pub use saddle::{b1_of, f_hat, gamma_hat, log_expansion, saddle_coeffs, solve_l, SaddleData};
