//! Connection coefficients, numerical integrals and invariant Hermitian forms
//! for the Selberg-type integral
//! `∫ Π(t_j − t_i)^g Π t_i^a (1 − t_i)^b (t_i − z)^c dt`.

pub mod config;
pub mod connection;
pub mod draws;
pub mod error;
pub mod hermitian;
pub mod integrals;
pub mod qkernel;
pub mod qseries;
pub mod sum;

pub use error::{Error, Result};
pub use qkernel::{ExponentChart, QContext, C64};
