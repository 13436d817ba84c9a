//! Exact finite-field harmonic analysis: cyclotomic arithmetic, characters and Gauss sums of
//! `GF(p^m)`, compressed Fourier matrices, and nonvanishing-minors decisions.
//!
//! The crate is `no_std` and only needs `alloc`. Every zero test is exact.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod characters;
pub mod cyclotomic;
pub mod finite_field;
pub mod ntheory;
pub mod nvm;
pub mod transform;
