//! Desk-scale finite group machinery for approximation experiments: exact
//! permutation arithmetic with Hamming lengths, enumerated permutation groups,
//! n-consequence sets and separation, invariant length functions, conjugacy
//! coverage sweeps in alternating groups, approximation certificates and
//! brute-force solvability of equation systems.

pub mod approx;
pub mod catalog;
pub mod coverage;
pub mod equations;
pub mod error;
pub mod group;
pub mod length;
pub mod perm;
pub mod rational;
pub mod word;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupRef, GroupSpec};
pub use perm::{NormalizedLength, Parity, Permutation};
pub use rational::Rational;
