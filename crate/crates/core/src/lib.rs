#![allow(unstable_name_collisions)]

pub mod affine_weyl;
pub mod canonical;
pub mod crystal;
pub mod error;
pub mod flag_comb;
pub mod hecke;
pub mod laurent;
pub mod rational;
pub mod schur;
pub mod suites;
pub mod tmodule;
pub mod transfer;

pub use affine_weyl::{AffinePermutation, YoungSubgroup};
pub use error::{Error, Result};
pub use flag_comb::{matrix_of_pair, FlagSymbol, OrderHint, PeriodicMatrix};
pub use laurent::Laurent;
pub use rational::Rational;
