//! Exact computations certifying the genus-one B-model ledger of the (3,3)
//! complete intersection mirror family.
//!
//! The pipeline runs in dependency order:
//! [`lattice_fan`] builds the fans, [`cox_geometry`] restricts the defining
//! equations to toric strata, [`euler_top`] and [`euler_holo`] produce the
//! Euler characteristics of the central fiber, [`series`] and [`gw`] handle
//! the period series near the large complex structure point, and [`ledger`]
//! assembles the divisor of the comparison function.

// Index loops mirror the matrix and series formulas directly.
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod cox_geometry;
pub mod error;
pub mod euler_holo;
pub mod euler_top;
pub mod gw;
pub mod lattice_fan;
pub mod ledger;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod series;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use ledger::{verify_bcov, VerificationReport};
pub use polytope::{mixed_volume_ie, Polytope};
pub use rational::Q;
