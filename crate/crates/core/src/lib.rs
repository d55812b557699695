//! Exact and Monte Carlo evaluators for the curvature bookkeeping of
//! Green-Griffiths jet bundles and Semple towers.
//!
//! The crate is organised around pairs of independent routes to the same
//! quantity: an exact combinatorial or rational formula on one side and a
//! seeded Monte Carlo estimator or brute-force enumeration on the other.
//! The [`checks`] module bundles those cross-checks into a reproducible
//! verification suite.

pub mod checks;
pub mod curvature;
pub mod error;
pub mod gg;
pub mod hermitian;
pub mod morse;
pub mod parallel;
pub mod rational;
pub mod rng;
pub mod semple;
pub mod sphere;

pub use error::Error;
pub use num_complex::Complex64;
pub use rational::Rational;
pub use rng::RandomStream;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
