//! Truncated matrix Stieltjes moment problems of odd order on a half-line
//! `[alpha, inf)`.
//!
//! The crate checks solvability of a finite sequence of Hermitian `q x q`
//! moments, builds the resolvent matrix polynomial `Theta` of the problem,
//! describes the solutions through a linear fractional transformation of
//! Stieltjes parameter pairs and verifies candidate solutions through
//! Potapov fundamental matrices.
//!
//! # Examples
//!
//! ```
//! use stieltjes_core::matcore::{c64, ToleranceConfig};
//! use stieltjes_core::momentseq::MomentSequence;
//! use stieltjes_core::solver::unique_solution;
//! let tol = ToleranceConfig::default();
//! let seq = MomentSequence::scalar(0.0, &[1.0, 0.0]).unwrap();
//! let s = unique_solution(&seq, 0, &tol).unwrap();
//! let z = c64(1.0, 2.0);
//! assert!((s.value(z).unwrap()[(0, 0)] + 1.0 / z).norm() < 1e-14);
//! ```

pub mod error;
pub mod matcore;
pub mod momentseq;
pub mod poly;
pub mod potapov;
pub mod resolvent;
pub mod solver;
pub mod stieltjes;

pub use error::{Error, Result};
