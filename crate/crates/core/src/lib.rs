//! # jeffreys
//!
//! Estimation and asymptotic inference for the symmetric Kullback–Leibler
//! (Jeffreys) divergence between two class-conditional categorical
//! distributions.
//!
//! The setting is a labeled i.i.d. sample `(X_i, Y_i)` with `X` taking values
//! in a finite alphabet `{a_1, ..., a_r}` and `Y ∈ {0, 1}`. Writing
//! `p_j = P(X = a_j | Y = 1)` and `q_j = P(X = a_j | Y = 0)`, the target is
//!
//! ```text
//! D_sym(p, q) = Σ_j (p_j − q_j) ln(p_j / q_j)
//! ```
//!
//! and the estimator is the same sum evaluated at the within-class empirical
//! frequencies. The crate provides:
//!
//! - [`model`]: simplex vectors, divergences, population models and a
//!   reproducible labeled-sample generator.
//! - [`estimator`]: empirical measures and the plug-in estimate.
//! - [`asymptotics`]: influence coefficients, the exact asymptotic variance by
//!   outcome enumeration, its plug-in counterpart, and normal confidence
//!   intervals.
//! - [`bounds`]: closed-form exponential tail bounds for the empirical
//!   building blocks, with optional Monte Carlo validation.
//! - [`montecarlo`]: a replication harness checking consistency, asymptotic
//!   normality and interval coverage.
//! - [`io`]: counts/config parsing, report serialization and the CLI driver.
//!
//! ```
//! use jeffreys::estimator::plug_in_estimate;
//! use jeffreys::model::CountTable;
//!
//! let counts = CountTable::new(vec![3, 1], vec![1, 3]).unwrap();
//! let est = plug_in_estimate(&counts);
//! assert!((est.value().unwrap() - 3f64.ln()).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod asymptotics;
pub mod bounds;
pub mod error;
pub mod estimator;
pub mod io;
pub mod model;
pub mod montecarlo;
pub mod normal;
pub mod rng;
pub mod sum;

pub use error::{Error, Result};
