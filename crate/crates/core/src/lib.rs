//! Exact significand analysis for Benford-type questions.
//!
//! The library answers "how far is `X` from the logarithmic first-digit
//! law?" in closed form for a small catalog of analytic distributions,
//! and empirically for user data. The central object is the distribution
//! of `frac(log_b X)` on `[0,1)`: `X` follows the Benford law in base `b`
//! exactly when that fractional part is uniform.
//!
//! Modules:
//! - [`digits`]: bases, significands, digit extraction, the Benford pmf
//! - [`modone`]: exact piecewise CDFs of `frac(log_b X)` and sampling
//! - [`metrics`]: KS and Wasserstein distances to the uniform law
//! - [`spread`]: scale-dependent dispersion measures
//! - [`audit`]: the prepackaged studies behind the CLI
//! - [`cli`]: data ingestion and report serialization for the binary

pub mod audit;
pub mod cli;
pub mod digits;
pub mod error;
pub mod metrics;
pub mod modone;
pub mod spread;

pub use digits::Base;
pub use error::{Error, Result};
