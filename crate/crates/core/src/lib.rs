//! Extreme-value statistics of principal minors of the Gaussian Orthogonal
//! Ensemble.
//!
//! For a GOE matrix `G` of size `n`, `T_{m,n}` is the largest top eigenvalue
//! over all `m × m` principal minors. The crate provides the pieces needed to
//! simulate `T_{m,n}` and its eigenvector and to compare them with their
//! Gumbel and spherical limit laws:
//!
//! - [`linalg`]: packed symmetric matrices and small eigensolvers
//! - [`sampler`]: reproducible GOE, Gaussian and sphere streams
//! - [`scan`]: minor enumeration, the pruned maximum scan and the events
//!   `A_α`, `H_α`
//! - [`laws`]: closed-form constants and limiting distributions
//! - [`km`]: Monte Carlo for `K_m` and the law `ν`
//! - [`chen_stein`]: Poisson-approximation bounds and moment estimators
//! - [`experiments`]: trial orchestration, ECDF/KS tooling, diagnostics and
//!   persistence
//!
//! With the default `parallel` feature, the Monte Carlo loops run on rayon.
//! Every result is keyed by trial or chunk index and is bit-identical for any
//! worker count, including the sequential build.

pub mod chen_stein;
pub mod error;
pub mod experiments;
pub mod km;
pub mod laws;
pub mod linalg;
pub mod matrix_file;
pub mod par;
pub mod sampler;
pub mod scan;

pub use error::{Error, Result};
pub use linalg::{SymMatrix, Spectrum};
pub use par::Workers;
pub use sampler::{derive_stream, RngStream};
pub use scan::{ScanResult, Thresholds};

/// Version string embedded in every JSON output.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
