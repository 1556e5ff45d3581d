//! Graph learning under Laplacian constraints.
//!
//! Estimates an undirected weighted graph from multivariate observations by
//! solving a Laplacian-constrained precision estimation problem with ADMM, where
//! the edge-weight block is handled by a majorization-minimization inner loop.
//! Four variants are provided: connected Gaussian, k-component Gaussian,
//! connected Student-t and k-component Student-t.
//!
//! The crate also ships the pieces needed around the solvers: vectorized graph
//! operators, eigen-based proximal maps, financial preprocessing, graph metrics
//! and seeded synthetic generators used as ground truth.
//!
//! ```
//! use graphlearn::preprocess::{self, ReturnsMatrix, SimilaritySpec};
//! use graphlearn::solvers::{self, SolverConfig};
//! use graphlearn::synth;
//!
//! let truth = synth::planted_k_component(8, 2, 0.6, (0.5, 2.0), 1)?;
//! let x = synth::sample_lgmrf(&truth.laplacian(), 1000, 2)?;
//! let s = preprocess::similarity(&ReturnsMatrix::from_matrix(x)?, SimilaritySpec::correlation())?;
//! let est = solvers::learn_k_component_gaussian(&s, &SolverConfig::default().with_k(2), None)?;
//! assert!(est.converged);
//! # Ok::<(), graphlearn::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod io;
pub mod metrics;
pub mod ops;
pub mod preprocess;
pub mod solvers;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use ops::{SymmetricMatrix, WeightVector};
pub use solvers::{GraphEstimate, Method, SolverConfig};

/// Re-export so downstream code does not need a direct nalgebra dependency.
pub use nalgebra::{DMatrix, DVector};
