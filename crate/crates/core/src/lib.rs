//! Bond percolation on large-girth and expander graphs.
//!
//! The crate bundles the pieces needed to probe whether the critical
//! probability `p_c` is determined by local geometry:
//!
//! * [`graph`]: immutable adjacency-array graphs, balls, girth, rooted
//!   isomorphism and non-backtracking path counts.
//! * [`generators`]: regular tree balls, configuration-model random regular
//!   graphs, tori, slabs, triangular tori and Cayley balls of `Z * Z * Z_k`.
//! * [`spectral`]: Dirichlet bottom-of-spectrum estimates, spectral gaps,
//!   Cheeger brackets and a dense Jacobi eigensolver.
//! * [`walks`]: escape probabilities of simple random walk, exact and Monte
//!   Carlo.
//! * [`percolation`]: Bernoulli bond percolation, cluster statistics, sweeps,
//!   threshold bisection and exhaustive small-graph oracles.
//! * [`exploration`]: the sprinkled exploration process on large-girth
//!   graphs together with its drift and threshold bounds.
//!
//! Monte Carlo loops run on rayon when the `parallel` feature is enabled
//! (the default). Every random quantity is a pure function of a seed and an
//! index, so results do not depend on the number of threads.

pub mod error;
pub mod exploration;
pub mod generators;
pub mod graph;
pub mod par;
pub mod percolation;
pub mod rng;
pub mod spectral;
pub mod walks;

pub use error::{Error, Result};
pub use generators::{Family, Generated, GeneratorSpec};
pub use graph::{Girth, Graph, RootedBall, VertexSet};

/// Library version, recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
