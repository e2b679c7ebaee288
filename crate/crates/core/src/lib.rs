//! Self-loops and multiple edges in configuration-model random graphs.
//!
//! The crate covers the undirected, directed and bipartite configuration
//! models. It provides
//!
//! * degree sequences and their factorial moments ([`degseq`]),
//! * uniform half-edge pairings, an exhaustive enumerator for small
//!   instances and the rewiring couplings ([`pairing`]),
//! * loop and multi-edge statistics ([`stats`]),
//! * exact Poisson means, Stein factors and simplicity estimates ([`limits`]),
//! * Poisson distances, thinning and normal-approximation checks ([`dist`]),
//! * seeded, thread-count independent Monte Carlo ([`montecarlo`]).
//!
//! ```
//! use cmloops::degseq::Degrees;
//! use cmloops::limits::lambda_pair;
//!
//! let k4 = Degrees::regular(4, 3).unwrap();
//! let l = lambda_pair(&k4);
//! assert_eq!(l.lambda_s.to_string(), "12/11");
//! ```

pub mod degseq;
pub mod dist;
pub mod error;
pub mod exact;
pub mod exact_law;
pub mod limits;
pub mod montecarlo;
pub mod pairing;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
