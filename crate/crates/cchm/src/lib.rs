//! Learning maximal ancestral graphs (MAGs) from continuous observational
//! data when latent confounders may be present.
//!
//! The pipeline has three phases:
//!
//! 1. **Constraint phase** — Fisher-z conditional independence tests build a
//!    skeleton, record separating sets, and conservatively classify
//!    unshielded triples into definite colliders (whitelist) and definite
//!    non-colliders (blacklist).
//! 2. **Score phase** — hill climbing over orientations of the fixed
//!    skeleton, minimising a BIC score for MAGs whose likelihood is fitted
//!    by residual iterative conditional fitting (RICF) and decomposed over
//!    c-components for caching.
//! 3. **Effect phase** — edges whose two directed orientations are
//!    score-equivalent are directed by comparing interventional regression
//!    coefficients estimated from second moments.
//!
//! Supporting modules provide mixed-graph machinery (m-separation, latent
//! projection, Markov equivalence, MAG→PAG conversion), a linear Gaussian
//! SEM simulator, and structural accuracy metrics (precision/recall, SHD,
//! BSF).

pub mod effects;
pub mod graph;
pub mod independence;
pub mod metrics;
pub mod scoring;
pub mod search;
pub mod simulate;

pub use graph::{GraphKind, Mark, MixedGraph, Triple};
pub use search::{cchm, CchmConfig, CchmOutput};
