//! gdecomp: which multiplicities `m` admit a partition of the edge multiset
//! of `mK_n` into copies of a template graph `G`?
//!
//! The toolkit combines divisibility arithmetic, exact multicover search with
//! verifiable certificates, cyclic and group-orbit constructions, an
//! eigenspace-intersection infeasibility test for regular templates, and
//! feasibility bridges to 2-designs.

pub mod arithmetic;
pub mod canon;
pub mod cliques;
pub mod decompose;
pub mod designs;
pub mod error;
pub mod graph;
pub mod membership;
pub mod perm;
pub mod constructions;
pub mod search;
pub mod spectral;

pub use decompose::{complement_certificate, parse_certificate, superimpose, Decomposition};
pub use error::{Error, Result};
pub use graph::{builtin, parse_graph, SimpleGraph};
pub use perm::{parse_gens, Perm, PermutationGens};
pub use search::{exact_multicover_search, SearchOutcome};
