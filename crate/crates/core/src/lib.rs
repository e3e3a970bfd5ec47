//! Computational group theory for pairwise generation in symmetric groups of
//! even degree.
//!
//! The crate covers:
//!
//! * permutations, cycle types and exact generation tests ([`perm`], [`chain`]);
//! * the maximal-subgroup families `M(1)`, `M(2)` indexed by point subsets Δ,
//!   covering checks and the covering-number upper bound ([`families`]);
//! * the pools `C(Δ)` of constrained cycles inside each `M_Δ`: counts, uniform
//!   sampling, exact fractions `f_Δ(H)` and conjugate counts ([`cdelta`]);
//! * explicit local-lemma bounds and threshold certificates ([`bounds`], [`lll`]);
//! * a resampling constructor for pairwise generating sets with independently
//!   verifiable certificates ([`construct`]);
//! * exact small-degree oracles: covering numbers, clique numbers of generation
//!   graphs, generation probabilities and Turán bounds ([`oracles`]).

pub mod bounds;
pub mod cdelta;
pub mod chain;
pub mod combin;
pub mod construct;
pub mod error;
pub mod families;
pub mod lll;
pub mod oracles;
pub mod perm;

pub use chain::{generation_class, group_order, GenerationClass, StabilizerChain};
pub use error::{Error, Result};
pub use families::{DeltaIndex, Family, SubgroupDescriptor};
pub use perm::{CycleType, Parity, Permutation};

/// Version string embedded in every certificate and report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
