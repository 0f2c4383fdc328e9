//! Bruhat order on the symmetric group.
//!
//! Atoms and coatoms of intervals, the graphs their cover labels span, closed
//! forms for the extremal gap `c(I) - a(I)`, and an exhaustive engine that
//! checks those closed forms against every interval of `S_n` for small `n`.

pub mod bruhat;
pub mod enumerator;
pub mod error;
pub mod extremal;
pub mod graphs;
pub mod perm;

pub use bruhat::{bruhat_leq, bruhat_leq_oracle, is_cover, CoverLabelSet, CoverSide, Interval};
pub use enumerator::{build_order_cache, OrderCache, ScanResult};
pub use error::{CacheError, Error, Result};
pub use graphs::{LabeledGraph, SetPartition};
pub use perm::{PermRank, Permutation, Transposition};
