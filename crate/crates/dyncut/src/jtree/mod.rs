//! Collections of j-trees: the multiplicative-weights tree collection, the
//! dynamic j-tree built from each tree, and the measured quality of the whole
//! collection.

mod collection;
mod instance;
mod mwu;

pub use collection::{collection_quality, tree_seeds, JTreeCollection, Snapshot};
pub use instance::{CoreCounters, JTreeInstance, TreeSeed};
pub use mwu::{mwu_build, mwu_build_with, MwuConfig, MwuOutcome, MwuTree};
