//! Dynamic forest structures: link-cut trees for path queries and Euler-tour
//! trees for subtree aggregates.

pub mod ett;
pub mod lct;

pub use ett::EulerTourForest;
pub use lct::LinkCutForest;
