//! Dynamic cut sparsification and j-tree hierarchies for graphs undergoing
//! edge updates and vertex splits.

pub mod bundle;
pub mod cli;
pub mod forest;
pub mod graph;
pub mod hierarchy;
pub mod io;
pub mod jtree;
pub mod lsst;
pub mod msf;
pub mod oracle;
pub mod queries;
pub mod report;
pub mod sparsifier;
pub mod verify;
pub mod workload;
