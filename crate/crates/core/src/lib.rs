//! Incongruence measures for pairs of binary phylogenetic trees.
//!
//! The crate computes TBR and rSPR distances, the hybridization number and
//! the binary-character parsimony distance through agreement forests. It also
//! builds display graphs, derives tree decompositions of bounded width from
//! agreement forests, and evaluates monadic second-order formulas over the
//! display graph so the logical formulations can be checked against the
//! direct algorithms on small inputs.

pub mod decomposition;
pub mod displaygraph;
pub mod distances;
mod error;
pub mod forests;
pub mod msol;
pub mod treeio;

pub use error::{Error, Result};
pub use treeio::{PhyloTree, TreeKind, RHO};
