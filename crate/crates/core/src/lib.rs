//! Tree groups of Whitney towers as finitely presented abelian groups.
//!
//! [`trees`] handles the combinatorics, [`abgroup`] the exact integer linear
//! algebra, [`tautower`] assembles the framed, reduced and twisted groups,
//! [`lie`] supplies the free and quasi-Lie side, and [`forest`] models
//! intersection forests with their moves. [`acceptance`] bundles the
//! end-to-end checks shared by the test suite and the command-line tool.

pub mod abgroup;
pub mod acceptance;
pub mod check;
pub mod forest;
pub mod lie;
pub mod tautower;
pub mod trees;

pub use check::{all_pass, Check};
pub use num_bigint::BigInt;

/// Arbitrary-precision integer used by every tree group.
pub type Int = BigInt;
pub type Matrix = abgroup::IntMatrix<Int>;
pub type Group = abgroup::Presentation<Int>;
pub type Structure = abgroup::GroupStructure<Int>;
pub type Element = abgroup::ElementNF<Int>;
