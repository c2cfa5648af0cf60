//! Finite topologies on labelled ground sets, seen as quasi-orders, together
//! with the bialgebra-style structure maps they carry: ground-set-splitting
//! and in-place-refining coproducts on topologies and on two pair families
//! (topology with a distinguished open set, topology with an admissible
//! refinement), the products and partial products connecting them, and a
//! verifier that exhaustively confirms the expected identities on small
//! ground sets.
//!
//! Organization:
//!
//! * [`preorder`]: the [`preorder::Topology`] type (reflexive transitive
//!   relation as bitmask rows), restriction, disjoint union, quotient,
//!   admissibility, degree.
//! * [`enumerate`]: exhaustive and canonical enumeration on small grounds.
//! * [`freemod`]: rational linear combinations over tensor basis keys.
//! * [`ops`]: the structure maps.
//! * [`verify`]: named exhaustive checks of the identities, with fault
//!   injection demonstrating that every check can fail.
//! * [`exec`]: sequential or data-parallel evaluation of the sweeps.

pub mod enumerate;
pub mod error;
pub mod exec;
pub mod freemod;
pub mod ops;
pub mod preorder;
pub mod verify;

pub use error::{Error, Result};
pub use exec::ExecMode;
pub use freemod::{BasisKey, Coeff, LinComb, TensorKind};
pub use ops::Mutation;
pub use preorder::{AdmissiblePair, Label, LabelSet, OpenSet, Partition, Topology, MAX_GROUND_SIZE};
pub use verify::VerificationReport;
