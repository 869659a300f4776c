//! Finite p-group engine built on power-commutator presentations.
//!
//! The crate decides the normally constrained and thin properties, computes
//! derivations into normal abelian subgroups, lifts them to automorphisms of
//! order `p`, and emits certificates of non-inner automorphisms that can be
//! re-checked independently.
//!
//! ```
//! use pgroup::PcGroup;
//!
//! let g = PcGroup::from_text("p 3\nn 3\ncomm 2 1 = 3:1").unwrap();
//! let series = g.lower_central_series();
//! let orders: Vec<u64> = series.iter().map(|s| s.order()).collect();
//! assert_eq!(orders, vec![27, 3, 1]);
//! ```

pub mod automorphism;
pub mod certificate;
pub mod corpus;
pub mod derivation;
mod error;
mod linalg;
pub mod pc;
pub mod structure;
pub mod subgroup;

pub use automorphism::{Automorphism, Route};
pub use certificate::Certificate;
pub use derivation::{Derivation, GModule};
pub use error::{Error, FaultKind, Result};
pub use pc::{GroupElement, PcGroup, PcPresentation, Word};
pub use structure::StructureReport;
pub use subgroup::Subgroup;
