//! Signed set-valued product tables.
//!
//! A table assigns every ordered pair of labels from a signed alphabet a
//! nonempty set of labels. This crate validates such tables against an
//! eight-point axiom battery, analyzes their deterministic structure and
//! the relation they encode, builds new tables from monoids and groups,
//! joins tables over sort families, and derives tables from finite
//! relational structures by relation composition.
//!
//! Tables come in two storage forms: explicit (total on the alphabet) and
//! windowed (rule-generated fragments of an unbounded table, where queries
//! past the stored window fail loudly instead of guessing).

pub mod analysis;
pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod label;
pub mod oracle;
pub mod sampler;
pub mod table;
pub mod typed;
pub mod validate;

pub use error::{Error, Result};
pub use label::{Label, LabelId, LabelSet, Sign, SignedAlphabet};
pub use table::{Cell, MultiTable, Unbounded};
pub use validate::{validate_table, AxiomId, ValidationReport};
