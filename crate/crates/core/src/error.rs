//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong while building, loading, or querying tables.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A label id was used that the alphabet does not declare.
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    /// A rule-backed product was queried outside the declared window.
    #[error("product `{left}`*`{right}` falls outside window {window}")]
    WindowExceeded {
        left: String,
        right: String,
        window: u32,
    },

    /// A derived cell whose relation composition never leaves the window empty-handed.
    #[error("composition of `{left}` and `{right}` is empty over the window")]
    EmptyComposition { left: String, right: String },

    /// Set-valued operations require nonempty operands.
    #[error("empty label set given to a product operation")]
    EmptySet,

    /// Inverse requested for a label that has none.
    #[error("label `{0}` has no inverse")]
    NoInverse(String),

    /// The alphabet must contain exactly one zero label.
    #[error("alphabet must declare exactly one zero label")]
    IdentityMissing,

    /// Two alphabets that must only share the zero label overlap elsewhere.
    #[error("alphabets overlap on `{0}` (only the zero label may be shared)")]
    AlphabetOverlap(String),

    /// A composition input fails the monoid laws.
    #[error("{side} factor is not a deterministic monoid: {reason}")]
    NotAMonoid { side: &'static str, reason: String },

    /// A Cayley table fails the group laws.
    #[error("not a group table: {0}")]
    NotAGroup(String),

    /// A sort-indexed label family breaks the regularity conditions.
    #[error("label family is not regular: {0}")]
    RegularityViolation(String),

    /// A set expected to be product-closed escapes itself.
    #[error("`{node}` is not product-closed: `{left}`*`{right}` escapes")]
    ClosureViolation {
        node: String,
        left: String,
        right: String,
    },

    /// An operation that needs negative labels got a table without any.
    #[error("table has no negative labels")]
    EmptyNegativePart,

    /// A relational structure declared an empty window.
    #[error("structure window is empty")]
    EmptyWindow,

    /// Two tables that must share an alphabet do not.
    #[error("alphabets do not match: {0}")]
    AlphabetMismatch(String),

    /// A generator was called with unusable parameters.
    #[error("bad parameters: {0}")]
    BadParams(String),

    /// A file or JSON document does not match the expected shape.
    #[error("format error: {0}")]
    Format(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
